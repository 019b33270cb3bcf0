#pragma once

#include "planverify/ltlf.h"

namespace planverify::detail {

Formula next_s(Formula f);
Formula weak_next_s(Formula f);
Formula until_s(Formula lhs, Formula rhs);
Formula release_s(Formula lhs, Formula rhs);

}  // namespace planverify::detail
