#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace planverify {

/// Exit codes: 0 safe / converged, 1 unsafe / not converged,
/// 2 usage, configuration, parse error or inconclusive verification.
int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

}  // namespace planverify
