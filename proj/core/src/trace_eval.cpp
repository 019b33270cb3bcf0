#include "planverify/ltlf.h"

namespace planverify {

namespace {

// Position i ranges over [0, n]; i == n is the (empty) end of the trace.
bool eval(const Formula & f, std::span<const Valuation> t, std::size_t i)
{
  const std::size_t n = t.size();
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Ap: return i < n && t[i].contains(f.ap());
    case Op::Not: return !eval(f.operand(), t, i);
    case Op::And:
      for (const auto & c : f.children()) {
        if (!eval(c, t, i)) return false;
      }
      return true;
    case Op::Or:
      for (const auto & c : f.children()) {
        if (eval(c, t, i)) return true;
      }
      return false;
    case Op::Next: return i + 1 < n && eval(f.operand(), t, i + 1);
    case Op::WeakNext: return i + 1 >= n || eval(f.operand(), t, i + 1);
    case Op::Until:
      for (std::size_t j = i; j < n; ++j) {
        if (eval(f.rhs(), t, j)) return true;
        if (!eval(f.lhs(), t, j)) return false;
      }
      return false;
    case Op::Release:
      for (std::size_t j = i; j < n; ++j) {
        if (!eval(f.rhs(), t, j)) return false;
        if (eval(f.lhs(), t, j)) return true;
      }
      return true;
    case Op::Eventually:
      for (std::size_t j = i; j < n; ++j) {
        if (eval(f.operand(), t, j)) return true;
      }
      return false;
    case Op::Globally:
      for (std::size_t j = i; j < n; ++j) {
        if (!eval(f.operand(), t, j)) return false;
      }
      return true;
    case Op::Implies: return !eval(f.lhs(), t, i) || eval(f.rhs(), t, i);
  }
  return false;
}

}  // namespace

bool holds_on_trace(const Formula & f, std::span<const Valuation> trace)
{
  return eval(f, trace, 0);
}

}  // namespace planverify
