#include "formula_internal.h"
#include "planverify/ltlf.h"

namespace planverify {

namespace {

// Holds on every non-empty remaining trace; fails on the empty one.
const Formula & nonempty_marker()
{
  static const Formula f = Formula::until(Formula::top(), Formula::top());
  return f;
}

// Holds only on the empty remaining trace.
const Formula & empty_marker()
{
  static const Formula f = Formula::release(Formula::bottom(), Formula::bottom());
  return f;
}

Formula step(const Formula & f,
             const std::function<bool(const AtomicProposition &)> & holds)
{
  using namespace detail;
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::Ap: return holds(f.ap()) ? Formula::top() : Formula::bottom();
    case Op::Not:
      return holds(f.operand().ap()) ? Formula::bottom() : Formula::top();
    case Op::And:
    case Op::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      bool conj = f.op() == Op::And;
      for (const auto & c : f.children()) {
        Formula p = step(c, holds);
        if (conj && p.is_false()) return p;
        if (!conj && p.is_true()) return p;
        parts.push_back(std::move(p));
      }
      return conj ? Formula::conjunction(std::move(parts))
                  : Formula::disjunction(std::move(parts));
    }
    case Op::Next:
      // Strong next also requires the next position to exist.
      return Formula::conjunction({f.operand(), nonempty_marker()});
    case Op::WeakNext:
      return Formula::disjunction({f.operand(), empty_marker()});
    case Op::Until: {
      Formula r = step(f.rhs(), holds);
      if (r.is_true()) return r;
      return Formula::disjunction(
          {r, Formula::conjunction({step(f.lhs(), holds), f})});
    }
    case Op::Release: {
      Formula r = step(f.rhs(), holds);
      if (r.is_false()) return r;
      return Formula::conjunction(
          {r, Formula::disjunction({step(f.lhs(), holds), f})});
    }
    default: break;
  }
  return step(normalize(f), holds);
}

}  // namespace

Formula progress(const Formula & f,
                 const std::function<bool(const AtomicProposition &)> & holds)
{
  if (!f.is_normal()) return step(normalize(f), holds);
  return step(f, holds);
}

Formula progress(const Formula & f, const Valuation & v)
{
  return progress(f, [&v](const AtomicProposition & ap) {
    return v.contains(ap);
  });
}

bool empty_accepts(const Formula & f)
{
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Ap: return false;
    case Op::Not: return !empty_accepts(f.operand());
    case Op::And:
      for (const auto & c : f.children()) {
        if (!empty_accepts(c)) return false;
      }
      return true;
    case Op::Or:
      for (const auto & c : f.children()) {
        if (empty_accepts(c)) return true;
      }
      return false;
    case Op::Next: return false;
    case Op::WeakNext: return true;
    case Op::Until: return false;
    case Op::Release: return true;
    case Op::Eventually: return false;
    case Op::Globally: return true;
    case Op::Implies: return !empty_accepts(f.lhs()) || empty_accepts(f.rhs());
  }
  return false;
}

}  // namespace planverify
