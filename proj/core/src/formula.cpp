#include <algorithm>
#include <cassert>
#include <optional>

#include "formula_internal.h"
#include "planverify/ltlf.h"

namespace planverify {

struct Formula::Node
{
  Op op;
  std::optional<AtomicProposition> ap;
  std::vector<Formula> children;
  std::size_t hash = 0;
  std::size_t size = 1;
  bool normal = true;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value)
{
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const Formula & shared_true()
{
  static const Formula f = Formula::top();
  return f;
}

}  // namespace

Formula::Formula() : Formula(shared_true()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::make(Op op,
                      std::vector<Formula> children,
                      const AtomicProposition * ap)
{
  auto node = std::make_shared<Node>();
  node->op = op;
  if (ap) node->ap = *ap;
  std::size_t h = mix(0, static_cast<std::size_t>(op) + 1);
  if (ap) h = mix(h, std::hash<std::string>{}(ap->to_string()));
  bool normal = true;
  std::size_t size = 1;
  for (const auto & c : children) {
    h = mix(h, c.hash());
    size += c.size();
    normal = normal && c.is_normal();
  }
  switch (op) {
    case Op::Eventually:
    case Op::Globally:
    case Op::Implies: normal = false; break;
    case Op::Not: normal = children[0].op() == Op::Ap; break;
    default: break;
  }
  node->children = std::move(children);
  node->hash = h;
  node->size = size;
  node->normal = normal;
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

Formula Formula::top()
{
  static const Formula f = make(Op::True, {});
  return f;
}

Formula Formula::bottom()
{
  static const Formula f = make(Op::False, {});
  return f;
}

Formula Formula::atom(AtomicProposition ap)
{
  return make(Op::Ap, {}, &ap);
}

Formula Formula::negation(Formula f)
{
  switch (f.op()) {
    case Op::True: return bottom();
    case Op::False: return top();
    case Op::Not: return f.operand();
    default: return make(Op::Not, {std::move(f)});
  }
}

namespace {

bool contains_sorted(const std::vector<Formula> & set, const Formula & f)
{
  return std::binary_search(set.begin(), set.end(), f);
}

// Shared body of conjunction/disjunction. `unit` is the neutral constant,
// `zero` the absorbing one.
std::optional<std::vector<Formula>> fold_children(std::vector<Formula> input,
                                                  Op self,
                                                  Op dual,
                                                  Op unit,
                                                  Op zero)
{
  std::vector<Formula> flat;
  flat.reserve(input.size());
  for (auto & c : input) {
    if (c.op() == self) {
      for (const auto & g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::vector<Formula> kept;
  kept.reserve(flat.size());
  for (auto & c : flat) {
    if (c.op() == zero) return std::nullopt;
    if (c.op() == unit) continue;
    kept.push_back(std::move(c));
  }
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

  // p and !p together collapse to the absorbing constant.
  for (const auto & c : kept) {
    if (c.op() == Op::Not && contains_sorted(kept, c.operand())) {
      return std::nullopt;
    }
  }

  // Absorption: p & (p | q) = p, and dually.
  std::vector<Formula> result;
  result.reserve(kept.size());
  for (const auto & c : kept) {
    bool absorbed = false;
    if (c.op() == dual) {
      for (const auto & g : c.children()) {
        if (contains_sorted(kept, g)) {
          absorbed = true;
          break;
        }
      }
    }
    if (!absorbed) result.push_back(c);
  }
  return result;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> children)
{
  auto folded =
      fold_children(std::move(children), Op::And, Op::Or, Op::True, Op::False);
  if (!folded) return bottom();
  if (folded->empty()) return top();
  if (folded->size() == 1) return (*folded)[0];
  return make(Op::And, std::move(*folded));
}

Formula Formula::disjunction(std::vector<Formula> children)
{
  auto folded =
      fold_children(std::move(children), Op::Or, Op::And, Op::False, Op::True);
  if (!folded) return top();
  if (folded->empty()) return bottom();
  if (folded->size() == 1) return (*folded)[0];
  return make(Op::Or, std::move(*folded));
}

Formula Formula::next(Formula f) { return make(Op::Next, {std::move(f)}); }

Formula Formula::weak_next(Formula f)
{
  return make(Op::WeakNext, {std::move(f)});
}

Formula Formula::until(Formula lhs, Formula rhs)
{
  return make(Op::Until, {std::move(lhs), std::move(rhs)});
}

Formula Formula::release(Formula lhs, Formula rhs)
{
  return make(Op::Release, {std::move(lhs), std::move(rhs)});
}

Formula Formula::eventually(Formula f)
{
  return make(Op::Eventually, {std::move(f)});
}

Formula Formula::globally(Formula f)
{
  return make(Op::Globally, {std::move(f)});
}

Formula Formula::implies(Formula lhs, Formula rhs)
{
  return make(Op::Implies, {std::move(lhs), std::move(rhs)});
}

Op Formula::op() const { return node_->op; }

bool Formula::is_literal() const
{
  return op() == Op::Ap || (op() == Op::Not && operand().op() == Op::Ap);
}

bool Formula::is_normal() const { return node_->normal; }

const AtomicProposition & Formula::ap() const
{
  assert(node_->ap);
  return *node_->ap;
}

std::span<const Formula> Formula::children() const
{
  return node_->children;
}

std::size_t Formula::hash() const { return node_->hash; }

std::size_t Formula::size() const { return node_->size; }

bool operator==(const Formula & a, const Formula & b)
{
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.size() != b.size()) {
    return false;
  }
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Formula & a, const Formula & b)
{
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.op() <=> b.op(); c != 0) return c;
  if (a.op() == Op::Ap) return a.ap() <=> b.ap();
  auto ac = a.children();
  auto bc = b.children();
  if (auto c = ac.size() <=> bc.size(); c != 0) return c;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (auto c = ac[i] <=> bc[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// Simplifying temporal constructors used by normalize() and progression.
// Each rule holds on every non-empty trace and agrees with empty_accepts.
namespace detail {

Formula next_s(Formula f)
{
  if (f.is_false()) return f;
  return Formula::next(std::move(f));
}

Formula weak_next_s(Formula f)
{
  if (f.is_true()) return f;
  return Formula::weak_next(std::move(f));
}

Formula until_s(Formula lhs, Formula rhs)
{
  if (rhs.is_false()) return rhs;
  return Formula::until(std::move(lhs), std::move(rhs));
}

Formula release_s(Formula lhs, Formula rhs)
{
  if (rhs.is_true()) return rhs;
  return Formula::release(std::move(lhs), std::move(rhs));
}

}  // namespace detail

namespace {

Formula nnf(const Formula & f, bool neg)
{
  using namespace detail;
  auto map_children = [&](bool n) {
    std::vector<Formula> out;
    out.reserve(f.children().size());
    for (const auto & c : f.children()) out.push_back(nnf(c, n));
    return out;
  };
  switch (f.op()) {
    case Op::True: return neg ? Formula::bottom() : Formula::top();
    case Op::False: return neg ? Formula::top() : Formula::bottom();
    case Op::Ap: return neg ? Formula::negation(f) : f;
    case Op::Not: return nnf(f.operand(), !neg);
    case Op::And:
      return neg ? Formula::disjunction(map_children(true))
                 : Formula::conjunction(map_children(false));
    case Op::Or:
      return neg ? Formula::conjunction(map_children(true))
                 : Formula::disjunction(map_children(false));
    case Op::Next:
      return neg ? weak_next_s(nnf(f.operand(), true))
                 : next_s(nnf(f.operand(), false));
    case Op::WeakNext:
      return neg ? next_s(nnf(f.operand(), true))
                 : weak_next_s(nnf(f.operand(), false));
    case Op::Until:
      return neg ? release_s(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : until_s(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Release:
      return neg ? until_s(nnf(f.lhs(), true), nnf(f.rhs(), true))
                 : release_s(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Eventually:
      return neg ? release_s(Formula::bottom(), nnf(f.operand(), true))
                 : until_s(Formula::top(), nnf(f.operand(), false));
    case Op::Globally:
      return neg ? until_s(Formula::top(), nnf(f.operand(), true))
                 : release_s(Formula::bottom(), nnf(f.operand(), false));
    case Op::Implies:
      return neg ? Formula::conjunction({nnf(f.lhs(), false), nnf(f.rhs(), true)})
                 : Formula::disjunction({nnf(f.lhs(), true), nnf(f.rhs(), false)});
  }
  return f;
}

void collect_aps(const Formula & f, std::vector<AtomicProposition> & out)
{
  if (f.op() == Op::Ap) {
    out.push_back(f.ap());
    return;
  }
  for (const auto & c : f.children()) collect_aps(c, out);
}

}  // namespace

Formula normalize(const Formula & f)
{
  return nnf(f, false);
}

Alphabet propositions(const Formula & f)
{
  std::vector<AtomicProposition> aps;
  collect_aps(f, aps);
  return make_alphabet(std::move(aps));
}

}  // namespace planverify
