#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "planverify/ap.h"

namespace planverify {

enum class Op {
  True,
  False,
  Ap,
  Not,
  And,
  Or,
  Next,
  WeakNext,
  Until,
  Release,
  Eventually,
  Globally,
  Implies,
};

/// Immutable LTLf formula.
///
/// And/Or children are kept as flattened, sorted, duplicate-free sets with
/// constants folded, so two formulas built from the same boolean structure
/// compare equal. Temporal sugar (F, G, ->) is preserved until normalize().
class Formula
{
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula atom(AtomicProposition ap);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula next(Formula f);
  static Formula weak_next(Formula f);
  static Formula until(Formula lhs, Formula rhs);
  static Formula release(Formula lhs, Formula rhs);
  static Formula eventually(Formula f);
  static Formula globally(Formula f);
  static Formula implies(Formula lhs, Formula rhs);

  Op op() const;
  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }
  bool is_literal() const;
  // NNF without sugar; the form progression operates on.
  bool is_normal() const;

  const AtomicProposition & ap() const;
  std::span<const Formula> children() const;
  const Formula & operand() const { return children()[0]; }
  const Formula & lhs() const { return children()[0]; }
  const Formula & rhs() const { return children()[1]; }

  std::size_t hash() const;
  std::size_t size() const;

  std::string to_string() const;

  friend bool operator==(const Formula & a, const Formula & b);
  friend std::strong_ordering operator<=>(const Formula & a,
                                          const Formula & b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula make(Op op,
                      std::vector<Formula> children,
                      const AtomicProposition * ap = nullptr);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash
{
  std::size_t operator()(const Formula & f) const { return f.hash(); }
};

/// Name -> proposition bindings for parse_ltlf.
using Bindings = std::map<std::string, AtomicProposition, std::less<>>;

/// Parses LTLf text. Propositions are either quoted canonical APs
/// ("ap/...") or names looked up in `bindings`.
///
/// Precedence, tightest first: unary (! X N F G), U R, &, |, ->.
/// Unicode forms of the boolean connectives are accepted as well.
Formula parse_ltlf(std::string_view text, const Bindings & bindings = {});

/// NNF with sugar removed (F p = true U p, G p = false R p,
/// p -> q = !p | q). Idempotent.
Formula normalize(const Formula & f);

/// One step of formula progression against the letter `holds`.
Formula progress(const Formula & f,
                 const std::function<bool(const AtomicProposition &)> & holds);
Formula progress(const Formula & f, const Valuation & v);

/// Whether the empty remaining trace satisfies `f`.
bool empty_accepts(const Formula & f);

/// Direct recursive finite-trace semantics; independent of progression.
/// Evaluated at position 0; the empty trace is allowed.
bool holds_on_trace(const Formula & f, std::span<const Valuation> trace);

/// Distinct propositions appearing in `f`.
Alphabet propositions(const Formula & f);

}  // namespace planverify
