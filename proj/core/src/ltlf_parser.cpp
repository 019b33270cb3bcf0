#include <cctype>

#include "planverify/error.h"
#include "planverify/ltlf.h"

namespace planverify {

namespace {

enum class Tok {
  End,
  LParen,
  RParen,
  Not,
  And,
  Or,
  Implies,
  Next,
  WeakNext,
  Eventually,
  Globally,
  Until,
  Release,
  True,
  False,
  Quoted,
  Name,
};

struct Token
{
  Tok kind;
  std::size_t pos;
  std::string text;
};

class Lexer
{
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run()
  {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, i_, {}});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_space()
  {
    while (i_ < src_.size()
           && std::isspace(static_cast<unsigned char>(src_[i_]))) {
      ++i_;
    }
  }

  bool starts_with(std::string_view s) const
  {
    return src_.substr(i_, s.size()) == s;
  }

  Token next()
  {
    std::size_t start = i_;
    auto single = [&](Tok k, std::size_t len) {
      i_ += len;
      return Token{k, start, {}};
    };
    // Multi-byte UTF-8 connectives.
    if (starts_with("\xC2\xAC")) return single(Tok::Not, 2);      // ¬
    if (starts_with("\xE2\x88\xA7")) return single(Tok::And, 3);  // ∧
    if (starts_with("\xE2\x88\xA8")) return single(Tok::Or, 3);   // ∨
    if (starts_with("\xE2\x86\x92")) return single(Tok::Implies, 3);  // →
    if (starts_with("->")) return single(Tok::Implies, 2);
    if (starts_with("=>")) return single(Tok::Implies, 2);
    if (starts_with("&&")) return single(Tok::And, 2);
    if (starts_with("||")) return single(Tok::Or, 2);
    char c = src_[i_];
    switch (c) {
      case '(': return single(Tok::LParen, 1);
      case ')': return single(Tok::RParen, 1);
      case '!':
      case '~': return single(Tok::Not, 1);
      case '&': return single(Tok::And, 1);
      case '|': return single(Tok::Or, 1);
      case '"':
      case '\'': {
        auto close = src_.find(c, i_ + 1);
        if (close == std::string_view::npos) {
          throw SyntaxError(start, "unterminated quoted proposition");
        }
        std::string text(src_.substr(i_ + 1, close - i_ - 1));
        i_ = close + 1;
        return {Tok::Quoted, start, std::move(text)};
      }
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i_ < src_.size()
             && (std::isalnum(static_cast<unsigned char>(src_[i_]))
                 || src_[i_] == '_')) {
        ++i_;
      }
      std::string word(src_.substr(start, i_ - start));
      if (word == "X") return {Tok::Next, start, word};
      if (word == "N" || word == "WX") return {Tok::WeakNext, start, word};
      if (word == "F") return {Tok::Eventually, start, word};
      if (word == "G") return {Tok::Globally, start, word};
      if (word == "U") return {Tok::Until, start, word};
      if (word == "R") return {Tok::Release, start, word};
      if (word == "true" || word == "TRUE" || word == "True") {
        return {Tok::True, start, word};
      }
      if (word == "false" || word == "FALSE" || word == "False") {
        return {Tok::False, start, word};
      }
      return {Tok::Name, start, std::move(word)};
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser
{
 public:
  Parser(std::vector<Token> tokens, const Bindings & bindings)
      : tokens_(std::move(tokens)), bindings_(bindings)
  {
  }

  Formula parse()
  {
    Formula f = implication();
    if (peek().kind != Tok::End) {
      throw SyntaxError(peek().pos, "unexpected trailing input");
    }
    return f;
  }

 private:
  const Token & peek() const { return tokens_[i_]; }
  const Token & take() { return tokens_[i_++]; }
  bool accept(Tok k)
  {
    if (peek().kind != k) return false;
    ++i_;
    return true;
  }

  Formula implication()
  {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) {
      return Formula::implies(std::move(lhs), implication());
    }
    return lhs;
  }

  Formula disjunction()
  {
    std::vector<Formula> parts{conjunction()};
    while (accept(Tok::Or)) parts.push_back(conjunction());
    if (parts.size() == 1) return parts[0];
    return Formula::disjunction(std::move(parts));
  }

  Formula conjunction()
  {
    std::vector<Formula> parts{binary_temporal()};
    while (accept(Tok::And)) parts.push_back(binary_temporal());
    if (parts.size() == 1) return parts[0];
    return Formula::conjunction(std::move(parts));
  }

  Formula binary_temporal()
  {
    Formula lhs = unary();
    if (accept(Tok::Until)) return Formula::until(lhs, binary_temporal());
    if (accept(Tok::Release)) return Formula::release(lhs, binary_temporal());
    return lhs;
  }

  Formula unary()
  {
    switch (peek().kind) {
      case Tok::Not: take(); return Formula::negation(unary());
      case Tok::Next: take(); return Formula::next(unary());
      case Tok::WeakNext: take(); return Formula::weak_next(unary());
      case Tok::Eventually: take(); return Formula::eventually(unary());
      case Tok::Globally: take(); return Formula::globally(unary());
      default: return primary();
    }
  }

  Formula primary()
  {
    const Token & t = take();
    switch (t.kind) {
      case Tok::True: return Formula::top();
      case Tok::False: return Formula::bottom();
      case Tok::LParen: {
        Formula inner = implication();
        if (!accept(Tok::RParen)) {
          throw SyntaxError(peek().pos, "expected ')'");
        }
        return inner;
      }
      case Tok::Quoted:
        try {
          return Formula::atom(AtomicProposition::parse(t.text));
        }
        catch (const Error & e) {
          throw SyntaxError(t.pos, e.what());
        }
      case Tok::Name: {
        auto it = bindings_.find(t.text);
        if (it == bindings_.end()) {
          throw Error(ErrorKind::UnknownProposition,
                      "unknown proposition '" + t.text + "' at position "
                          + std::to_string(t.pos));
        }
        return Formula::atom(it->second);
      }
      case Tok::End: throw SyntaxError(t.pos, "unexpected end of input");
      default: throw SyntaxError(t.pos, "expected a formula");
    }
  }

  std::vector<Token> tokens_;
  const Bindings & bindings_;
  std::size_t i_ = 0;
};

int level(Op op)
{
  switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Globally: return 5;
    default: return 6;
  }
}

void print(const Formula & f, std::string & out, int min_level);

void print_child(const Formula & f, std::string & out, int min_level)
{
  if (level(f.op()) < min_level) {
    out += '(';
    print(f, out, 0);
    out += ')';
  } else {
    print(f, out, min_level);
  }
}

void print(const Formula & f, std::string & out, int min_level)
{
  (void)min_level;
  auto unary = [&](const char * token) {
    out += token;
    print_child(f.operand(), out, 5);
  };
  auto nary = [&](const char * sep, int child_level) {
    bool first = true;
    for (const auto & c : f.children()) {
      if (!first) out += sep;
      first = false;
      print_child(c, out, child_level);
    }
  };
  switch (f.op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Ap: out += '"' + f.ap().to_string() + '"'; break;
    case Op::Not: unary("!"); break;
    case Op::Next: unary("X "); break;
    case Op::WeakNext: unary("N "); break;
    case Op::Eventually: unary("F "); break;
    case Op::Globally: unary("G "); break;
    case Op::And: nary(" & ", 4); break;
    case Op::Or: nary(" | ", 3); break;
    case Op::Until:
    case Op::Release:
      print_child(f.lhs(), out, 5);
      out += f.op() == Op::Until ? " U " : " R ";
      print_child(f.rhs(), out, 4);
      break;
    case Op::Implies:
      print_child(f.lhs(), out, 2);
      out += " -> ";
      print_child(f.rhs(), out, 1);
      break;
  }
}

}  // namespace

Formula parse_ltlf(std::string_view text, const Bindings & bindings)
{
  Lexer lexer(text);
  auto tokens = lexer.run();
  if (tokens.size() == 1) throw SyntaxError(0, "empty formula");
  return Parser(std::move(tokens), bindings).parse();
}

std::string Formula::to_string() const
{
  std::string out;
  print(*this, out, 0);
  return out;
}

}  // namespace planverify
