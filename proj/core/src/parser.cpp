#include "tdlite/parser.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>

namespace tdl {

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation loc;
};

[[noreturn]] void syntax_error(const SourceLocation& loc, const std::string& msg) {
  throw Error("SYNTAX_ERROR", msg, loc);
}

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

// Shared by the KB and LTL readers; the symbol table differs.
class Lexer {
 public:
  Lexer(std::string_view text, std::initializer_list<std::string_view> symbols) : text_(text), symbols_(symbols) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      SourceLocation loc{line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back(Token{Tok::End, "", loc});
        return out;
      }
      char ch = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          advance();
        }
        out.push_back(Token{Tok::Ident, std::string(text_.substr(start, pos_ - start)), loc});
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        out.push_back(Token{Tok::Int, std::string(text_.substr(start, pos_ - start)), loc});
      } else {
        std::string_view best;
        for (auto sym : symbols_) {
          if (sym.size() > best.size() && text_.substr(pos_, sym.size()) == sym) best = sym;
        }
        if (best.empty()) syntax_error(loc, std::string("unexpected character '") + ch + "'");
        for (std::size_t i = 0; i < best.size(); ++i) advance();
        out.push_back(Token{Tok::Sym, std::string(best), loc});
      }
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::vector<std::string_view> symbols_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  Token next() {
    Token t = peek();
    if (i_ < toks_.size() - 1) ++i_;
    return t;
  }
  bool at(std::string_view text) const { return peek().kind != Tok::End && peek().text == text; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool accept(std::string_view text) {
    if (!at(text)) return false;
    next();
    return true;
  }
  Token expect(std::string_view text) {
    if (!at(text)) syntax_error(peek().loc, "expected '" + std::string(text) + "', found " + describe(peek()));
    return next();
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool is_concept_prefix(const std::string& w) {
  return w == "NOT" || w == "X" || w == "Y" || w == "SOMF" || w == "SOMP" || w == "ALWF" || w == "ALWP";
}

ConceptKind prefix_kind(const std::string& w) {
  if (w == "NOT") return ConceptKind::Not;
  if (w == "X") return ConceptKind::NextF;
  if (w == "Y") return ConceptKind::NextP;
  if (w == "SOMF") return ConceptKind::SomeF;
  if (w == "SOMP") return ConceptKind::SomeP;
  if (w == "ALWF") return ConceptKind::AlwF;
  return ConceptKind::AlwP;
}

class KbReader {
 public:
  explicit KbReader(std::string_view text) : ts_(Lexer(text, {">=", "(", ")", ",", "@", "-"}).run()) {}

  KnowledgeBase document() {
    KnowledgeBase kb;
    bool explicit_sig = false;
    if (ts_.accept("SIG")) {
      explicit_sig = true;
      while (!ts_.at_end() && !ts_.at("TBOX") && !ts_.at("ABOX")) declaration(kb.signature);
    }
    if (ts_.accept("TBOX")) {
      while (!ts_.at_end() && !ts_.at("ABOX")) kb.tbox.push_back(inclusion());
    }
    if (ts_.accept("ABOX")) {
      while (!ts_.at_end()) kb.abox.push_back(assertion());
    }
    if (!ts_.at_end()) syntax_error(ts_.peek().loc, "unexpected " + describe(ts_.peek()));
    if (!explicit_sig) infer_signature(kb);
    return kb;
  }

  Concept lone_concept() {
    Concept c = concept_expr();
    if (!ts_.at_end()) syntax_error(ts_.peek().loc, "unexpected " + describe(ts_.peek()) + " after concept");
    return c;
  }

 private:
  std::string name(const char* what) {
    const Token& t = ts_.peek();
    if (t.kind != Tok::Ident || is_reserved_word(t.text)) {
      syntax_error(t.loc, std::string("expected ") + what + ", found " + describe(t));
    }
    return ts_.next().text;
  }

  void declaration(Signature& sig) {
    Token kw = ts_.next();
    std::string n;
    if (kw.text == "concept") {
      n = name("concept name");
      sig.concept_names.insert(n);
    } else if (kw.text == "global" || kw.text == "local") {
      ts_.expect("role");
      n = name("role name");
      (kw.text == "global" ? sig.global_roles : sig.local_roles).insert(n);
    } else if (kw.text == "individual") {
      n = name("individual name");
      sig.individuals.insert(n);
    } else {
      syntax_error(kw.loc, "expected a declaration, found " + describe(kw));
    }
    sig.locations.emplace(n, kw.loc);
  }

  ConceptInclusion inclusion() {
    SourceLocation loc = ts_.peek().loc;
    Concept lhs = concept_expr();
    ts_.expect("SUB");
    Concept rhs = concept_expr();
    if (ts_.at("SUB")) syntax_error(ts_.peek().loc, "SUB is not associative");
    return ConceptInclusion{std::move(lhs), std::move(rhs), loc};
  }

  Concept concept_expr() {
    Concept c = conjunction();
    while (ts_.accept("OR")) c = Concept::disj(std::move(c), conjunction());
    return c;
  }

  Concept conjunction() {
    Concept c = prefixed();
    while (ts_.accept("AND")) c = Concept::conj(std::move(c), prefixed());
    return c;
  }

  Concept prefixed() {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident && is_concept_prefix(t.text)) {
      ConceptKind k = prefix_kind(ts_.next().text);
      return Concept::unary(k, prefixed());
    }
    return primary();
  }

  Concept primary() {
    const Token& t = ts_.peek();
    if (ts_.accept("(")) {
      Concept c = concept_expr();
      ts_.expect(")");
      return c;
    }
    if (ts_.accept("TOP")) return Concept::top();
    if (ts_.accept("BOT")) return Concept::bottom();
    if (ts_.accept(">=")) {
      const Token& q = ts_.peek();
      if (q.kind != Tok::Int) syntax_error(q.loc, "expected a number after '>=', found " + describe(q));
      std::uint32_t value = 0;
      auto [p, ec] = std::from_chars(q.text.data(), q.text.data() + q.text.size(), value);
      if (ec != std::errc{}) syntax_error(q.loc, "number out of range");
      ts_.next();
      std::string r = name("role name");
      bool inv = ts_.accept("-");
      return Concept::at_least(value, Role{r, inv});
    }
    if (t.kind == Tok::Ident && !is_reserved_word(t.text)) return Concept::atomic(ts_.next().text);
    syntax_error(t.loc, "expected a concept, found " + describe(t));
  }

  Assertion assertion() {
    SourceLocation loc = ts_.peek().loc;
    bool positive = !ts_.accept("NOT");
    std::string pred = name("concept or role name");
    ts_.expect("(");
    std::string a = name("individual name");
    std::optional<std::string> b;
    if (ts_.accept(",")) b = name("individual name");
    ts_.expect(")");
    ts_.expect("@");
    bool neg = ts_.accept("-");
    const Token& n = ts_.peek();
    if (n.kind != Tok::Int) syntax_error(n.loc, "expected a timestamp, found " + describe(n));
    std::uint64_t mag = 0;
    auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), mag);
    if (ec != std::errc{} || mag > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      syntax_error(n.loc, "timestamp out of range");
    }
    ts_.next();
    auto time = static_cast<std::int64_t>(mag);
    if (neg) time = -time;
    if (b) return RoleAssertion{positive, pred, a, *b, time, loc};
    return ConceptAssertion{positive, pred, a, time, loc};
  }

  // Without a SIG section every name is declared by use; roles default to local.
  static void infer_signature(KnowledgeBase& kb) {
    auto& sig = kb.signature;
    std::vector<const Concept*> stack;
    for (const auto& ci : kb.tbox) {
      stack.push_back(&ci.lhs);
      stack.push_back(&ci.rhs);
    }
    while (!stack.empty()) {
      const Concept* c = stack.back();
      stack.pop_back();
      if (c->kind() == ConceptKind::Atomic) {
        sig.concept_names.insert(c->name());
      } else if (c->kind() == ConceptKind::AtLeast) {
        sig.local_roles.insert(c->role().name);
      } else if (c->is_unary()) {
        stack.push_back(&c->operand());
      } else if (c->is_binary()) {
        stack.push_back(&c->lhs());
        stack.push_back(&c->rhs());
      }
    }
    for (const auto& a : kb.abox) {
      if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
        sig.concept_names.insert(ca->concept_name);
        sig.individuals.insert(ca->individual);
      } else {
        const auto& ra = std::get<RoleAssertion>(a);
        sig.local_roles.insert(ra.role_name);
        sig.individuals.insert(ra.subject);
        sig.individuals.insert(ra.object);
      }
    }
  }

  TokenStream ts_;
};

int concept_prec(ConceptKind k) {
  switch (k) {
    case ConceptKind::Or:
      return 0;
    case ConceptKind::And:
      return 1;
    default:
      return 2;
  }
}

void print_concept_to(std::ostream& os, const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Bottom:
      os << "BOT";
      return;
    case ConceptKind::Top:
      os << "TOP";
      return;
    case ConceptKind::Atomic:
      os << c.name();
      return;
    case ConceptKind::AtLeast:
      os << ">= " << c.cardinality() << ' ' << c.role().str();
      return;
    case ConceptKind::And:
    case ConceptKind::Or: {
      int p = concept_prec(c.kind());
      bool wrap_l = concept_prec(c.lhs().kind()) < p;
      bool wrap_r = concept_prec(c.rhs().kind()) <= p;
      if (wrap_l) os << '(';
      print_concept_to(os, c.lhs());
      if (wrap_l) os << ')';
      os << (c.kind() == ConceptKind::And ? " AND " : " OR ");
      if (wrap_r) os << '(';
      print_concept_to(os, c.rhs());
      if (wrap_r) os << ')';
      return;
    }
    default:
      break;
  }
  static const char* kNames[] = {"", "", "", "", "NOT", "", "", "X", "Y", "SOMF", "SOMP", "ALWF", "ALWP"};
  os << kNames[static_cast<int>(c.kind())] << ' ';
  bool wrap = c.operand().is_binary();
  if (wrap) os << '(';
  print_concept_to(os, c.operand());
  if (wrap) os << ')';
}

// LTL infix reader: precedence unary > & > | > -> > <->.
class LtlReader {
 public:
  explicit LtlReader(std::string_view text)
      : ts_(Lexer(text, {"(", ")", "~", "!", "&", "|", "->", "<->"}).run()) {}

  Ltl formula() {
    Ltl f = equivalence();
    if (!ts_.at_end()) syntax_error(ts_.peek().loc, "unexpected " + describe(ts_.peek()));
    return f;
  }

 private:
  Ltl equivalence() {
    Ltl f = implication();
    while (ts_.accept("<->")) f = ltl::iff(f, implication());
    return f;
  }

  Ltl implication() {
    Ltl f = disjunction();
    if (ts_.accept("->")) return ltl::implies(std::move(f), implication());
    return f;
  }

  Ltl disjunction() {
    Ltl f = conjunction();
    while (ts_.accept("|")) f = ltl::disj(std::move(f), conjunction());
    return f;
  }

  Ltl conjunction() {
    Ltl f = unary();
    while (ts_.accept("&")) f = Ltl::conj(std::move(f), unary());
    return f;
  }

  Ltl unary() {
    const Token& t = ts_.peek();
    if (ts_.accept("~") || ts_.accept("!")) return Ltl::negation(unary());
    if (t.kind == Tok::Ident) {
      const std::string& w = t.text;
      if (w == "X") return (ts_.next(), Ltl::next_f(unary()));
      if (w == "Y") return (ts_.next(), Ltl::next_p(unary()));
      if (w == "F") return (ts_.next(), Ltl::some_f(unary()));
      if (w == "O") return (ts_.next(), Ltl::some_p(unary()));
      if (w == "G") return (ts_.next(), ltl::always_f(unary()));
      if (w == "H") return (ts_.next(), ltl::always_p(unary()));
      if (w == "false") return (ts_.next(), Ltl::falsum());
      if (w == "true") return (ts_.next(), Ltl::truth());
      return Ltl::prop(ts_.next().text);
    }
    if (ts_.accept("(")) {
      Ltl f = equivalence();
      ts_.expect(")");
      return f;
    }
    syntax_error(t.loc, "expected a formula, found " + describe(t));
  }

  TokenStream ts_;
};

}  // namespace

KnowledgeBase parse_kb_unchecked(std::string_view text) { return KbReader(text).document(); }

KnowledgeBase parse_kb(std::string_view text) {
  KnowledgeBase kb = parse_kb_unchecked(text);
  auto diags = validate(kb);
  if (!diags.empty()) throw Error(diags.front().code, diags.front().message, diags.front().loc);
  return kb;
}

Concept parse_concept(std::string_view text) { return KbReader(text).lone_concept(); }

std::string print_concept(const Concept& c) {
  std::ostringstream os;
  print_concept_to(os, c);
  return os.str();
}

std::string print_kb(const KnowledgeBase& kb) {
  std::ostringstream os;
  const auto& sig = kb.signature;
  os << "SIG\n";
  for (const auto& n : sig.concept_names) os << "  concept " << n << '\n';
  for (const auto& n : sig.global_roles) os << "  global role " << n << '\n';
  for (const auto& n : sig.local_roles) os << "  local role " << n << '\n';
  for (const auto& n : sig.individuals) os << "  individual " << n << '\n';
  os << "TBOX\n";
  for (const auto& ci : kb.tbox) {
    os << "  ";
    print_concept_to(os, ci.lhs);
    os << " SUB ";
    print_concept_to(os, ci.rhs);
    os << '\n';
  }
  os << "ABOX\n";
  for (const auto& a : kb.abox) {
    os << "  ";
    if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
      if (!ca->positive) os << "NOT ";
      os << ca->concept_name << '(' << ca->individual << ")@" << ca->time << '\n';
    } else {
      const auto& ra = std::get<RoleAssertion>(a);
      if (!ra.positive) os << "NOT ";
      os << ra.role_name << '(' << ra.subject << ',' << ra.object << ")@" << ra.time << '\n';
    }
  }
  return os.str();
}

std::string print_ltl(const Ltl& f) {
  // Explicit stack: grounded formulas nest far deeper than the call stack allows.
  std::string out;
  struct Frame {
    const Ltl* f;
    int stage;
  };
  std::vector<Frame> stack{{&f, 0}};
  while (!stack.empty()) {
    Frame& fr = stack.back();
    const Ltl& g = *fr.f;
    switch (g.op()) {
      case LtlOp::False:
        out += "false";
        stack.pop_back();
        continue;
      case LtlOp::Prop:
        out += g.name();
        stack.pop_back();
        continue;
      case LtlOp::And:
        if (fr.stage == 0) {
          out += '(';
          fr.stage = 1;
          stack.push_back({&g.lhs(), 0});
        } else if (fr.stage == 1) {
          out += " & ";
          fr.stage = 2;
          stack.push_back({&g.rhs(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
        continue;
      default:
        if (fr.stage == 0) {
          static const char* kOps[] = {"", "", "(~ ", "", "(X ", "(Y ", "(F ", "(O "};
          out += kOps[static_cast<int>(g.op())];
          fr.stage = 1;
          stack.push_back({&g.operand(), 0});
        } else {
          out += ')';
          stack.pop_back();
        }
    }
  }
  return out;
}

Ltl parse_ltl(std::string_view text) { return LtlReader(text).formula(); }

}  // namespace tdl
