#include "tdlite/qtl.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>
#include <tuple>

namespace tdl {

const char* flow_name(Flow flow) { return flow == Flow::Z ? "z" : "n"; }

struct Qtl::Node {
  QtlOp op;
  Predicate pred;
  Term term;
  Role role;
  Qtl a{nullptr};
  Qtl b{nullptr};
  std::size_t size = 1;
};

Qtl Qtl::falsum() {
  static const Qtl kFalse(std::make_shared<const Node>(Node{QtlOp::Falsum, {}, {}, {}, Qtl(nullptr), Qtl(nullptr), 1}));
  return kFalse;
}

Qtl Qtl::atom(Predicate pred, Term term) {
  auto n = std::make_shared<Node>();
  n->op = QtlOp::UnaryAtom;
  n->pred = std::move(pred);
  n->term = std::move(term);
  return Qtl(std::move(n));
}

Qtl Qtl::role_prop(Role role) {
  auto n = std::make_shared<Node>();
  n->op = QtlOp::PropAtom;
  n->role = std::move(role);
  return Qtl(std::move(n));
}

Qtl Qtl::conj(Qtl a, Qtl b) {
  auto n = std::make_shared<Node>();
  n->op = QtlOp::And;
  n->size = 1 + a.size() + b.size();
  n->a = std::move(a);
  n->b = std::move(b);
  return Qtl(std::move(n));
}

Qtl Qtl::unary(QtlOp op, Qtl f) {
  assert(op != QtlOp::Falsum && op != QtlOp::UnaryAtom && op != QtlOp::PropAtom && op != QtlOp::And);
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = 1 + f.size();
  n->a = std::move(f);
  return Qtl(std::move(n));
}

QtlOp Qtl::op() const { return node_->op; }
const Predicate& Qtl::predicate() const { return node_->pred; }
const Term& Qtl::term() const { return node_->term; }
const Role& Qtl::role() const { return node_->role; }
const Qtl& Qtl::operand() const { return node_->a; }
const Qtl& Qtl::lhs() const { return node_->a; }
const Qtl& Qtl::rhs() const { return node_->b; }
std::size_t Qtl::size() const { return node_->size; }

bool operator==(const Qtl& x, const Qtl& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_ || x.op() != y.op() || x.size() != y.size()) return false;
  switch (x.op()) {
    case QtlOp::Falsum:
      return true;
    case QtlOp::UnaryAtom:
      return x.predicate() == y.predicate() && x.term() == y.term();
    case QtlOp::PropAtom:
      return x.role() == y.role();
    case QtlOp::And:
      return x.lhs() == y.lhs() && x.rhs() == y.rhs();
    default:
      return x.operand() == y.operand();
  }
}

namespace qtl {

Qtl implies(Qtl a, Qtl b) { return Qtl::negation(Qtl::conj(std::move(a), Qtl::negation(std::move(b)))); }

Qtl conj_all(std::span<const Qtl> parts) {
  if (parts.empty()) return Qtl::truth();
  Qtl acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Qtl::conj(parts[i], std::move(acc));
  return acc;
}

}  // namespace qtl

std::set<std::pair<std::string, std::string>> abox_pairs(std::span<const RoleFact> closed, const Role& role,
                                                         bool global, std::int64_t n) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& f : closed) {
    if (f.positive && f.role == role && (global || f.time == n)) out.emplace(f.subject, f.object);
  }
  return out;
}

std::vector<SuccessorCount> successor_counts(const KnowledgeBase& kb) {
  auto facts = role_facts(kb);
  auto closed = close_under_inverses(facts);
  // (role, subject, time) -> successors
  std::map<std::tuple<Role, std::string, std::int64_t>, std::set<std::string>> successors;
  for (const auto& f : closed) {
    if (!f.positive) continue;
    bool global = kb.signature.is_global(f.role.name);
    successors[{f.role, f.subject, global ? 0 : f.time}].insert(f.object);
  }
  std::vector<SuccessorCount> out;
  std::set<std::tuple<Role, std::string, std::int64_t>> seen;
  for (const auto& f : closed) {
    if (!f.positive || !seen.emplace(f.role, f.subject, f.time).second) continue;
    bool global = kb.signature.is_global(f.role.name);
    const auto& succ = successors[{f.role, f.subject, global ? 0 : f.time}];
    auto q = static_cast<std::uint32_t>(std::max<std::size_t>(1, succ.size()));
    out.push_back(SuccessorCount{f.role, f.subject, f.time, q});
  }
  return out;
}

namespace {

void collect_numbers(const Concept& c, std::set<std::uint32_t>& out, bool& past) {
  switch (c.kind()) {
    case ConceptKind::AtLeast:
      out.insert(c.cardinality());
      return;
    case ConceptKind::NextP:
    case ConceptKind::SomeP:
    case ConceptKind::AlwP:
      past = true;
      break;
    default:
      break;
  }
  if (c.is_unary()) {
    collect_numbers(c.operand(), out, past);
  } else if (c.is_binary()) {
    collect_numbers(c.lhs(), out, past);
    collect_numbers(c.rhs(), out, past);
  }
}

std::int64_t assertion_time(const Assertion& a) {
  return std::visit([](const auto& x) { return x.time; }, a);
}

SourceLocation assertion_loc(const Assertion& a) {
  return std::visit([](const auto& x) { return x.loc; }, a);
}

}  // namespace

TranslationContext build_context(const KnowledgeBase& kb, Flow flow) {
  TranslationContext ctx;
  ctx.flow = flow;
  ctx.global_roles = kb.signature.global_roles;
  for (const auto& name : kb.signature.roles()) {
    ctx.roles.push_back(Role{name, false});
    ctx.roles.push_back(Role{name, true});
  }
  std::set<std::uint32_t> qs{1};
  for (const auto& ci : kb.tbox) {
    bool past = false;
    collect_numbers(ci.lhs, qs, past);
    collect_numbers(ci.rhs, qs, past);
    if (past && flow == Flow::N) {
      throw Error("PAST_OPERATOR_IN_N_FLOW", "past operators are not allowed in the N flow", ci.loc);
    }
  }
  if (flow == Flow::N) {
    for (const auto& a : kb.abox) {
      if (assertion_time(a) < 0) {
        throw Error("NEGATIVE_TIMESTAMP_IN_N_FLOW", "negative timestamps are not allowed in the N flow",
                    assertion_loc(a));
      }
    }
  }
  for (const auto& sc : successor_counts(kb)) qs.insert(sc.count);
  ctx.q_set.assign(qs.begin(), qs.end());
  return ctx;
}

Qtl concept_star(const Concept& c, const Term& t) {
  switch (c.kind()) {
    case ConceptKind::Bottom:
      return Qtl::falsum();
    case ConceptKind::Atomic:
      return Qtl::atom(Predicate::atomic(c.name()), t);
    case ConceptKind::AtLeast:
      return Qtl::atom(Predicate::at_least(c.cardinality(), c.role()), t);
    case ConceptKind::Not:
      return Qtl::negation(concept_star(c.operand(), t));
    case ConceptKind::And:
      return Qtl::conj(concept_star(c.lhs(), t), concept_star(c.rhs(), t));
    case ConceptKind::NextF:
      return Qtl::unary(QtlOp::NextF, concept_star(c.operand(), t));
    case ConceptKind::NextP:
      return Qtl::unary(QtlOp::NextP, concept_star(c.operand(), t));
    case ConceptKind::SomeF:
      return Qtl::unary(QtlOp::SomeF, concept_star(c.operand(), t));
    case ConceptKind::SomeP:
      return Qtl::unary(QtlOp::SomeP, concept_star(c.operand(), t));
    default:
      throw Error("NOT_NORMALIZED", "concept_star expects a normalized concept");
  }
}

namespace {

// The outer box: G H in the Z flow, G in the N flow.
Qtl outer_box(Flow flow, Qtl f) {
  if (flow == Flow::N) return Qtl::unary(QtlOp::AlwF, std::move(f));
  return Qtl::unary(QtlOp::AlwF, Qtl::unary(QtlOp::AlwP, std::move(f)));
}

Qtl card(std::uint32_t q, const Role& r, const Term& t = Term::var()) {
  return Qtl::atom(Predicate::at_least(q, r), t);
}

Qtl nexts(std::int64_t n, Qtl f) {
  QtlOp op = n >= 0 ? QtlOp::NextF : QtlOp::NextP;
  for (std::int64_t i = 0; i < (n >= 0 ? n : -n); ++i) f = Qtl::unary(op, std::move(f));
  return f;
}

}  // namespace

TBoxTranslation translate_tbox(const KnowledgeBase& kb, const TranslationContext& ctx) {
  TBoxTranslation out;
  const Flow flow = ctx.flow;
  for (const auto& ci : kb.tbox) {
    Concept lhs = normalize(ci.lhs);
    Concept rhs = normalize(ci.rhs);
    out.inclusions.push_back(outer_box(flow, Qtl::for_all(qtl::implies(concept_star(lhs), concept_star(rhs)))));
  }
  for (const auto& r : ctx.roles) {
    for (std::size_t i = 0; i < ctx.q_set.size(); ++i) {
      for (std::size_t j = i + 1; j < ctx.q_set.size(); ++j) {
        out.monotonicity.push_back(
            outer_box(flow, Qtl::for_all(qtl::implies(card(ctx.q_set[j], r), card(ctx.q_set[i], r)))));
      }
    }
  }
  for (const auto& r : ctx.roles) {
    if (!ctx.is_global(r)) continue;
    for (auto q : ctx.q_set) {
      Qtl body = flow == Flow::Z
                     ? qtl::implies(card(q, r), outer_box(flow, card(q, r)))
                     : qtl::implies(Qtl::unary(QtlOp::SomeF, card(q, r)), Qtl::unary(QtlOp::AlwF, card(q, r)));
      out.rigidity.push_back(outer_box(flow, Qtl::for_all(std::move(body))));
    }
  }
  for (const auto& r : ctx.roles) {
    Qtl body = flow == Flow::Z
                   ? qtl::implies(card(1, r), outer_box(flow, Qtl::role_prop(r)))
                   : qtl::implies(Qtl::unary(QtlOp::SomeF, card(1, r)), Qtl::unary(QtlOp::AlwF, Qtl::role_prop(r)));
    Qtl witness = qtl::implies(Qtl::role_prop(r.inverse()), card(1, r, Term::witness(r)));
    out.existence.push_back(Qtl::conj(outer_box(flow, Qtl::for_all(std::move(body))), std::move(witness)));
  }
  return out;
}

std::vector<Qtl> translate_abox(const KnowledgeBase& kb, const TranslationContext& ctx) {
  std::vector<Qtl> out;
  for (const auto& a : kb.abox) {
    if (const auto* ca = std::get_if<ConceptAssertion>(&a)) {
      if (ctx.flow == Flow::N && ca->time < 0) {
        throw Error("NEGATIVE_TIMESTAMP_IN_N_FLOW", "negative timestamps are not allowed in the N flow", ca->loc);
      }
      Qtl lit = Qtl::atom(Predicate::atomic(ca->concept_name), Term::constant(ca->individual));
      if (!ca->positive) lit = Qtl::negation(std::move(lit));
      out.push_back(nexts(ca->time, std::move(lit)));
    }
  }
  for (const auto& sc : successor_counts(kb)) {
    if (ctx.flow == Flow::N && sc.time < 0) {
      throw Error("NEGATIVE_TIMESTAMP_IN_N_FLOW", "negative timestamps are not allowed in the N flow");
    }
    out.push_back(nexts(sc.time, card(sc.count, sc.role, Term::constant(sc.individual))));
  }
  auto closed = close_under_inverses(role_facts(kb));
  for (const auto& a : kb.abox) {
    const auto* ra = std::get_if<RoleAssertion>(&a);
    if (!ra || ra->positive) continue;
    Role s{ra->role_name, false};
    auto pairs = abox_pairs(closed, s, kb.signature.is_global(s.name), ra->time);
    if (pairs.contains({ra->subject, ra->object})) out.push_back(Qtl::falsum());
  }
  return out;
}

std::vector<Qtl> QtlTranslation::conjuncts() const {
  std::vector<Qtl> out;
  for (const auto* part : {&tbox.inclusions, &tbox.monotonicity, &tbox.rigidity, &tbox.existence, &abox}) {
    out.insert(out.end(), part->begin(), part->end());
  }
  return out;
}

std::size_t QtlTranslation::size() const {
  auto parts = conjuncts();
  if (parts.empty()) return 2;  // NOT BOT
  std::size_t n = parts.size() - 1;
  for (const auto& p : parts) n += p.size();
  return n;
}

QtlTranslation translate(const KnowledgeBase& kb, Flow flow) {
  QtlTranslation t;
  KnowledgeBase norm = normalize(kb);
  t.ctx = build_context(norm, flow);
  t.tbox = translate_tbox(norm, t.ctx);
  t.abox = translate_abox(norm, t.ctx);
  return t;
}

namespace {

void print_term(std::ostream& os, const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
      os << 'x';
      break;
    case Term::Kind::Individual:
      os << '@' << t.individual;
      break;
    case Term::Kind::Witness:
      os << "@d_" << t.role.str();
      break;
  }
}

void print_to(std::ostream& os, const Qtl& f) {
  switch (f.op()) {
    case QtlOp::Falsum:
      os << "BOT";
      return;
    case QtlOp::UnaryAtom: {
      const auto& p = f.predicate();
      if (p.cardinality) {
        os << "(>= " << p.q << ' ' << p.role.str() << ')';
      } else {
        os << p.concept_name;
      }
      os << '(';
      print_term(os, f.term());
      os << ')';
      return;
    }
    case QtlOp::PropAtom:
      os << "p_" << f.role().str();
      return;
    case QtlOp::And: {
      // Parenthesised so a quantifier prefix does not seem to scope over the rhs.
      bool wrap_l = f.lhs().op() == QtlOp::And || f.lhs().op() == QtlOp::ForAll || f.lhs().op() == QtlOp::AlwF ||
                    f.lhs().op() == QtlOp::AlwP;
      if (wrap_l) os << '(';
      print_to(os, f.lhs());
      if (wrap_l) os << ')';
      os << " AND ";
      bool wrap = f.rhs().op() == QtlOp::And;
      if (wrap) os << '(';
      print_to(os, f.rhs());
      if (wrap) os << ')';
      return;
    }
    default:
      break;
  }
  static const char* kOps[] = {"", "", "", "NOT", "", "X", "Y", "SOMF", "SOMP", "ALWF", "ALWP", "FORALL x."};
  os << kOps[static_cast<int>(f.op())] << ' ';
  bool wrap = f.operand().op() == QtlOp::And;
  if (wrap) os << '(';
  print_to(os, f.operand());
  if (wrap) os << ')';
}

}  // namespace

std::string print_qtl(const Qtl& f) {
  std::ostringstream os;
  print_to(os, f);
  return os.str();
}

std::string dump(const QtlTranslation& t) {
  auto parts = t.conjuncts();
  if (parts.empty()) return "TOP\n";
  std::ostringstream os;
  for (const auto& p : parts) {
    print_to(os, p);
    os << '\n';
  }
  return os.str();
}

}  // namespace tdl
