#include "tdlite/ltl.hpp"

#include <cassert>
#include <unordered_set>
#include <utility>

#include "hash_util.hpp"

namespace tdl {

struct Ltl::Node {
  LtlOp op;
  std::string name;
  Ltl a{nullptr};
  Ltl b{nullptr};
  std::uint64_t size = 1;
  std::size_t hash = 0;
  bool past = false;

  Node() = default;
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;
  ~Node();
};

// Long right-nested conjunction chains would otherwise be destroyed
// recursively, one stack frame per link.
Ltl::Node::~Node() {
  thread_local std::vector<std::shared_ptr<const Node>> pending;
  thread_local bool draining = false;
  for (Ltl* child : {&a, &b}) {
    if (child->node_ && child->node_.use_count() == 1) pending.push_back(std::move(child->node_));
  }
  if (draining) return;
  draining = true;
  while (!pending.empty()) {
    auto n = std::move(pending.back());
    pending.pop_back();
    n.reset();
  }
  draining = false;
}

namespace {

std::size_t op_seed(LtlOp op) { return static_cast<std::size_t>(op) * 0x9ddfea08eb382d69ULL + 0x51; }

}  // namespace

Ltl Ltl::falsum() {
  static const Ltl kFalse = [] {
    auto n = std::make_shared<Node>();
    n->op = LtlOp::False;
    n->hash = op_seed(LtlOp::False);
    return Ltl(std::move(n));
  }();
  return kFalse;
}

Ltl Ltl::prop(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = LtlOp::Prop;
  n->hash = detail::hash_mix(op_seed(LtlOp::Prop), std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Ltl(std::move(n));
}

Ltl Ltl::negation(Ltl f) { return unary(LtlOp::Not, std::move(f)); }

Ltl Ltl::unary(LtlOp op, Ltl f) {
  assert(op == LtlOp::Not || op == LtlOp::NextF || op == LtlOp::NextP || op == LtlOp::SomeF ||
         op == LtlOp::SomeP);
  auto n = std::make_shared<Node>();
  n->op = op;
  n->size = 1 + f.size();
  n->hash = detail::hash_mix(op_seed(op), f.hash());
  n->past = f.has_past() || op == LtlOp::NextP || op == LtlOp::SomeP;
  n->a = std::move(f);
  return Ltl(std::move(n));
}

Ltl Ltl::conj(Ltl a, Ltl b) {
  auto n = std::make_shared<Node>();
  n->op = LtlOp::And;
  n->size = 1 + a.size() + b.size();
  n->hash = detail::hash_mix(detail::hash_mix(op_seed(LtlOp::And), a.hash()), b.hash());
  n->past = a.has_past() || b.has_past();
  n->a = std::move(a);
  n->b = std::move(b);
  return Ltl(std::move(n));
}

LtlOp Ltl::op() const { return node_->op; }
const std::string& Ltl::name() const { return node_->name; }
const Ltl& Ltl::operand() const { return node_->a; }
const Ltl& Ltl::lhs() const { return node_->a; }
const Ltl& Ltl::rhs() const { return node_->b; }
std::uint64_t Ltl::size() const { return node_->size; }
std::size_t Ltl::hash() const { return node_->hash; }
bool Ltl::has_past() const { return node_->past; }

bool Ltl::is_temporal() const {
  switch (op()) {
    case LtlOp::NextF:
    case LtlOp::NextP:
    case LtlOp::SomeF:
    case LtlOp::SomeP:
      return true;
    default:
      return false;
  }
}

bool operator==(const Ltl& x, const Ltl& y) {
  // Iterative on the right spine so long conjunction chains stay shallow.
  const Ltl* a = &x;
  const Ltl* b = &y;
  while (true) {
    if (a->node_ == b->node_) return true;
    if (!a->node_ || !b->node_) return false;
    if (a->hash() != b->hash() || a->op() != b->op() || a->size() != b->size()) return false;
    switch (a->op()) {
      case LtlOp::False:
        return true;
      case LtlOp::Prop:
        return a->name() == b->name();
      case LtlOp::And:
        if (!(a->lhs() == b->lhs())) return false;
        a = &a->rhs();
        b = &b->rhs();
        break;
      default:
        a = &a->operand();
        b = &b->operand();
    }
  }
}

namespace ltl {

Ltl disj(Ltl a, Ltl b) { return Ltl::negation(Ltl::conj(Ltl::negation(std::move(a)), Ltl::negation(std::move(b)))); }

Ltl implies(Ltl a, Ltl b) { return Ltl::negation(Ltl::conj(std::move(a), Ltl::negation(std::move(b)))); }

Ltl iff(Ltl a, Ltl b) { return Ltl::conj(implies(a, b), implies(b, a)); }

Ltl always_f(Ltl f) { return Ltl::negation(Ltl::some_f(Ltl::negation(std::move(f)))); }

Ltl always_p(Ltl f) { return Ltl::negation(Ltl::some_p(Ltl::negation(std::move(f)))); }

Ltl conj_all(std::span<const Ltl> parts) {
  if (parts.empty()) return Ltl::truth();
  Ltl acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Ltl::conj(parts[i], std::move(acc));
  return acc;
}

Ltl conj_balanced(std::span<const Ltl> parts) {
  if (parts.empty()) return Ltl::truth();
  if (parts.size() == 1) return parts.front();
  std::size_t mid = parts.size() / 2;
  return Ltl::conj(conj_balanced(parts.first(mid)), conj_balanced(parts.subspan(mid)));
}

std::vector<Ltl> flatten_conj(const Ltl& f) {
  std::vector<Ltl> out;
  std::vector<const Ltl*> stack{&f};
  while (!stack.empty()) {
    const Ltl* g = stack.back();
    stack.pop_back();
    if (g->op() == LtlOp::And) {
      stack.push_back(&g->rhs());
      stack.push_back(&g->lhs());
    } else {
      out.push_back(*g);
    }
  }
  return out;
}

std::set<std::string> props(const Ltl& f) {
  std::set<std::string> out;
  std::unordered_set<const void*> seen;
  std::vector<const Ltl*> stack{&f};
  while (!stack.empty()) {
    const Ltl* g = stack.back();
    stack.pop_back();
    if (!seen.insert(g->id()).second) continue;
    switch (g->op()) {
      case LtlOp::False:
        break;
      case LtlOp::Prop:
        out.insert(g->name());
        break;
      case LtlOp::And:
        stack.push_back(&g->rhs());
        stack.push_back(&g->lhs());
        break;
      default:
        stack.push_back(&g->operand());
    }
  }
  return out;
}

std::vector<Ltl> subformulas(const Ltl& f) {
  std::vector<Ltl> out;
  std::unordered_set<Ltl, LtlHash> structural;
  std::unordered_set<const void*> visited;
  // Explicit post-order: (node, children-pushed flag).
  std::vector<std::pair<const Ltl*, bool>> stack{{&f, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (visited.contains(g->id())) continue;
    if (!expanded) {
      stack.emplace_back(g, true);
      if (g->op() == LtlOp::And) {
        stack.emplace_back(&g->rhs(), false);
        stack.emplace_back(&g->lhs(), false);
      } else if (g->op() != LtlOp::False && g->op() != LtlOp::Prop) {
        stack.emplace_back(&g->operand(), false);
      }
      continue;
    }
    visited.insert(g->id());
    if (structural.insert(*g).second) out.push_back(*g);
  }
  return out;
}

}  // namespace ltl

std::size_t count_props(const Ltl& f) { return ltl::props(f).size(); }

}  // namespace tdl
