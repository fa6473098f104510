#include "tdlite/bdd.hpp"

#include <algorithm>
#include <cassert>

namespace tdl {

Bdd::Bdd(BddManager* m, std::uint32_t idx) : mgr_(m), idx_(idx) {
  if (mgr_) mgr_->ref(idx_);
}

Bdd::Bdd(const Bdd& o) : mgr_(o.mgr_), idx_(o.idx_) {
  if (mgr_) mgr_->ref(idx_);
}

Bdd::Bdd(Bdd&& o) noexcept : mgr_(o.mgr_), idx_(o.idx_) {
  o.mgr_ = nullptr;
  o.idx_ = 0;
}

Bdd& Bdd::operator=(const Bdd& o) {
  if (this != &o) {
    if (o.mgr_) o.mgr_->ref(o.idx_);
    if (mgr_) mgr_->deref(idx_);
    mgr_ = o.mgr_;
    idx_ = o.idx_;
  }
  return *this;
}

Bdd& Bdd::operator=(Bdd&& o) noexcept {
  if (this != &o) {
    if (mgr_) mgr_->deref(idx_);
    mgr_ = o.mgr_;
    idx_ = o.idx_;
    o.mgr_ = nullptr;
    o.idx_ = 0;
  }
  return *this;
}

Bdd::~Bdd() {
  if (mgr_) mgr_->deref(idx_);
}

Bdd Bdd::operator&(const Bdd& o) const { return mgr_->conj(*this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return mgr_->disj(*this, o); }
Bdd Bdd::operator~() const { return mgr_->negate(*this); }

namespace {

inline std::size_t hash3(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  std::uint64_t h = a * 0x9e3779b97f4a7c15ULL;
  h ^= (b + 0x632be59bd9b4e019ULL) * 0xbf58476d1ce4e5b9ULL;
  h ^= (c + 0x94d049bb133111ebULL) * 0xff51afd7ed558ccdULL;
  return static_cast<std::size_t>(h ^ (h >> 31));
}

constexpr std::uint32_t kNil = 0xffffffffu;

}  // namespace

BddManager::BddManager(std::uint32_t num_vars, Limits limits) : num_vars_(num_vars), limits_(std::move(limits)) {
  nodes_.push_back(Node{kTerminal, 0, 0, kNil});
  nodes_.push_back(Node{kTerminal, 1, 1, kNil});
  ext_ref_.assign(2, 0);
  buckets_.assign(1u << 16, kNil);
  cache_.resize(1u << 18);
  gc_threshold_ = std::min<std::size_t>(gc_threshold_, std::max<std::size_t>(limits_.max_nodes / 2, 1024));
}

void BddManager::rehash(std::size_t count) {
  buckets_.assign(count, kNil);
  for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    if (n.var == kTerminal) continue;  // free slot
    std::size_t h = hash3(n.var, n.lo, n.hi) & (count - 1);
    n.next = buckets_[h];
    buckets_[h] = i;
  }
}

std::uint32_t BddManager::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
  if (lo == hi) return lo;
  std::size_t h = hash3(var, lo, hi) & (buckets_.size() - 1);
  for (std::uint32_t i = buckets_[h]; i != kNil; i = nodes_[i].next) {
    const Node& n = nodes_[i];
    if (n.var == var && n.lo == lo && n.hi == hi) return i;
  }
  if (++since_poll_ >= 4096) {
    since_poll_ = 0;
    if (limits_.should_stop && limits_.should_stop()) throw BddResourceOut{false};
  }
  if (live_nodes() >= limits_.max_nodes) throw BddResourceOut{true};
  std::uint32_t idx;
  if (!free_.empty()) {
    idx = free_.back();
    free_.pop_back();
    nodes_[idx] = Node{var, lo, hi, buckets_[h]};
    ext_ref_[idx] = 0;
  } else {
    idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{var, lo, hi, buckets_[h]});
    ext_ref_.push_back(0);
  }
  buckets_[h] = idx;
  peak_ = std::max(peak_, live_nodes());
  if (nodes_.size() > buckets_.size()) {
    rehash(buckets_.size() * 2);
    if (cache_.size() < buckets_.size() && cache_.size() < (1u << 22)) {
      cache_.assign(cache_.size() * 2, CacheEntry{});
    }
  }
  return idx;
}

bool BddManager::cache_lookup(Op op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& res) const {
  const CacheEntry& e = cache_[hash3(a ^ (op << 27), b, c) & (cache_.size() - 1)];
  if (e.op == op && e.a == a && e.b == b && e.c == c) {
    res = e.res;
    return true;
  }
  return false;
}

void BddManager::cache_store(Op op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t res) {
  cache_[hash3(a ^ (op << 27), b, c) & (cache_.size() - 1)] = CacheEntry{op, a, b, c, res};
}

void BddManager::maybe_gc() {
  if (live_nodes() < gc_threshold_) return;
  collect_garbage();
  if (live_nodes() * 2 > gc_threshold_) gc_threshold_ = std::min(gc_threshold_ * 2, limits_.max_nodes);
}

void BddManager::collect_garbage() {
  std::vector<char> mark(nodes_.size(), 0);
  mark[0] = mark[1] = 1;
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
    if (ext_ref_[i] > 0 && nodes_[i].var != kTerminal) stack.push_back(i);
  }
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    if (mark[i]) continue;
    mark[i] = 1;
    stack.push_back(nodes_[i].lo);
    stack.push_back(nodes_[i].hi);
  }
  free_.clear();
  for (std::uint32_t i = static_cast<std::uint32_t>(nodes_.size()); i-- > 2;) {
    if (!mark[i]) {
      nodes_[i].var = kTerminal;
      free_.push_back(i);
    }
  }
  rehash(buckets_.size());
  std::fill(cache_.begin(), cache_.end(), CacheEntry{});
}

Bdd BddManager::var(std::uint32_t v) {
  assert(v < num_vars_);
  maybe_gc();
  return Bdd(this, mk(v, 0, 1));
}

Bdd BddManager::nvar(std::uint32_t v) {
  assert(v < num_vars_);
  maybe_gc();
  return Bdd(this, mk(v, 1, 0));
}

Bdd BddManager::cube(std::span<const std::uint32_t> vars) {
  maybe_gc();
  std::vector<std::uint32_t> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::uint32_t r = 1;
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) r = mk(*it, 0, r);
  return Bdd(this, r);
}

Bdd BddManager::minterm(std::span<const std::uint32_t> vars, const std::vector<bool>& values) {
  maybe_gc();
  std::vector<std::pair<std::uint32_t, bool>> lits;
  for (std::size_t i = 0; i < vars.size(); ++i) lits.emplace_back(vars[i], values[i]);
  std::sort(lits.begin(), lits.end());
  std::uint32_t r = 1;
  for (auto it = lits.rbegin(); it != lits.rend(); ++it) r = it->second ? mk(it->first, 0, r) : mk(it->first, r, 0);
  return Bdd(this, r);
}

std::uint32_t BddManager::not_rec(std::uint32_t a) {
  if (a <= 1) return 1 - a;
  std::uint32_t res;
  if (cache_lookup(kNot, a, 0, 0, res)) return res;
  const Node n = nodes_[a];
  std::uint32_t lo = not_rec(n.lo);
  std::uint32_t hi = not_rec(n.hi);
  res = mk(n.var, lo, hi);
  cache_store(kNot, a, 0, 0, res);
  return res;
}

std::uint32_t BddManager::apply(Op op, std::uint32_t a, std::uint32_t b) {
  switch (op) {
    case kAnd:
      if (a == 0 || b == 0) return 0;
      if (a == 1) return b;
      if (b == 1 || a == b) return a;
      break;
    case kOr:
      if (a == 1 || b == 1) return 1;
      if (a == 0) return b;
      if (b == 0 || a == b) return a;
      break;
    case kXnor:
      if (a == b) return 1;
      if (a == 1) return b;
      if (b == 1) return a;
      if (a == 0) return not_rec(b);
      if (b == 0) return not_rec(a);
      break;
    default:
      break;
  }
  if (a > b) std::swap(a, b);
  std::uint32_t res;
  if (cache_lookup(op, a, b, 0, res)) return res;
  const Node na = nodes_[a];
  const Node nb = nodes_[b];
  std::uint32_t v = std::min(na.var, nb.var);
  std::uint32_t a0 = na.var == v ? na.lo : a, a1 = na.var == v ? na.hi : a;
  std::uint32_t b0 = nb.var == v ? nb.lo : b, b1 = nb.var == v ? nb.hi : b;
  std::uint32_t lo = apply(op, a0, b0);
  std::uint32_t hi = apply(op, a1, b1);
  res = mk(v, lo, hi);
  cache_store(op, a, b, 0, res);
  return res;
}

std::uint32_t BddManager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube) {
  if (f == 0 || g == 0) return 0;
  if (f == 1 && g == 1) return 1;
  if (cube == 1) return apply(kAnd, f, g);
  if (f > g) std::swap(f, g);
  std::uint32_t v = std::min(top(f), top(g));
  while (cube > 1 && top(cube) < v) cube = nodes_[cube].hi;
  if (cube == 1) return apply(kAnd, f, g);
  std::uint32_t res;
  if (cache_lookup(kAndExists, f, g, cube, res)) return res;
  const Node nf = nodes_[f];
  const Node ng = nodes_[g];
  std::uint32_t f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
  std::uint32_t g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
  if (top(cube) == v) {
    std::uint32_t rest = nodes_[cube].hi;
    std::uint32_t r0 = and_exists_rec(f0, g0, rest);
    if (r0 == 1) {
      res = 1;
    } else {
      std::uint32_t r1 = and_exists_rec(f1, g1, rest);
      res = apply(kOr, r0, r1);
    }
  } else {
    std::uint32_t lo = and_exists_rec(f0, g0, cube);
    std::uint32_t hi = and_exists_rec(f1, g1, cube);
    res = mk(v, lo, hi);
  }
  cache_store(kAndExists, f, g, cube, res);
  return res;
}

std::uint32_t BddManager::shift_rec(std::uint32_t f, int delta) {
  if (f <= 1) return f;
  std::uint32_t res;
  auto d = static_cast<std::uint32_t>(delta);
  if (cache_lookup(kShift, f, d, 0, res)) return res;
  const Node n = nodes_[f];
  std::uint32_t lo = shift_rec(n.lo, delta);
  std::uint32_t hi = shift_rec(n.hi, delta);
  res = mk(static_cast<std::uint32_t>(static_cast<int>(n.var) + delta), lo, hi);
  cache_store(kShift, f, d, 0, res);
  return res;
}

Bdd BddManager::conj(const Bdd& a, const Bdd& b) {
  maybe_gc();
  return Bdd(this, apply(kAnd, a.idx_, b.idx_));
}

Bdd BddManager::disj(const Bdd& a, const Bdd& b) {
  maybe_gc();
  return Bdd(this, apply(kOr, a.idx_, b.idx_));
}

Bdd BddManager::iff(const Bdd& a, const Bdd& b) {
  maybe_gc();
  return Bdd(this, apply(kXnor, a.idx_, b.idx_));
}

Bdd BddManager::negate(const Bdd& a) {
  maybe_gc();
  return Bdd(this, not_rec(a.idx_));
}

Bdd BddManager::exists(const Bdd& f, const Bdd& cube) {
  maybe_gc();
  return Bdd(this, and_exists_rec(f.idx_, 1, cube.idx_));
}

Bdd BddManager::and_exists(const Bdd& f, const Bdd& g, const Bdd& cube) {
  maybe_gc();
  return Bdd(this, and_exists_rec(f.idx_, g.idx_, cube.idx_));
}

Bdd BddManager::shift(const Bdd& f, int delta) {
  maybe_gc();
  return Bdd(this, shift_rec(f.idx_, delta));
}

std::vector<std::uint32_t> BddManager::support(const Bdd& f) {
  std::vector<char> seen_var(num_vars_, 0);
  std::vector<std::uint32_t> stack{f.idx_};
  std::vector<char> visited(nodes_.size(), 0);
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    if (i <= 1 || visited[i]) continue;
    visited[i] = 1;
    seen_var[nodes_[i].var] = 1;
    stack.push_back(nodes_[i].lo);
    stack.push_back(nodes_[i].hi);
  }
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < num_vars_; ++v) {
    if (seen_var[v]) out.push_back(v);
  }
  return out;
}

std::size_t BddManager::node_count(const Bdd& f) {
  std::vector<char> visited(nodes_.size(), 0);
  std::vector<std::uint32_t> stack{f.idx_};
  std::size_t n = 0;
  while (!stack.empty()) {
    std::uint32_t i = stack.back();
    stack.pop_back();
    if (visited[i]) continue;
    visited[i] = 1;
    ++n;
    if (i > 1) {
      stack.push_back(nodes_[i].lo);
      stack.push_back(nodes_[i].hi);
    }
  }
  return n;
}

std::vector<bool> BddManager::pick_one(const Bdd& f, std::span<const std::uint32_t> vars) {
  assert(!f.is_zero());
  std::vector<bool> full(num_vars_, false);
  std::uint32_t i = f.idx_;
  while (i > 1) {
    const Node& n = nodes_[i];
    if (n.lo != 0) {
      i = n.lo;
    } else {
      full[n.var] = true;
      i = n.hi;
    }
  }
  std::vector<bool> out;
  out.reserve(vars.size());
  for (auto v : vars) out.push_back(full[v]);
  return out;
}

bool BddManager::eval(const Bdd& f, const std::vector<bool>& assignment) {
  std::uint32_t i = f.idx_;
  while (i > 1) i = assignment[nodes_[i].var] ? nodes_[i].hi : nodes_[i].lo;
  return i == 1;
}

}  // namespace tdl
