#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tdl {

class BddManager;

/// Reference-counted handle; nodes reachable from live handles survive
/// garbage collection.
class Bdd {
 public:
  Bdd() = default;
  Bdd(const Bdd& o);
  Bdd(Bdd&& o) noexcept;
  Bdd& operator=(const Bdd& o);
  Bdd& operator=(Bdd&& o) noexcept;
  ~Bdd();

  bool is_zero() const { return idx_ == 0; }
  bool is_one() const { return idx_ == 1; }
  std::uint32_t index() const { return idx_; }
  BddManager* manager() const { return mgr_; }

  friend bool operator==(const Bdd& a, const Bdd& b) { return a.idx_ == b.idx_; }

  Bdd operator&(const Bdd& o) const;
  Bdd operator|(const Bdd& o) const;
  Bdd operator~() const;
  Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
  Bdd& operator|=(const Bdd& o) { return *this = *this | o; }

 private:
  friend class BddManager;
  Bdd(BddManager* m, std::uint32_t idx);
  BddManager* mgr_ = nullptr;
  std::uint32_t idx_ = 0;
};

/// Thrown when the node budget is exhausted or the stop callback fires.
struct BddResourceOut {
  bool out_of_nodes = false;
};

/// ROBDD package without complement edges. Variable i sits at level i.
class BddManager {
 public:
  struct Limits {
    std::size_t max_nodes = 24u << 20;
    /// Polled every few thousand node creations; returning true aborts.
    std::function<bool()> should_stop;
  };

  explicit BddManager(std::uint32_t num_vars, Limits limits);
  explicit BddManager(std::uint32_t num_vars) : BddManager(num_vars, Limits{}) {}
  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;

  std::uint32_t num_vars() const { return num_vars_; }

  Bdd zero() { return Bdd(this, 0); }
  Bdd one() { return Bdd(this, 1); }
  Bdd var(std::uint32_t v);
  Bdd nvar(std::uint32_t v);
  /// Conjunction of the positive literals.
  Bdd cube(std::span<const std::uint32_t> vars);

  Bdd conj(const Bdd& a, const Bdd& b);
  Bdd disj(const Bdd& a, const Bdd& b);
  Bdd negate(const Bdd& a);
  Bdd iff(const Bdd& a, const Bdd& b);
  Bdd exists(const Bdd& f, const Bdd& cube);
  /// exists cube. (f AND g) without building the conjunction.
  Bdd and_exists(const Bdd& f, const Bdd& g, const Bdd& cube);
  /// Renames every variable v to v + delta. The caller guarantees the
  /// renaming keeps the relative order of the support.
  Bdd shift(const Bdd& f, int delta);

  std::vector<std::uint32_t> support(const Bdd& f);
  std::size_t node_count(const Bdd& f);
  /// Some satisfying assignment restricted to `vars`; unconstrained ones
  /// are false. Requires f != 0.
  std::vector<bool> pick_one(const Bdd& f, std::span<const std::uint32_t> vars);
  /// Full assignment indexed by variable.
  bool eval(const Bdd& f, const std::vector<bool>& assignment);
  /// The minterm of `vars` fixed by `values`.
  Bdd minterm(std::span<const std::uint32_t> vars, const std::vector<bool>& values);

  std::size_t live_nodes() const { return nodes_.size() - free_.size(); }
  std::size_t peak_nodes() const { return peak_; }
  void collect_garbage();

 private:
  friend class Bdd;
  static constexpr std::uint32_t kTerminal = 0xffffffffu;
  struct Node {
    std::uint32_t var;
    std::uint32_t lo;
    std::uint32_t hi;
    std::uint32_t next;
  };
  struct CacheEntry {
    std::uint32_t op = 0xffffffffu;
    std::uint32_t a = 0, b = 0, c = 0;
    std::uint32_t res = 0;
  };
  enum Op : std::uint32_t { kAnd, kOr, kXnor, kNot, kAndExists, kShift };

  void ref(std::uint32_t i) { if (i > 1) ++ext_ref_[i]; }
  void deref(std::uint32_t i) { if (i > 1) --ext_ref_[i]; }
  void maybe_gc();
  std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
  void rehash(std::size_t buckets);
  std::uint32_t top(std::uint32_t i) const { return nodes_[i].var; }

  std::uint32_t apply(Op op, std::uint32_t a, std::uint32_t b);
  std::uint32_t not_rec(std::uint32_t a);
  std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube);
  std::uint32_t shift_rec(std::uint32_t f, int delta);

  bool cache_lookup(Op op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& res) const;
  void cache_store(Op op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t res);

  std::uint32_t num_vars_;
  Limits limits_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> ext_ref_;
  std::vector<std::uint32_t> free_;
  std::vector<std::uint32_t> buckets_;
  std::vector<CacheEntry> cache_;
  std::size_t gc_threshold_ = 1u << 20;
  std::size_t peak_ = 2;
  std::size_t since_poll_ = 0;
};

}  // namespace tdl
