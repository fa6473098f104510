// Symbolic tableau for LTL over N.
//
// Elementary variables are the propositions, one X_g per subformula X g and
// one Y_g per subformula F g standing for "X F g". A state assigns all of
// them; a formula is encoded as a BDD over the current copy of the
// variables. Transitions tie X_g to g and Y_g to F g at the next state, and
// every Y_g carries the fairness condition "g or not Y_g" infinitely often.
// Top-level conjuncts of the form G c become invariants; an X directly under
// one reads the next-state copy instead of getting its own variable.
#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "tdlite/bdd.hpp"
#include "tdlite/error.hpp"
#include "tdlite/oracle.hpp"

namespace tdl {

namespace {

const Ltl* box_body(const Ltl& f) {
  if (f.op() != LtlOp::Not) return nullptr;
  const Ltl& g = f.operand();
  if (g.op() != LtlOp::SomeF || g.operand().op() != LtlOp::Not) return nullptr;
  return &g.operand().operand();
}

struct Elementary {
  enum Kind { Prop, Next, Event } kind;
  Ltl formula;  // the proposition, X g, or F g
};

class Tableau {
 public:
  Tableau(const Ltl& f, const LtlSatOptions& opt) : f_(f), opt_(opt) {}

  LtlSatResult run() {
    split(f_);
    collect_elementary();
    if (elems_.size() > opt_.max_elementary) {
      throw Error("FORMULA_TOO_LARGE", "formula has " + std::to_string(elems_.size()) +
                                           " elementary variables, limit " + std::to_string(opt_.max_elementary));
    }
    order_variables();
    BddManager::Limits limits;
    limits.max_nodes = opt_.max_nodes;
    limits.should_stop = opt_.should_stop;
    mgr_ = std::make_unique<BddManager>(static_cast<std::uint32_t>(2 * elems_.size()), limits);
    LtlSatResult result;
    result.stats.elementary = elems_.size();
    try {
      encode_all();
      build_transitions();
      if (init_.is_zero()) {
        result.verdict = SatVerdict::Unsat;
        result.stats.peak_nodes = mgr_->peak_nodes();
        return result;
      }
      Bdd fair = fair_states(reachable(), result.stats);
      Bdd start = init_ & fair;
      result.verdict = start.is_zero() ? SatVerdict::Unsat : SatVerdict::Sat;
      if (result.verdict == SatVerdict::Sat && opt_.extract_model) {
        result.model = extract(start, fair);
        if (!eval(f_, *result.model, 0)) throw Error("MODEL_CHECK_FAILED", "extracted lasso does not satisfy the formula");
      }
    } catch (const BddResourceOut& e) {
      throw Error("RESOURCE_LIMIT", e.out_of_nodes ? "BDD node limit reached" : "stopped by resource limit");
    }
    result.stats.peak_nodes = mgr_->peak_nodes();
    return result;
  }

 private:
  void split(const Ltl& f) {
    std::vector<std::pair<Ltl, bool>> work{{f, false}};
    while (!work.empty()) {
      auto [g, invariant] = work.back();
      work.pop_back();
      if (g.op() == LtlOp::And) {
        work.emplace_back(g.rhs(), invariant);
        work.emplace_back(g.lhs(), invariant);
      } else if (const Ltl* body = box_body(g)) {
        work.emplace_back(*body, true);
      } else {
        (invariant ? invariants_ : inits_).push_back(g);
      }
    }
  }

  // Everything under an init conjunct, and everything a relational
  // invariant reads at the current or the next state, is encoded over the
  // current-state variables.
  void collect_elementary() {
    std::unordered_set<Ltl, LtlHash> seen;
    auto mark_cur = [&](const Ltl& root) {
      if (seen.contains(root)) return;
      for (const auto& g : ltl::subformulas(root)) {
        if (!seen.insert(g).second) continue;
        subs_.push_back(g);
        switch (g.op()) {
          case LtlOp::Prop:
            add_elem(Elementary::Prop, g);
            break;
          case LtlOp::NextF:
            add_elem(Elementary::Next, g);
            break;
          case LtlOp::SomeF:
            add_elem(Elementary::Event, g);
            break;
          case LtlOp::NextP:
          case LtlOp::SomeP:
            throw Error("PAST_OPERATOR_PRESENT", "the N-flow checker needs a past-free formula");
          default:
            break;
        }
      }
    };
    for (const auto& c : inits_) mark_cur(c);
    std::unordered_set<Ltl, LtlHash> rel_seen;
    for (const auto& c : invariants_) {
      std::vector<const Ltl*> stack{&c};
      while (!stack.empty()) {
        const Ltl* g = stack.back();
        stack.pop_back();
        if (!rel_seen.insert(*g).second) continue;
        switch (g->op()) {
          case LtlOp::Not:
            stack.push_back(&g->operand());
            break;
          case LtlOp::And:
            stack.push_back(&g->lhs());
            stack.push_back(&g->rhs());
            break;
          case LtlOp::NextF:
            mark_cur(g->operand());
            break;
          default:
            mark_cur(*g);
        }
      }
    }
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i].kind == Elementary::Prop) alphabet_.push_back(elems_[i].formula.name());
    }
    std::sort(alphabet_.begin(), alphabet_.end());
  }

  void add_elem(Elementary::Kind kind, const Ltl& g) {
    elem_of_.emplace(g, elems_.size());
    elems_.push_back(Elementary{kind, g});
  }

  using Support = std::vector<std::uint32_t>;

  static Support merge(const Support& a, const Support& b) {
    Support out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  // Elementary support of the current-state encoding of each subformula.
  std::unordered_map<Ltl, Support, LtlHash> cur_supports() const {
    std::unordered_map<Ltl, Support, LtlHash> sup;
    for (const auto& g : subs_) {
      Support s;
      switch (g.op()) {
        case LtlOp::Prop:
        case LtlOp::NextF:
          s = {static_cast<std::uint32_t>(elem_of_.at(g))};
          break;
        case LtlOp::SomeF:
          s = merge(sup.at(g.operand()), {static_cast<std::uint32_t>(elem_of_.at(g))});
          break;
        case LtlOp::Not:
          s = sup.at(g.operand());
          break;
        case LtlOp::And:
          s = merge(sup.at(g.lhs()), sup.at(g.rhs()));
          break;
        default:
          break;
      }
      sup.emplace(g, std::move(s));
    }
    return sup;
  }

  Support rel_support(const Ltl& g, const std::unordered_map<Ltl, Support, LtlHash>& sup) const {
    switch (g.op()) {
      case LtlOp::Not:
        return rel_support(g.operand(), sup);
      case LtlOp::And:
        return merge(rel_support(g.lhs(), sup), rel_support(g.rhs(), sup));
      case LtlOp::NextF:
        return sup.at(g.operand());
      default:
        return sup.at(g);
    }
  }

  // FORCE: move each variable to the mean centre of gravity of the
  // constraints it occurs in, keep the ordering with the least total span.
  void order_variables() {
    const std::size_t n = elems_.size();
    auto sup = cur_supports();
    std::vector<Support> edges;
    for (const auto& c : inits_) edges.push_back(sup.at(c));
    for (const auto& c : invariants_) edges.push_back(rel_support(c, sup));
    for (std::size_t e = 0; e < n; ++e) {
      if (elems_[e].kind == Elementary::Prop) continue;
      Support edge = merge(sup.at(elems_[e].formula.operand()), {static_cast<std::uint32_t>(e)});
      edges.push_back(std::move(edge));
    }
    std::erase_if(edges, [](const auto& e) { return e.size() < 2; });

    std::vector<double> pos(n);
    std::iota(pos.begin(), pos.end(), 0.0);
    auto span = [&](const std::vector<double>& p) {
      double total = 0;
      for (const auto& e : edges) {
        auto [lo, hi] = std::minmax_element(e.begin(), e.end(), [&](auto a, auto b) { return p[a] < p[b]; });
        total += p[*hi] - p[*lo];
      }
      return total;
    };
    std::vector<double> best = pos;
    double best_span = span(pos);
    std::vector<std::vector<std::size_t>> edges_of(n);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (auto v : edges[i]) edges_of[v].push_back(i);
    }
    int stale = 0;
    for (int iter = 0; iter < 50 && !edges.empty() && stale < 5; ++iter) {
      std::vector<double> cog(edges.size());
      for (std::size_t i = 0; i < edges.size(); ++i) {
        double s = 0;
        for (auto v : edges[i]) s += pos[v];
        cog[i] = s / static_cast<double>(edges[i].size());
      }
      std::vector<double> target(n);
      for (std::size_t v = 0; v < n; ++v) {
        if (edges_of[v].empty()) {
          target[v] = pos[v];
          continue;
        }
        double s = 0;
        for (auto i : edges_of[v]) s += cog[i];
        target[v] = s / static_cast<double>(edges_of[v].size());
      }
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::stable_sort(perm.begin(), perm.end(), [&](auto a, auto b) { return target[a] < target[b]; });
      for (std::size_t r = 0; r < n; ++r) pos[perm[r]] = static_cast<double>(r);
      double s = span(pos);
      if (s < best_span) {
        best_span = s;
        best = pos;
        stale = 0;
      } else {
        ++stale;
      }
    }
    level_.resize(n);
    for (std::size_t v = 0; v < n; ++v) level_[v] = static_cast<std::uint32_t>(best[v]);
  }

  std::uint32_t cur(std::size_t e) const { return 2 * level_[e]; }

  void encode_all() {
    for (const auto& g : subs_) {
      Bdd b;
      switch (g.op()) {
        case LtlOp::False:
          b = mgr_->zero();
          break;
        case LtlOp::Prop:
        case LtlOp::NextF:
          b = mgr_->var(cur(elem_of_.at(g)));
          break;
        case LtlOp::SomeF:
          b = enc_.at(g.operand()) | mgr_->var(cur(elem_of_.at(g)));
          break;
        case LtlOp::Not:
          b = ~enc_.at(g.operand());
          break;
        case LtlOp::And:
          b = enc_.at(g.lhs()) & enc_.at(g.rhs());
          break;
        default:
          break;
      }
      enc_.emplace(g, std::move(b));
    }
  }

  // Invariant conjunct over (current, next): X g reads g at the next state.
  Bdd encode_rel(const Ltl& g, std::unordered_map<Ltl, Bdd, LtlHash>& memo) {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    Bdd b;
    switch (g.op()) {
      case LtlOp::Not:
        b = ~encode_rel(g.operand(), memo);
        break;
      case LtlOp::And:
        b = encode_rel(g.lhs(), memo) & encode_rel(g.rhs(), memo);
        break;
      case LtlOp::NextF:
        b = mgr_->shift(enc_.at(g.operand()), 1);
        break;
      default:
        b = enc_.at(g);
    }
    memo.emplace(g, b);
    return b;
  }

  struct Cluster {
    Bdd rel;
    Bdd pre_cube;  // next-state variables last used here
    Bdd img_cube;  // current-state variables last used here
  };

  void build_transitions() {
    std::vector<Bdd> parts;
    inv_ = mgr_->one();
    {
      std::unordered_map<Ltl, Bdd, LtlHash> memo;
      for (const auto& c : invariants_) {
        Bdd b = encode_rel(c, memo);
        auto s = mgr_->support(b);
        bool relational = std::any_of(s.begin(), s.end(), [](std::uint32_t v) { return v % 2 == 1; });
        if (relational) {
          parts.push_back(std::move(b));
        } else {
          inv_ &= b;
        }
      }
    }
    init_ = inv_;
    for (const auto& c : inits_) init_ &= enc_.at(c);
    for (std::size_t e = 0; e < elems_.size(); ++e) {
      const auto& el = elems_[e];
      if (el.kind == Elementary::Prop) continue;
      // X g at this state iff g at the next; Y_g iff F g at the next.
      const Bdd& target = el.kind == Elementary::Next ? enc_.at(el.formula.operand()) : enc_.at(el.formula);
      parts.push_back(mgr_->iff(mgr_->var(cur(e)), mgr_->shift(target, 1)));
    }
    // Group by the top of the support so related relations meet early.
    std::vector<std::pair<std::uint32_t, Bdd>> keyed;
    for (auto& p : parts) {
      auto s = mgr_->support(p);
      keyed.emplace_back(s.empty() ? 0 : s.front(), std::move(p));
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Bdd> rels;
    Bdd acc = mgr_->one();
    for (auto& [key, p] : keyed) {
      Bdd merged = acc & p;
      if (!acc.is_one() && mgr_->node_count(merged) > kClusterLimit) {
        rels.push_back(acc);
        acc = p;
      } else {
        acc = merged;
      }
    }
    if (!acc.is_one()) rels.push_back(acc);

    const std::uint32_t nv = mgr_->num_vars();
    std::vector<int> last(nv, -1);
    for (std::size_t i = 0; i < rels.size(); ++i) {
      for (auto v : mgr_->support(rels[i])) last[v] = static_cast<int>(i);
    }
    std::vector<std::vector<std::uint32_t>> pre_vars(rels.size()), img_vars(rels.size());
    std::vector<std::uint32_t> pre_free, img_free;
    for (std::uint32_t v = 0; v < nv; ++v) {
      bool is_next = v % 2 == 1;
      if (last[v] < 0) {
        (is_next ? pre_free : img_free).push_back(v);
      } else {
        (is_next ? pre_vars : img_vars)[static_cast<std::size_t>(last[v])].push_back(v);
      }
    }
    pre_free_ = mgr_->cube(pre_free);
    img_free_ = mgr_->cube(img_free);
    for (std::size_t i = 0; i < rels.size(); ++i) {
      clusters_.push_back(Cluster{rels[i], mgr_->cube(pre_vars[i]), mgr_->cube(img_vars[i])});
    }
  }

  // States with a successor in s (invariant not applied).
  Bdd preimage(const Bdd& s) {
    Bdd acc = mgr_->exists(mgr_->shift(s, 1), pre_free_);
    for (const auto& c : clusters_) acc = mgr_->and_exists(acc, c.rel, c.pre_cube);
    return acc;
  }

  Bdd image(const Bdd& s) {
    Bdd acc = mgr_->exists(s, img_free_);
    for (const auto& c : clusters_) acc = mgr_->and_exists(acc, c.rel, c.img_cube);
    return mgr_->shift(acc, -1) & inv_;
  }

  Bdd ex(const Bdd& s) { return preimage(s) & inv_; }

  void poll() const {
    if (opt_.should_stop && opt_.should_stop()) throw BddResourceOut{false};
  }

  // Successor-closed, so fair cycles can be searched inside it.
  Bdd reachable() {
    Bdd r = init_;
    Bdd frontier = init_;
    while (!frontier.is_zero()) {
      poll();
      frontier = image(frontier) & ~r;
      r |= frontier;
    }
    return r;
  }

  // Z = nu Z. AND_i EX E[Z U (Z and F_i)], starting from `within`.
  Bdd fair_states(const Bdd& within, LtlSatStats& stats) {
    for (std::size_t e = 0; e < elems_.size(); ++e) {
      if (elems_[e].kind != Elementary::Event) continue;
      fairness_.push_back(enc_.at(elems_[e].formula.operand()) | mgr_->nvar(cur(e)));
    }
    if (fairness_.empty()) fairness_.push_back(mgr_->one());
    Bdd z = within;
    while (true) {
      ++stats.fixpoint_iterations;
      Bdd before = z;
      for (const auto& fc : fairness_) {
        Bdd target = z & fc;
        Bdd reach = target;
        while (true) {
          poll();
          Bdd next = reach | (z & ex(reach));
          if (next == reach) break;
          reach = next;
        }
        z &= ex(reach);
        if (z.is_zero()) return z;
      }
      if (z == before) return z;
    }
  }

  std::vector<bool> pick_state(const Bdd& s) {
    std::vector<std::uint32_t> vars(elems_.size());
    for (std::size_t e = 0; e < elems_.size(); ++e) vars[e] = cur(e);
    return mgr_->pick_one(s, vars);
  }

  Bdd state_bdd(const std::vector<bool>& st) {
    std::vector<std::uint32_t> vars(elems_.size());
    for (std::size_t e = 0; e < elems_.size(); ++e) vars[e] = cur(e);
    return mgr_->minterm(vars, st);
  }

  // Shortest path inside `within` from state `from` to a state of `target`;
  // empty if none. The path starts with `from`.
  std::vector<std::vector<bool>> path_to(const std::vector<bool>& from, const Bdd& target, const Bdd& within) {
    std::vector<Bdd> rings{state_bdd(from)};
    Bdd seen = rings.front();
    while ((rings.back() & target).is_zero()) {
      Bdd next = image(rings.back()) & within & ~seen;
      if (next.is_zero()) return {};
      seen |= next;
      rings.push_back(next);
    }
    std::vector<std::vector<bool>> path(rings.size());
    path.back() = pick_state(rings.back() & target);
    for (std::size_t k = rings.size() - 1; k-- > 0;) {
      path[k] = pick_state(rings[k] & preimage(state_bdd(path[k + 1])));
    }
    return path;
  }

  LassoWord extract(const Bdd& start, const Bdd& fair) {
    std::vector<std::vector<bool>> prefix;
    std::vector<bool> c = pick_state(start);
    std::vector<std::vector<bool>> loop;
    while (true) {
      loop = {c};
      std::vector<bool> at = pick_state(image(state_bdd(c)) & fair);
      loop.push_back(at);
      for (const auto& fc : fairness_) {
        auto p = path_to(at, fc & fair, fair);
        if (p.empty()) throw Error("INTERNAL", "fair state cannot reach a fairness set");
        loop.insert(loop.end(), p.begin() + 1, p.end());
        at = loop.back();
      }
      auto back = path_to(at, state_bdd(c), fair);
      if (!back.empty()) {
        loop.insert(loop.end(), back.begin() + 1, back.end());
        loop.pop_back();  // c again
        break;
      }
      // c's component is left for good; restart from where we are.
      prefix.insert(prefix.end(), loop.begin(), loop.end() - 1);
      c = at;
    }
    LassoWord w;
    w.alphabet = alphabet_;
    std::vector<std::size_t> col;
    for (const auto& name : alphabet_) col.push_back(elem_of_.at(Ltl::prop(name)));
    auto valuation = [&](const std::vector<bool>& st) {
      Valuation v;
      for (auto e : col) v.push_back(st[e]);
      return v;
    };
    for (const auto& st : prefix) w.prefix.push_back(valuation(st));
    for (const auto& st : loop) w.loop.push_back(valuation(st));
    return w;
  }

  static constexpr std::size_t kClusterLimit = 4000;

  Ltl f_;
  const LtlSatOptions& opt_;
  std::vector<Ltl> inits_;
  std::vector<Ltl> invariants_;
  std::vector<Ltl> subs_;
  std::vector<Elementary> elems_;
  std::unordered_map<Ltl, std::size_t, LtlHash> elem_of_;
  std::vector<std::string> alphabet_;
  std::vector<std::uint32_t> level_;
  std::unique_ptr<BddManager> mgr_;
  std::unordered_map<Ltl, Bdd, LtlHash> enc_;
  Bdd inv_;
  Bdd init_;
  Bdd pre_free_;
  Bdd img_free_;
  std::vector<Cluster> clusters_;
  std::vector<Bdd> fairness_;
};

}  // namespace

LtlSatResult ltl_sat(const Ltl& f, const LtlSatOptions& options) { return Tableau(f, options).run(); }

}  // namespace tdl
