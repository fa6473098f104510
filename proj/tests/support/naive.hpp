#pragma once

// Test-side reference semantics: direct recursion over positions, with
// search windows wide enough for the temporal height of the operand.
// Deliberately shares no code with the library evaluator.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tdlite/ltl.hpp"
#include "tdlite/oracle.hpp"

namespace naive {

inline int height(const tdl::Ltl& f) {
  switch (f.op()) {
    case tdl::LtlOp::False:
    case tdl::LtlOp::Prop:
      return 0;
    case tdl::LtlOp::Not:
      return height(f.operand());
    case tdl::LtlOp::And:
      return std::max(height(f.lhs()), height(f.rhs()));
    default:
      return 1 + height(f.operand());
  }
}

class Evaluator {
 public:
  // letter(n) gives the valuation at n; positions below `floor` do not exist.
  Evaluator(std::vector<std::string> alphabet, std::function<const tdl::Valuation&(long)> letter,
            std::optional<long> floor, long right_start, long right_period, long left_end, long left_period)
      : alphabet_(std::move(alphabet)),
        letter_(std::move(letter)),
        floor_(floor),
        right_start_(right_start),
        right_period_(right_period),
        left_end_(left_end),
        left_period_(left_period) {}

  bool eval(const tdl::Ltl& f, long n) {
    auto key = std::make_pair(f.id(), n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool v = compute(f, n);
    memo_.emplace(key, v);
    return v;
  }

 private:
  bool compute(const tdl::Ltl& f, long n) {
    using tdl::LtlOp;
    switch (f.op()) {
      case LtlOp::False:
        return false;
      case LtlOp::Prop: {
        auto it = std::find(alphabet_.begin(), alphabet_.end(), f.name());
        return it != alphabet_.end() && letter_(n)[static_cast<std::size_t>(it - alphabet_.begin())];
      }
      case LtlOp::Not:
        return !eval(f.operand(), n);
      case LtlOp::And:
        return eval(f.lhs(), n) && eval(f.rhs(), n);
      case LtlOp::NextF:
        return eval(f.operand(), n + 1);
      case LtlOp::NextP:
        if (floor_ && n - 1 < *floor_) return false;
        return eval(f.operand(), n - 1);
      case LtlOp::SomeF: {
        long hi = std::max(n, right_start_ + right_period_ * (height(f.operand()) + 1)) + right_period_;
        for (long m = n; m <= hi; ++m) {
          if (eval(f.operand(), m)) return true;
        }
        return false;
      }
      case LtlOp::SomeP: {
        long lo = floor_ ? *floor_ : std::min(n, left_end_ - left_period_ * (height(f.operand()) + 1)) - left_period_;
        for (long m = n; m >= lo; --m) {
          if (eval(f.operand(), m)) return true;
        }
        return false;
      }
    }
    return false;
  }

  std::vector<std::string> alphabet_;
  std::function<const tdl::Valuation&(long)> letter_;
  std::optional<long> floor_;
  long right_start_, right_period_, left_end_, left_period_;
  std::map<std::pair<const void*, long>, bool> memo_;
};

inline bool eval(const tdl::Ltl& f, const tdl::LassoWord& w, long pos = 0) {
  const long p = static_cast<long>(w.prefix.size());
  const long l = static_cast<long>(w.loop.size());
  auto letter = [&w, p, l](long n) -> const tdl::Valuation& {
    if (n < p) return w.prefix[static_cast<std::size_t>(n)];
    return w.loop[static_cast<std::size_t>((n - p) % l)];
  };
  Evaluator e(w.alphabet, letter, 0L, p, l, 0, 1);
  return e.eval(f, pos);
}

inline bool eval(const tdl::Ltl& f, const tdl::BiLassoWord& w, long pos = 0) {
  const long lp = static_cast<long>(w.left_prefix.size());
  const long ll = static_cast<long>(w.left_loop.size());
  const long rp = static_cast<long>(w.right_prefix.size());
  const long rl = static_cast<long>(w.right_loop.size());
  auto letter = [&w, lp, ll, rp, rl](long n) -> const tdl::Valuation& {
    if (n >= rp) return w.right_loop[static_cast<std::size_t>((n - rp) % rl)];
    if (n >= 0) return w.right_prefix[static_cast<std::size_t>(n)];
    if (n >= -lp) return w.left_prefix[static_cast<std::size_t>(n + lp)];
    // n = -lp - 1 is the last letter of left_loop.
    long k = (-lp - 1 - n) % ll;
    return w.left_loop[static_cast<std::size_t>(ll - 1 - k)];
  };
  Evaluator e(w.alphabet, letter, std::nullopt, rp, rl, -lp - 1, ll);
  return e.eval(f, pos);
}

// Random formula with exactly `nodes` nodes over props p0..p{k-1}.
inline tdl::Ltl random_formula(std::mt19937_64& rng, std::size_t nodes, std::size_t props, bool past) {
  using tdl::Ltl;
  if (nodes <= 1) {
    std::uniform_int_distribution<std::size_t> d(0, props);
    std::size_t i = d(rng);
    return i == props ? Ltl::falsum() : Ltl::prop("p" + std::to_string(i));
  }
  std::vector<tdl::LtlOp> ops{tdl::LtlOp::Not, tdl::LtlOp::NextF, tdl::LtlOp::SomeF};
  if (past) {
    ops.push_back(tdl::LtlOp::NextP);
    ops.push_back(tdl::LtlOp::SomeP);
  }
  if (nodes >= 3) ops.push_back(tdl::LtlOp::And);
  auto op = ops[std::uniform_int_distribution<std::size_t>(0, ops.size() - 1)(rng)];
  if (op == tdl::LtlOp::And) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, nodes - 2)(rng);
    Ltl a = random_formula(rng, k, props, past);
    Ltl b = random_formula(rng, nodes - 1 - k, props, past);
    return Ltl::conj(a, b);
  }
  Ltl c = random_formula(rng, nodes - 1, props, past);
  return op == tdl::LtlOp::Not ? Ltl::negation(c) : Ltl::unary(op, c);
}

// Every lasso with prefix + loop <= max_len over the formula's props;
// returns the first one satisfying f at 0.
inline std::optional<tdl::LassoWord> enumerate_lasso(const tdl::Ltl& f, std::size_t max_len) {
  auto names = tdl::ltl::props(f);
  std::vector<std::string> alphabet(names.begin(), names.end());
  const std::size_t k = alphabet.size();
  for (std::size_t len = 1; len <= max_len; ++len) {
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t bits = k * len;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
        tdl::LassoWord w;
        w.alphabet = alphabet;
        std::size_t b = 0;
        for (std::size_t i = 0; i < len; ++i) {
          tdl::Valuation v(k);
          for (std::size_t j = 0; j < k; ++j, ++b) v[j] = (code >> b) & 1u;
          (i < p ? w.prefix : w.loop).push_back(v);
        }
        if (naive::eval(f, w, 0L)) return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace naive
