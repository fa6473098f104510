#include "tdlite/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "tdlite/depast.hpp"

namespace tdl {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

const Valuation& periodic_at(const std::vector<Valuation>& prefix, const std::vector<Valuation>& loop,
                             std::int64_t k) {
  auto p = static_cast<std::int64_t>(prefix.size());
  if (k < p) return prefix[static_cast<std::size_t>(k)];
  return loop[static_cast<std::size_t>((k - p) % static_cast<std::int64_t>(loop.size()))];
}

// A boolean function on the integers: explicit on [lo, lo + core.size()),
// periodic to the left (left[(n - lo) mod |left|]) and to the right
// (right[(n - hi - 1) mod |right|]).
struct Signal {
  std::int64_t lo = 0;
  std::vector<char> core;
  std::vector<char> left{0};
  std::vector<char> right{0};

  std::int64_t hi() const { return lo + static_cast<std::int64_t>(core.size()) - 1; }

  char get(std::int64_t n) const {
    if (n < lo) return left[static_cast<std::size_t>(floor_mod(n - lo, static_cast<std::int64_t>(left.size())))];
    if (n > hi()) {
      return right[static_cast<std::size_t>(floor_mod(n - hi() - 1, static_cast<std::int64_t>(right.size())))];
    }
    return core[static_cast<std::size_t>(n - lo)];
  }

  // Same function over a wider window and multiplied periods.
  Signal widened(std::int64_t new_lo, std::int64_t new_hi, std::size_t lp, std::size_t rp) const {
    Signal s;
    s.lo = new_lo;
    s.core.resize(static_cast<std::size_t>(std::max<std::int64_t>(new_hi - new_lo + 1, 0)));
    for (std::size_t i = 0; i < s.core.size(); ++i) s.core[i] = get(new_lo + static_cast<std::int64_t>(i));
    s.left.resize(lp);
    for (std::size_t j = 0; j < lp; ++j) s.left[j] = get(new_lo - static_cast<std::int64_t>(lp) + static_cast<std::int64_t>(j));
    s.right.resize(rp);
    for (std::size_t j = 0; j < rp; ++j) s.right[j] = get(new_hi + 1 + static_cast<std::int64_t>(j));
    return s;
  }
};

bool any(const std::vector<char>& v) {
  return std::any_of(v.begin(), v.end(), [](char c) { return c != 0; });
}

Signal constant(bool value) {
  Signal s;
  s.left = {static_cast<char>(value)};
  s.right = {static_cast<char>(value)};
  return s;
}

Signal negate(const Signal& a) {
  Signal s = a;
  for (auto* v : {&s.core, &s.left, &s.right}) {
    for (auto& c : *v) c = !c;
  }
  return s;
}

Signal conjoin(const Signal& a, const Signal& b) {
  std::int64_t lo = std::min(a.lo, b.lo);
  std::int64_t hi = std::max(a.hi(), b.hi());
  std::size_t lp = std::lcm(a.left.size(), b.left.size());
  std::size_t rp = std::lcm(a.right.size(), b.right.size());
  Signal x = a.widened(lo, hi, lp, rp);
  Signal y = b.widened(lo, hi, lp, rp);
  for (std::size_t i = 0; i < x.core.size(); ++i) x.core[i] = x.core[i] && y.core[i];
  for (std::size_t i = 0; i < lp; ++i) x.left[i] = x.left[i] && y.left[i];
  for (std::size_t i = 0; i < rp; ++i) x.right[i] = x.right[i] && y.right[i];
  return x;
}

Signal shifted(const Signal& a, std::int64_t delta) {
  Signal s = a;
  s.lo += delta;
  return s;
}

Signal eventually_future(const Signal& a) {
  auto lp = static_cast<std::int64_t>(a.left.size());
  Signal s;
  s.lo = a.lo - lp;
  s.core.resize(a.core.size() + a.left.size());
  char next = any(a.right);
  for (std::int64_t n = a.hi(); n >= s.lo; --n) {
    next = a.get(n) || next;
    s.core[static_cast<std::size_t>(n - s.lo)] = next;
  }
  s.right = {static_cast<char>(any(a.right))};
  // Below the widened window the look-ahead spans a full left period.
  s.left = {s.core.front()};
  return s;
}

Signal eventually_past(const Signal& a) {
  auto rp = static_cast<std::int64_t>(a.right.size());
  Signal s;
  s.lo = a.lo;
  s.core.resize(a.core.size() + a.right.size());
  char prev = any(a.left);
  for (std::int64_t n = a.lo; n <= a.hi() + rp; ++n) {
    prev = a.get(n) || prev;
    s.core[static_cast<std::size_t>(n - s.lo)] = prev;
  }
  s.left = {static_cast<char>(any(a.left))};
  s.right = {s.core.back()};
  return s;
}

// Over N, positions below zero do not exist: every signal is false there.
Signal clamp(const Signal& a) {
  Signal s = a.widened(0, std::max<std::int64_t>(a.hi(), -1), 1, a.right.size());
  s.left = {0};
  return s;
}

template <typename PropSignal>
bool evaluate(const Ltl& f, std::int64_t pos, bool bounded, PropSignal prop_signal) {
  auto subs = ltl::subformulas(f);
  std::unordered_map<Ltl, std::size_t, LtlHash> index;
  std::vector<Signal> sig;
  sig.reserve(subs.size());
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const Ltl& g = subs[k];
    index.emplace(g, k);
    Signal s;
    switch (g.op()) {
      case LtlOp::False:
        s = constant(false);
        break;
      case LtlOp::Prop:
        s = prop_signal(g.name());
        break;
      case LtlOp::Not:
        s = negate(sig[index.at(g.operand())]);
        break;
      case LtlOp::And:
        s = conjoin(sig[index.at(g.lhs())], sig[index.at(g.rhs())]);
        break;
      case LtlOp::NextF:
        s = shifted(sig[index.at(g.operand())], -1);
        break;
      case LtlOp::NextP:
        s = shifted(sig[index.at(g.operand())], 1);
        break;
      case LtlOp::SomeF:
        s = eventually_future(sig[index.at(g.operand())]);
        break;
      case LtlOp::SomeP:
        s = eventually_past(sig[index.at(g.operand())]);
        break;
    }
    sig.push_back(bounded ? clamp(s) : std::move(s));
  }
  return sig.back().get(pos) != 0;
}

std::ptrdiff_t alphabet_index(const std::vector<std::string>& alphabet, const std::string& name) {
  auto it = std::find(alphabet.begin(), alphabet.end(), name);
  return it == alphabet.end() ? -1 : it - alphabet.begin();
}

std::vector<char> column(const std::vector<Valuation>& vs, std::ptrdiff_t i) {
  std::vector<char> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(static_cast<char>(v[static_cast<std::size_t>(i)]));
  return out;
}

}  // namespace

const Valuation& LassoWord::at(std::int64_t n) const { return periodic_at(prefix, loop, n); }

const Valuation& BiLassoWord::at(std::int64_t n) const {
  if (n >= 0) return periodic_at(right_prefix, right_loop, n);
  auto k = static_cast<std::size_t>(-n);
  if (k <= left_prefix.size()) return left_prefix[left_prefix.size() - k];
  std::size_t j = (k - left_prefix.size() - 1) % left_loop.size();
  return left_loop[left_loop.size() - 1 - j];
}

bool eval(const Ltl& f, const LassoWord& w, std::int64_t pos) {
  return evaluate(f, pos, true, [&](const std::string& name) {
    auto i = alphabet_index(w.alphabet, name);
    if (i < 0) return constant(false);
    Signal s;
    s.lo = 0;
    s.core = column(w.prefix, i);
    s.right = column(w.loop, i);
    return s;
  });
}

bool eval(const Ltl& f, const BiLassoWord& w, std::int64_t pos) {
  return evaluate(f, pos, false, [&](const std::string& name) {
    auto i = alphabet_index(w.alphabet, name);
    if (i < 0) return constant(false);
    Signal s;
    s.lo = -static_cast<std::int64_t>(w.left_prefix.size());
    s.core = column(w.left_prefix, i);
    auto rp = column(w.right_prefix, i);
    s.core.insert(s.core.end(), rp.begin(), rp.end());
    s.left = column(w.left_loop, i);
    s.right = column(w.right_loop, i);
    return s;
  });
}

namespace {

struct Shape {
  std::size_t ll, lp, rp, rl;
  std::size_t length() const { return ll + lp + rp + rl; }
};

}  // namespace

std::optional<BiLassoWord> z_sat_bounded(const Ltl& f, const ZSearchBounds& bounds) {
  auto names = ltl::props(f);
  if (names.size() > bounds.max_props) return std::nullopt;
  std::vector<std::string> alphabet(names.begin(), names.end());
  const std::size_t np = alphabet.size();

  std::vector<Shape> shapes;
  for (std::size_t ll = 1; ll <= bounds.max_loop; ++ll) {
    for (std::size_t rl = 1; rl <= bounds.max_loop; ++rl) {
      for (std::size_t lp = 0; lp <= bounds.max_prefix; ++lp) {
        for (std::size_t rp = 0; rp <= bounds.max_prefix; ++rp) shapes.push_back({ll, lp, rp, rl});
      }
    }
  }
  std::stable_sort(shapes.begin(), shapes.end(),
                   [](const Shape& a, const Shape& b) { return a.length() < b.length(); });

  std::uint64_t budget = bounds.max_words;
  for (const auto& shape : shapes) {
    const std::size_t bits = np * shape.length();
    if (bits >= 63) break;
    const std::uint64_t count = std::uint64_t{1} << bits;
    if (count > budget) break;
    budget -= count;
    BiLassoWord w;
    w.alphabet = alphabet;
    w.left_loop.assign(shape.ll, Valuation(np));
    w.left_prefix.assign(shape.lp, Valuation(np));
    w.right_prefix.assign(shape.rp, Valuation(np));
    w.right_loop.assign(shape.rl, Valuation(np));
    for (std::uint64_t code = 0; code < count; ++code) {
      std::size_t bit = 0;
      for (auto* part : {&w.left_loop, &w.left_prefix, &w.right_prefix, &w.right_loop}) {
        for (auto& v : *part) {
          for (std::size_t p = 0; p < np; ++p, ++bit) v[p] = ((code >> bit) & 1u) != 0;
        }
      }
      if (eval(f, w, 0)) return w;
    }
  }
  return std::nullopt;
}

BiLassoWord reconstruct_z_word(const LassoWord& model, const std::vector<std::string>& props) {
  std::vector<std::ptrdiff_t> pos_idx, neg_idx;
  for (const auto& p : props) {
    pos_idx.push_back(alphabet_index(model.alphabet, pos_name(p)));
    neg_idx.push_back(alphabet_index(model.alphabet, neg_name(p)));
  }
  auto read = [&](const std::vector<std::ptrdiff_t>& idx, const Valuation& v) {
    Valuation out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx[i] >= 0 && v[static_cast<std::size_t>(idx[i])];
    return out;
  };
  BiLassoWord w;
  w.alphabet = props;
  for (const auto& v : model.prefix) w.right_prefix.push_back(read(pos_idx, v));
  for (const auto& v : model.loop) w.right_loop.push_back(read(pos_idx, v));
  // Position -k reads the lasso at k; past the prefix the lasso is periodic.
  const auto p = static_cast<std::int64_t>(model.prefix.size());
  const auto l = static_cast<std::int64_t>(model.loop.size());
  for (std::int64_t k = p; k >= 1; --k) w.left_prefix.push_back(read(neg_idx, model.at(k)));
  for (std::int64_t j = 0; j < l; ++j) w.left_loop.push_back(read(neg_idx, model.loop[static_cast<std::size_t>(floor_mod(l - j, l))]));
  return w;
}

}  // namespace tdl
