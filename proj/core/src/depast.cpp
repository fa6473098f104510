#include "tdlite/depast.hpp"

#include <algorithm>
#include <cctype>

#include "tdlite/error.hpp"

namespace tdl {

std::string pos_name(const std::string& prop) { return prop + "__pos"; }
std::string neg_name(const std::string& prop) { return prop + "__neg"; }

namespace {

// True if `name` is `prefix` followed by one or more digits.
bool shadows(const std::string& name, const std::string& prefix) {
  if (name.size() <= prefix.size() || name.compare(0, prefix.size(), prefix) != 0) return false;
  return std::all_of(name.begin() + static_cast<std::ptrdiff_t>(prefix.size()), name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

SubformulaTable::SubformulaTable(const Ltl& root) : subs_(ltl::subformulas(root)) {
  auto names = ltl::props(root);
  props_.assign(names.begin(), names.end());
  prefix_ = "s";
  while (std::any_of(props_.begin(), props_.end(), [&](const std::string& p) { return shadows(p, prefix_); })) {
    prefix_ += 's';
  }
  bar_pos_.reserve(subs_.size());
  bar_neg_.reserve(subs_.size());
  for (std::size_t k = 0; k < subs_.size(); ++k) {
    const Ltl& xi = subs_[k];
    index_.emplace(xi, k);
    switch (xi.op()) {
      case LtlOp::False:
        bar_pos_.push_back(xi);
        bar_neg_.push_back(xi);
        break;
      case LtlOp::Prop:
        bar_pos_.push_back(Ltl::prop(pos_name(xi.name())));
        bar_neg_.push_back(Ltl::prop(neg_name(xi.name())));
        break;
      case LtlOp::Not: {
        std::size_t a = index_.at(xi.operand());
        bar_pos_.push_back(Ltl::negation(bar_pos_[a]));
        bar_neg_.push_back(Ltl::negation(bar_neg_[a]));
        break;
      }
      case LtlOp::And: {
        std::size_t a = index_.at(xi.lhs());
        std::size_t b = index_.at(xi.rhs());
        bar_pos_.push_back(Ltl::conj(bar_pos_[a], bar_pos_[b]));
        bar_neg_.push_back(Ltl::conj(bar_neg_[a], bar_neg_[b]));
        break;
      }
      default: {
        temporal_.push_back(k);
        std::string base = prefix_ + std::to_string(k);
        bar_pos_.push_back(Ltl::prop(pos_name(base)));
        bar_neg_.push_back(Ltl::prop(neg_name(base)));
      }
    }
  }
}

std::size_t SubformulaTable::index_of(const Ltl& xi) const {
  auto it = index_.find(xi);
  if (it == index_.end()) throw Error("NOT_A_SUBFORMULA", "formula is not in the subformula table");
  return it->second;
}

std::string SubformulaTable::surrogate(const Ltl& xi) const { return prefix_ + std::to_string(index_of(xi)); }

Ltl SubformulaTable::bar(const Ltl& xi, bool plus) const {
  std::size_t k = index_of(xi);
  return plus ? bar_pos_[k] : bar_neg_[k];
}

DepastResult depast_with_table(const Ltl& f) {
  SubformulaTable table(f);
  for (const auto& xi : table.subformulas()) {
    if (xi.op() == LtlOp::Prop || xi.op() == LtlOp::False || xi.op() == LtlOp::Not || xi.op() == LtlOp::And ||
        xi.is_temporal()) {
      continue;
    }
    throw Error("UNSUPPORTED_NODE", "unexpected operator in past elimination input");
  }

  std::vector<Ltl> sync;
  for (const auto& p : table.props()) sync.push_back(ltl::iff(Ltl::prop(pos_name(p)), Ltl::prop(neg_name(p))));
  for (std::size_t k : table.temporal()) {
    std::string base = table.surrogate_prefix() + std::to_string(k);
    sync.push_back(ltl::iff(Ltl::prop(pos_name(base)), Ltl::prop(neg_name(base))));
  }

  std::vector<Ltl> block;
  for (std::size_t k : table.temporal()) {
    const Ltl& xi = table.subformulas()[k];
    const Ltl& psi = xi.operand();
    Ltl xp = table.bar(xi, true);
    Ltl xn = table.bar(xi, false);
    Ltl pp = table.bar(psi, true);
    Ltl pn = table.bar(psi, false);
    switch (xi.op()) {
      case LtlOp::NextF:
        block.push_back(Ltl::conj(ltl::iff(Ltl::next_f(xn), pn), ltl::iff(xp, Ltl::next_f(pp))));
        break;
      case LtlOp::NextP:
        block.push_back(Ltl::conj(ltl::iff(Ltl::next_f(xp), pp), ltl::iff(xn, Ltl::next_f(pn))));
        break;
      case LtlOp::SomeF:
        block.push_back(Ltl::conj(ltl::iff(Ltl::next_f(xn), ltl::disj(xn, Ltl::next_f(pn))),
                                  ltl::iff(xp, Ltl::some_f(pp))));
        break;
      case LtlOp::SomeP:
        block.push_back(Ltl::conj(ltl::iff(Ltl::next_f(xp), ltl::disj(xp, Ltl::next_f(pp))),
                                  ltl::iff(xn, Ltl::some_f(pn))));
        break;
      default:
        break;
    }
  }

  Ltl out = Ltl::conj(table.bar(f, true), ltl::conj_balanced(sync));
  if (!block.empty()) out = Ltl::conj(out, ltl::always_f(ltl::conj_balanced(block)));
  return DepastResult{std::move(out), std::move(table)};
}

Ltl depast(const Ltl& f) { return depast_with_table(f).formula; }

}  // namespace tdl
