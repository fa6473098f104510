#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdlite/kb.hpp"
#include "tdlite/ltl.hpp"
#include "tdlite/qtl.hpp"

namespace tdl {

/// Constants and proposition naming for one KB.
///
/// Names are lowercased tokens joined by "__": `c_<A>__<c>`,
/// `geq_<q>__<R>[_inv]__<c>`, `p__<R>[_inv]`, witnesses `w__<R>[_inv]`.
/// Tokens collapse runs of '_' and drop trailing '_' and "_inv", and get a
/// `_<k>` suffix on collision, so the naming stays injective.
class GroundingContext {
 public:
  GroundingContext(const KnowledgeBase& kb, const TranslationContext& ctx);

  /// ABox individuals (sorted) then one witness per role of the context; a
  /// single synthetic constant when both are empty.
  const std::vector<Term>& constants() const { return constants_; }

  std::string constant_token(const Term& t) const;
  std::string prop_name(const Predicate& p, const Term& t) const;
  std::string role_prop_name(const Role& r) const;

 private:
  std::string role_token(const Role& r) const;

  std::vector<Term> constants_;
  std::map<std::string, std::string> concept_tokens_;
  std::map<std::string, std::string> role_tokens_;
  std::map<std::string, std::string> individual_tokens_;
};

/// Instantiates every FORALL over the constants (right-nested, in constant
/// order) and expands box operators as NOT F NOT / NOT O NOT.
Ltl ground(const Qtl& f, const GroundingContext& gctx);

/// Grounds each conjunct and joins them right-nested.
Ltl ground(const QtlTranslation& t, const GroundingContext& gctx);

}  // namespace tdl
