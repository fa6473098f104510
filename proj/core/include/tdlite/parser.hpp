#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tdlite/kb.hpp"
#include "tdlite/ltl.hpp"

namespace tdl {

/// Parses a KB document and validates it. Throws Error with code
/// SYNTAX_ERROR (first error aborts) or with the code of the first
/// validation diagnostic.
///
///   kb        := "SIG" sig* "TBOX" ci* "ABOX" assertion*
///   sig       := "concept" NAME | ("global"|"local") "role" NAME | "individual" NAME
///   ci        := concept "SUB" concept
///   assertion := ["NOT"] NAME "(" NAME ["," NAME] ")" "@" SINT
///
/// Concept operators: NOT X Y SOMF SOMP ALWF ALWP (prefix, tightest),
/// then AND, then OR. `#` starts a comment.
KnowledgeBase parse_kb(std::string_view text);

/// Parses without running `validate`; syntax errors still throw.
KnowledgeBase parse_kb_unchecked(std::string_view text);

/// Concept in the KB syntax, e.g. "Person AND NOT >= 2 Name".
Concept parse_concept(std::string_view text);

/// Canonical document: sections in SIG/TBOX/ABOX order, one item per
/// line, signature names sorted, axioms in KB order.
std::string print_kb(const KnowledgeBase& kb);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string print_concept(const Concept& c);

/// Fully parenthesised infix LTL: `false`, names, `(~ f)`, `(f & g)`,
/// `(X f)`, `(F f)` and for past `(Y f)`, `(O f)`.
std::string print_ltl(const Ltl& f);

/// Accepts the printed form plus `true`, `!`, `|`, `->`, `<->`, `G`, `H`
/// with the usual precedences. Derived connectives are expanded into the
/// core constructors.
Ltl parse_ltl(std::string_view text);

}  // namespace tdl
