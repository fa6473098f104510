#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "tdlite/kb.hpp"
#include "tdlite/parser.hpp"
#include "tdlite/randgen.hpp"

using namespace tdl;

namespace {

Concept A(const char* n) { return Concept::atomic(n); }

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  for (const auto& d : ds) {
    if (d.code == code) return true;
  }
  return false;
}

}  // namespace

TEST(Normalize, BoxFutureBecomesNotSomeNot) {
  Concept c = Concept::unary(ConceptKind::AlwF, A("Adult"));
  Concept want = Concept::negation(Concept::unary(ConceptKind::SomeF, Concept::negation(A("Adult"))));
  EXPECT_EQ(normalize(c), want);
}

TEST(Normalize, AtomIsFixpoint) { EXPECT_EQ(normalize(A("A")), A("A")); }

TEST(Normalize, OrIsDeMorgan) {
  Concept want = Concept::negation(Concept::conj(Concept::negation(A("A")), Concept::negation(A("B"))));
  EXPECT_EQ(normalize(Concept::disj(A("A"), A("B"))), want);
}

TEST(Normalize, TopAndBoxPast) {
  EXPECT_EQ(normalize(Concept::top()), Concept::negation(Concept::bottom()));
  Concept c = Concept::unary(ConceptKind::AlwP, A("A"));
  EXPECT_EQ(normalize(c), Concept::negation(Concept::unary(ConceptKind::SomeP, Concept::negation(A("A")))));
}

TEST(Normalize, IdempotentAndAtMostTriple) {
  // Mix sugar into random concepts by wrapping subterms.
  BatchSpec spec;
  spec.N = 2;
  spec.Q = 2;
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    Concept c = random_concept(1 + i % 12, spec, rng);
    if (i % 3 == 0) c = Concept::disj(c, Concept::top());
    if (i % 5 == 0) c = Concept::unary(ConceptKind::AlwP, c);
    Concept n = normalize(c);
    EXPECT_TRUE(is_normalized(n));
    EXPECT_EQ(normalize(n), n);
    EXPECT_LE(n.size(), 3 * c.size());
  }
}

TEST(Validate, ExamplesAreWellFormed) {
  for (const char* file : {"example1.kb", "example2.kb"}) {
    std::ifstream in(std::string(TDLITE_TEST_DATA) + "/" + file);
    std::stringstream ss;
    ss << in.rdbuf();
    auto kb = parse_kb_unchecked(ss.str());
    EXPECT_TRUE(validate(kb).empty()) << file;
  }
}

TEST(Validate, CardinalityZero) {
  KnowledgeBase kb;
  kb.signature.concept_names = {"A"};
  kb.signature.local_roles = {"R"};
  kb.tbox.push_back({A("A"), Concept::at_least(0, Role{"R", false}), {}});
  EXPECT_TRUE(has_code(validate(kb), "CARD_ZERO"));
}

TEST(Validate, UndeclaredConceptInAssertion) {
  KnowledgeBase kb;
  kb.signature.individuals = {"John"};
  kb.abox.push_back(ConceptAssertion{true, "Child", "John", 0, {}});
  EXPECT_TRUE(has_code(validate(kb), "UNDECLARED_NAME"));
}

TEST(Validate, RoleKindConflictAndDuplicates) {
  KnowledgeBase kb;
  kb.signature.concept_names = {"A"};
  kb.signature.global_roles = {"R"};
  kb.signature.local_roles = {"R"};
  kb.tbox.push_back({A("A"), Concept::unary(ConceptKind::AlwF, A("A")), {}});
  kb.tbox.push_back({A("A"), Concept::negation(Concept::unary(ConceptKind::SomeF, Concept::negation(A("A")))), {}});
  auto ds = validate(kb);
  EXPECT_TRUE(has_code(ds, "ROLE_KIND_CONFLICT"));
  EXPECT_TRUE(has_code(ds, "DUPLICATE_AXIOM"));
}

TEST(Validate, BadIdentifier) {
  KnowledgeBase kb;
  kb.signature.concept_names = {"9lives", "SUB"};
  auto ds = validate(kb);
  EXPECT_EQ(std::count_if(ds.begin(), ds.end(), [](const auto& d) { return d.code == "BAD_IDENTIFIER"; }), 2);
}

TEST(Inverses, AddsInverseFacts) {
  std::vector<RoleFact> facts{{Role{"Name", false}, "p1", "Kennedy", 0, true}};
  auto closed = close_under_inverses(facts);
  ASSERT_EQ(closed.size(), 2u);
  EXPECT_EQ(closed[1], (RoleFact{Role{"Name", true}, "Kennedy", "p1", 0, true}));
  EXPECT_EQ(close_under_inverses(closed), closed);
}

TEST(Inverses, EmptyAndSelfLoop) {
  EXPECT_TRUE(close_under_inverses({}).empty());
  std::vector<RoleFact> facts{{Role{"R", false}, "a", "a", 2, true}};
  auto closed = close_under_inverses(facts);
  ASSERT_EQ(closed.size(), 2u);
  EXPECT_EQ(closed[1], (RoleFact{Role{"R", true}, "a", "a", 2, true}));
}

TEST(Inverses, NegativeFactsAreNotMirrored) {
  std::vector<RoleFact> facts{{Role{"R", false}, "a", "b", 0, false}};
  EXPECT_EQ(close_under_inverses(facts).size(), 1u);
}
