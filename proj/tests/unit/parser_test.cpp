#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tdlite/parser.hpp"
#include "tdlite/randgen.hpp"

using namespace tdl;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(TDLITE_TEST_DATA) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_code(const std::string& text) {
  try {
    parse_kb(text);
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(ParseKb, ExampleOne) {
  auto kb = parse_kb(read_data("example1.kb"));
  EXPECT_EQ(kb.signature.concept_names, (std::set<std::string>{"Adult", "Minor", "Person"}));
  EXPECT_EQ(kb.tbox.size(), 4u);
  EXPECT_EQ(kb.abox.size(), 5u);
  EXPECT_EQ(kb.tbox[3].rhs, Concept::unary(ConceptKind::AlwF, Concept::atomic("Adult")));
  const auto& last = std::get<ConceptAssertion>(kb.abox[4]);
  EXPECT_EQ(last.concept_name, "Adult");
  EXPECT_EQ(last.time, 3);
}

TEST(ParseKb, ExampleTwo) {
  auto kb = parse_kb(read_data("example2.kb"));
  EXPECT_TRUE(kb.signature.is_global("Name"));
  EXPECT_EQ(kb.tbox[1].rhs, Concept::negation(Concept::at_least(2, Role{"Name", false})));
  const auto& ra = std::get<RoleAssertion>(kb.abox[2]);
  EXPECT_EQ(ra.subject, "p1");
  EXPECT_EQ(ra.object, "Marc");
  EXPECT_EQ(ra.time, 1);
}

TEST(ParseKb, PrintParseRoundTrip) {
  for (const char* f : {"example1.kb", "example2.kb"}) {
    auto kb = parse_kb(read_data(f));
    auto text = print_kb(kb);
    EXPECT_EQ(parse_kb(text), kb) << text;
    EXPECT_EQ(print_kb(parse_kb(text)), text);
  }
}

TEST(ParseKb, RandomRoundTrip) {
  BatchSpec spec;
  spec.N = 3;
  spec.Q = 3;
  spec.Lt = 5;
  spec.Lc = 9;
  spec.abox_size = 8;
  for (std::size_t i = 0; i < 200; ++i) {
    spec.seed = i;
    auto kb = random_instance(spec, i);
    EXPECT_EQ(parse_kb(print_kb(kb)), kb);
  }
}

TEST(ParseKb, NegativeAndInverseSyntax) {
  auto kb = parse_kb(
      "SIG concept A local role R individual a individual b\n"
      "TBOX A SUB >= 2 R- OR X Y SOMP A\n"
      "ABOX NOT A(a)@-2 NOT R(a,b)@5\n");
  const auto& ca = std::get<ConceptAssertion>(kb.abox[0]);
  EXPECT_FALSE(ca.positive);
  EXPECT_EQ(ca.time, -2);
  EXPECT_FALSE(std::get<RoleAssertion>(kb.abox[1]).positive);
  const Concept& rhs = kb.tbox[0].rhs;
  ASSERT_EQ(rhs.kind(), ConceptKind::Or);
  EXPECT_EQ(rhs.lhs(), Concept::at_least(2, Role{"R", true}));
}

TEST(ParseKb, SyntaxErrorHasLocation) {
  try {
    parse_kb("SIG concept A\nTBOX\n  A SUB (A AND\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "SYNTAX_ERROR");
    EXPECT_EQ(e.location().line, 4);
  }
  try {
    parse_kb("SIG concept A\nTBOX A SUB ? \n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.location().line, 2);
    EXPECT_EQ(e.location().column, 12);
  }
}

TEST(ParseKb, ValidationCodes) {
  EXPECT_EQ(error_code("SIG individual John ABOX Child(John)@0"), "UNDECLARED_NAME");
  EXPECT_EQ(error_code("SIG concept A local role R TBOX A SUB >= 0 R"), "CARD_ZERO");
  EXPECT_EQ(error_code("SIG concept A TBOX A SUB A  A SUB A"), "DUPLICATE_AXIOM");
  EXPECT_EQ(error_code("SIG concept A TBOX A SUB"), "SYNTAX_ERROR");
  EXPECT_EQ(error_code("SIG concept SOMF"), "SYNTAX_ERROR");
}

TEST(ParseKb, SignatureInferredWhenAbsent) {
  auto kb = parse_kb("TBOX A SUB >= 1 R\nABOX R(a,b)@0 A(a)@1\n");
  EXPECT_TRUE(kb.signature.concept_names.contains("A"));
  EXPECT_TRUE(kb.signature.local_roles.contains("R"));
  EXPECT_EQ(kb.signature.individuals, (std::set<std::string>{"a", "b"}));
}

TEST(ParseKb, CommentsIgnored) {
  auto kb = parse_kb("# header\nSIG concept A # trailing\nTBOX A SUB A AND A # x\n");
  EXPECT_EQ(kb.tbox.size(), 1u);
}

TEST(ParseConcept, PrecedenceAndPrinting) {
  Concept c = parse_concept("NOT A AND B OR C");
  ASSERT_EQ(c.kind(), ConceptKind::Or);
  EXPECT_EQ(c.lhs().kind(), ConceptKind::And);
  EXPECT_EQ(c.lhs().lhs().kind(), ConceptKind::Not);
  EXPECT_EQ(print_concept(c), "NOT A AND B OR C");
  Concept d = parse_concept("NOT (A AND B)");
  EXPECT_EQ(print_concept(d), "NOT (A AND B)");
  EXPECT_EQ(parse_concept(print_concept(d)), d);
}

TEST(ParseLtl, DerivedConnectives) {
  Ltl a = Ltl::prop("a");
  Ltl b = Ltl::prop("b");
  EXPECT_EQ(parse_ltl("a | b"), ltl::disj(a, b));
  EXPECT_EQ(parse_ltl("a -> b -> a"), ltl::implies(a, ltl::implies(b, a)));
  EXPECT_EQ(parse_ltl("G a"), ltl::always_f(a));
  EXPECT_EQ(parse_ltl("H !a"), ltl::always_p(Ltl::negation(a)));
  EXPECT_EQ(parse_ltl("true"), Ltl::truth());
  EXPECT_EQ(parse_ltl(print_ltl(parse_ltl("O (a & Y b) <-> X F a"))), parse_ltl("O (a & Y b) <-> X F a"));
}
