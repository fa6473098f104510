#include <gtest/gtest.h>

#include "naive.hpp"
#include "tdlite/bdd.hpp"
#include "tdlite/depast.hpp"
#include "tdlite/oracle.hpp"
#include "tdlite/parser.hpp"

using namespace tdl;

namespace {

Ltl P(const char* s) { return parse_ltl(s); }

LassoWord lasso(std::vector<std::string> alphabet, std::vector<Valuation> prefix, std::vector<Valuation> loop) {
  return LassoWord{std::move(alphabet), std::move(prefix), std::move(loop)};
}

std::string code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Bdd, MatchesTruthTables) {
  BddManager m(6);
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    // Random functions as disjunctions of random cubes.
    auto random_fn = [&](std::vector<bool>& table) {
      Bdd f = m.zero();
      table.assign(64, false);
      for (int c = 0; c < 3; ++c) {
        Bdd cube = m.one();
        std::vector<int> lit(6, -1);
        for (std::uint32_t v = 0; v < 6; ++v) {
          int r = static_cast<int>(rng() % 3);
          if (r == 0) cube = cube & m.var(v);
          if (r == 1) cube = cube & m.nvar(v);
          lit[v] = r;
        }
        f = f | cube;
        for (int x = 0; x < 64; ++x) {
          bool ok = true;
          for (int v = 0; v < 6; ++v) {
            bool bit = (x >> v) & 1;
            if ((lit[v] == 0 && !bit) || (lit[v] == 1 && bit)) ok = false;
          }
          if (ok) table[x] = true;
        }
      }
      return f;
    };
    std::vector<bool> ta, tb;
    Bdd a = random_fn(ta);
    Bdd b = random_fn(tb);
    Bdd x = m.iff(a, b);
    std::vector<std::uint32_t> q{1, 4};
    Bdd e = m.exists(a, m.cube(q));
    Bdd ae = m.and_exists(a, b, m.cube(q));
    for (int v = 0; v < 64; ++v) {
      std::vector<bool> asg(6);
      for (int i = 0; i < 6; ++i) asg[i] = (v >> i) & 1;
      EXPECT_EQ(m.eval(a & b, asg), ta[v] && tb[v]);
      EXPECT_EQ(m.eval(~a, asg), !ta[v]);
      EXPECT_EQ(m.eval(x, asg), ta[v] == tb[v]);
      bool ex = false, aex = false;
      for (int bits = 0; bits < 4; ++bits) {
        int w = (v & ~((1 << 1) | (1 << 4))) | ((bits & 1) << 1) | ((bits >> 1) << 4);
        ex = ex || ta[w];
        aex = aex || (ta[w] && tb[w]);
      }
      EXPECT_EQ(m.eval(e, asg), ex);
      EXPECT_EQ(m.eval(ae, asg), aex);
    }
  }
}

TEST(Bdd, ShiftAndPick) {
  BddManager m(8);
  Bdd f = m.var(0) & m.nvar(2);
  Bdd g = m.shift(f, 1);
  EXPECT_EQ(g, m.var(1) & m.nvar(3));
  EXPECT_EQ(m.support(g), (std::vector<std::uint32_t>{1, 3}));
  std::vector<std::uint32_t> vars{1, 3, 5};
  auto pick = m.pick_one(g, vars);
  EXPECT_EQ(pick, (std::vector<bool>{true, false, false}));
}

TEST(Bdd, NodeLimitThrows) {
  BddManager::Limits lim;
  lim.max_nodes = 64;
  BddManager m(40, lim);
  EXPECT_THROW(
      {
        Bdd f = m.zero();
        for (std::uint32_t i = 0; i < 20; ++i) f = f | (m.var(i) & m.var(39 - i));
      },
      BddResourceOut);
}

TEST(Eval, Examples) {
  BiLassoWord w{{"A"}, {{false}}, {{true}, {false}, {false}}, {{false}}, {{false}}};
  EXPECT_TRUE(eval(P("O A"), w, 0));
  EXPECT_TRUE(eval(P("Y Y Y A"), w, 0));
  EXPECT_FALSE(eval(P("Y Y A"), w, 0));
  EXPECT_FALSE(eval(P("F A"), w, 0));

  auto l = lasso({"A"}, {{false}, {true}}, {{false}});
  EXPECT_TRUE(eval(P("X A"), l, 0));
  auto all = lasso({"A"}, {}, {{true}});
  for (int n = 0; n < 5; ++n) EXPECT_TRUE(eval(P("~ F ~ A"), all, n));
  EXPECT_FALSE(eval(P("Y true"), all, 0));
  EXPECT_TRUE(eval(P("Y true"), all, 1));
}

TEST(Eval, AgreesWithNaiveAndIsStableUnderUnrolling) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    Ltl f = naive::random_formula(rng, 1 + rng() % 10, 3, true);
    std::vector<std::string> ab{"p0", "p1", "p2"};
    auto letter = [&] { return Valuation{bool(rng() & 1), bool(rng() & 1), bool(rng() & 1)}; };
    auto part = [&](std::size_t min) {
      std::vector<Valuation> v(min + rng() % 3);
      for (auto& x : v) x = letter();
      return v;
    };
    LassoWord l{ab, part(0), part(1)};
    BiLassoWord b{ab, part(1), part(0), part(0), part(1)};
    for (long pos : {0L, 1L, 3L}) {
      EXPECT_EQ(eval(f, l, pos), naive::eval(f, l, pos)) << print_ltl(f);
      EXPECT_EQ(eval(f, b, pos), naive::eval(f, b, pos)) << print_ltl(f);
      EXPECT_EQ(eval(f, b, -pos), naive::eval(f, b, -pos)) << print_ltl(f);
    }
    for (int k = 1; k <= 3; ++k) {
      LassoWord u = l;
      BiLassoWord v = b;
      for (int r = 0; r < k; ++r) {
        u.prefix.insert(u.prefix.end(), l.loop.begin(), l.loop.end());
        v.right_prefix.insert(v.right_prefix.end(), b.right_loop.begin(), b.right_loop.end());
        v.left_prefix.insert(v.left_prefix.begin(), b.left_loop.begin(), b.left_loop.end());
      }
      EXPECT_EQ(eval(f, u, 0), eval(f, l, 0));
      EXPECT_EQ(eval(f, v, 0), eval(f, b, 0));
    }
  }
}

TEST(LtlSat, Basics) {
  EXPECT_EQ(ltl_sat(P("A & ~A")).verdict, SatVerdict::Unsat);
  auto r = ltl_sat(P("F A"));
  ASSERT_EQ(r.verdict, SatVerdict::Sat);
  ASSERT_TRUE(r.model);
  bool seen = false;
  for (const auto& v : r.model->prefix) seen = seen || v[0];
  for (const auto& v : r.model->loop) seen = seen || v[0];
  EXPECT_TRUE(seen);
  EXPECT_EQ(ltl_sat(P("G F A & F G ~A")).verdict, SatVerdict::Unsat);
  EXPECT_EQ(ltl_sat(P("G (A -> X ~A) & G (~A -> X A) & G F A")).verdict, SatVerdict::Sat);
  EXPECT_EQ(ltl_sat(P("false")).verdict, SatVerdict::Unsat);
  EXPECT_EQ(ltl_sat(P("true")).verdict, SatVerdict::Sat);
}

TEST(LtlSat, Errors) {
  EXPECT_EQ(code_of([] { ltl_sat(P("Y A")); }), "PAST_OPERATOR_PRESENT");
  LtlSatOptions o;
  o.max_elementary = 2;
  EXPECT_EQ(code_of([&] { ltl_sat(P("X X X A"), o); }), "FORMULA_TOO_LARGE");
  LtlSatOptions stop;
  stop.should_stop = [] { return true; };
  Ltl big = P("G (a <-> X b) & G (b <-> X c) & G (c <-> X d) & G F a & G F ~d & F G (a | b)");
  EXPECT_EQ(code_of([&] { ltl_sat(big, stop); }), "RESOURCE_LIMIT");
}

TEST(LtlSat, AgreesWithLassoEnumeration) {
  std::mt19937_64 rng(5);
  int sat = 0;
  for (int i = 0; i < 300; ++i) {
    Ltl f = naive::random_formula(rng, 1 + rng() % 11, 3, false);
    auto r = ltl_sat(f);
    auto found = naive::enumerate_lasso(f, 4);
    if (found) {
      EXPECT_EQ(r.verdict, SatVerdict::Sat) << print_ltl(f);
      ++sat;
    }
    if (r.verdict == SatVerdict::Sat) {
      ASSERT_TRUE(r.model);
      EXPECT_TRUE(naive::eval(f, *r.model, 0)) << print_ltl(f);
    }
  }
  EXPECT_GT(sat, 50);
}

TEST(ZSat, Examples) {
  auto w = z_sat_bounded(P("O A"));
  ASSERT_TRUE(w);
  EXPECT_TRUE(naive::eval(P("O A"), *w, 0));
  auto a = z_sat_bounded(P("A"));
  ASSERT_TRUE(a);
  EXPECT_TRUE(a->at(0)[0]);
  EXPECT_FALSE(z_sat_bounded(P("A & ~A")));
  EXPECT_FALSE(z_sat_bounded(P("F A & ~ F A")));
}

TEST(ZSat, NextPastWithHistoricallyIsSatisfiable) {
  // A true at every position is a model: Y A and H A both hold at 0.
  Ltl f = P("Y A & ~ O ~A");
  auto w = z_sat_bounded(f);
  ASSERT_TRUE(w);
  EXPECT_TRUE(naive::eval(f, *w, 0));
  EXPECT_EQ(ltl_sat(depast(f)).verdict, SatVerdict::Sat);
}

TEST(Reconstruct, DepastModelsGiveZModels) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 150; ++i) {
    Ltl f = naive::random_formula(rng, 1 + rng() % 8, 2, true);
    auto r = ltl_sat(depast(f));
    if (r.verdict != SatVerdict::Sat) {
      EXPECT_FALSE(z_sat_bounded(f)) << print_ltl(f);
      continue;
    }
    auto names = ltl::props(f);
    auto w = reconstruct_z_word(*r.model, {names.begin(), names.end()});
    EXPECT_TRUE(naive::eval(f, w, 0)) << print_ltl(f);
  }
}
