#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace thompson;
using thompson::testing::Gen;
using thompson::testing::w;

namespace {

const Variable X{"X"};
const Variable Y{"Y"};

template <class Builder>
bool holds(Builder&& build, const Assignment& a) {
  auto [sys, f] = build_standalone(build);
  return check_system(sys, a);
}

bool holds1(const std::function<Fragment(EquationSystem&)>& build, const Element& g) {
  return holds(build, {{"X", g}});
}

// Fills the auxiliaries by the witness construction and checks the result.
bool witnessed(const std::function<Fragment(EquationSystem&)>& build, Assignment a,
               const CommutatorOracle& oracle = search_oracle(1)) {
  auto [sys, f] = build_standalone(build);
  try {
    fill_fragment_witness(f, a, oracle);
  } catch (const Error&) {
    return false;
  }
  return check_system(sys, a);
}

void check_fragment_shape(const Fragment& f) {
  std::set<std::string> designated, auxiliary;
  for (const auto& v : f.designated) designated.insert(v.name);
  for (const auto& v : f.auxiliary) {
    EXPECT_FALSE(designated.contains(v.name)) << v.name;
    EXPECT_TRUE(auxiliary.insert(v.name).second) << "duplicate auxiliary " << v.name;
  }
  for (const auto& eq : f.equations()) {
    for (const auto& l : eq) {
      if (const auto* v = std::get_if<Variable>(&l.term)) {
        EXPECT_TRUE(designated.contains(v->name) || auxiliary.contains(v->name)) << v->name;
      }
    }
  }
}

auto cyclic_x0 = [](EquationSystem& s) { return define_cyclic_x0(s, X); };
auto cyclic_x1 = [](EquationSystem& s) { return define_cyclic_x1(s, X); };
auto monoid_x1 = [](EquationSystem& s) { return define_monoid_x1(s, X); };
auto monoid_power = [](std::int64_t k) {
  return [k](EquationSystem& s) { return define_monoid_power(s, X, k); };
};
auto pair_s = [](EquationSystem& s) { return define_pair_S(s, X, Y); };
auto comm = [](Mode m) { return [m](EquationSystem& s) { return define_commutator_subgroup(s, X, m); }; };
auto expsum_zero = [](Generator which, Mode m) {
  return [which, m](EquationSystem& s) { return define_expsum_zero(s, X, which, m); };
};
auto expsum_equal = [](Generator which, Mode m) {
  return [which, m](EquationSystem& s) { return define_expsum_equal(s, X, Y, which, m); };
};
auto mixed = [](Mode m) { return [m](EquationSystem& s) { return define_expsum_mixed_nonneg(s, X, Y, m); }; };

}  // namespace

TEST(Fragments, CyclicX0Examples) {
  const auto& c = constants();
  EXPECT_TRUE(holds1(cyclic_x0, power(c.x0, 5)));
  EXPECT_TRUE(holds1(cyclic_x0, Element()));
  EXPECT_FALSE(holds1(cyclic_x0, c.x1));
  auto [sys, f] = build_standalone(cyclic_x0);
  EXPECT_EQ(sys.equations().size(), 1u);
  EXPECT_TRUE(f.auxiliary.empty());
}

TEST(Fragments, CyclicX1Examples) {
  const auto& c = constants();
  EXPECT_TRUE(holds1(cyclic_x1, power(c.x1, -2)));
  EXPECT_TRUE(holds1(cyclic_x1, Element()));
  EXPECT_FALSE(holds1(cyclic_x1, c.x0));
  EXPECT_EQ(build_standalone(cyclic_x1).first.equations().size(), 3u);
}

TEST(Fragments, MonoidPowerExamples) {
  const auto& c = constants();
  EXPECT_TRUE(holds1(monoid_power(0), power(c.x0, 3)));
  EXPECT_TRUE(holds1(monoid_power(0), Element()));
  EXPECT_FALSE(holds1(monoid_power(0), power(c.x0, -1)));
  const auto x0x1 = compose(c.x0, c.x1);
  EXPECT_TRUE(holds1(monoid_power(1), power(x0x1, 4)));
  EXPECT_FALSE(holds1(monoid_power(1), power(x0x1, -2)));
  EXPECT_FALSE(holds1(monoid_power(1), c.x0));
}

TEST(Fragments, MonoidX1Examples) {
  const auto& c = constants();
  EXPECT_TRUE(holds1(monoid_x1, power(c.x1, 4)));
  EXPECT_TRUE(holds1(monoid_x1, Element()));
  EXPECT_FALSE(holds1(monoid_x1, power(c.x1, -1)));
}

TEST(Fragments, PairSExamples) {
  const auto& c = constants();
  const auto r = power(c.x1, 2);
  EXPECT_TRUE(holds(pair_s, {{"X", r}, {"Y", power(compose(c.x0, r), 3)}}));
  EXPECT_TRUE(holds(pair_s, {{"X", Element()}, {"Y", Element()}}));
  EXPECT_FALSE(holds(pair_s, {{"X", c.x0}, {"Y", Element()}}));
  EXPECT_FALSE(holds(pair_s, {{"X", r}, {"Y", power(compose(c.x0, r), -1)}}));
}

TEST(Fragments, CommutatorSubgroupExamples) {
  const auto& c = constants();
  const auto y = w("x0 x1 x0^-1 x1^-1");
  for (Mode m : {Mode::Paper, Mode::Germ}) {
    EXPECT_TRUE(witnessed(comm(m), {{"X", y}}));
    EXPECT_TRUE(witnessed(comm(m), {{"X", Element()}}));
    EXPECT_FALSE(witnessed(comm(m), {{"X", c.x0}}));
  }
  auto [sys, f] = build_standalone(comm(Mode::Paper));
  Assignment a{{"X", y}, {f.role("Y1").name, invert(c.x0)}, {f.role("Y2").name, invert(c.x1)},
               {f.role("Y3").name, Element()}, {f.role("Y4").name, Element()}};
  EXPECT_TRUE(check_system(sys, a));
}

TEST(Fragments, ExpsumZeroExamples) {
  const auto& c = constants();
  for (Mode m : {Mode::Paper, Mode::Germ}) {
    EXPECT_TRUE(witnessed(expsum_zero(Generator::X0, m), {{"X", power(c.x1, 7)}}));
    EXPECT_TRUE(witnessed(expsum_zero(Generator::X0, m), {{"X", Element()}}));
    EXPECT_FALSE(witnessed(expsum_zero(Generator::X0, m), {{"X", c.x0}}));
    EXPECT_TRUE(witnessed(expsum_zero(Generator::X1, m), {{"X", power(c.x0, -3)}}));
    EXPECT_FALSE(witnessed(expsum_zero(Generator::X1, m), {{"X", c.x1}}));
  }
}

TEST(Fragments, ExpsumEqualExamples) {
  const auto& c = constants();
  const auto comm1 = w("x0 x1 x0^-1 x1^-1");
  for (Mode m : {Mode::Paper, Mode::Germ}) {
    EXPECT_TRUE(witnessed(expsum_equal(Generator::X0, m), {{"X", compose(comm1, power(c.x0, 2))}, {"Y", power(c.x0, 2)}}));
    EXPECT_TRUE(witnessed(expsum_equal(Generator::X1, m), {{"X", c.lphi}, {"Y", c.lphi}}));
    EXPECT_FALSE(witnessed(expsum_equal(Generator::X0, m), {{"X", c.x0}, {"Y", c.x1}}));
  }
}

TEST(Fragments, MixedNonnegExamples) {
  const auto& c = constants();
  EXPECT_TRUE(witnessed(mixed(Mode::Germ), {{"X", power(c.x0, 3)}, {"Y", power(c.x1, 3)}}));
  EXPECT_TRUE(witnessed(mixed(Mode::Germ), {{"X", Element()}, {"Y", Element()}}));
  EXPECT_FALSE(witnessed(mixed(Mode::Germ), {{"X", invert(c.x0)}, {"Y", invert(c.x1)}}));
  auto [sys, f] = build_standalone(mixed(Mode::Germ));
  Assignment a{{"X", power(c.x0, 3)}, {"Y", power(c.x1, 3)}};
  fill_fragment_witness(f, a, {});
  EXPECT_EQ(a.at(f.role("Zp").name), power(compose(c.x0, c.x1), 3));
}

TEST(Fragments, Shapes) {
  for (Mode m : {Mode::Paper, Mode::Germ}) {
    for (const auto& build : std::vector<std::function<Fragment(EquationSystem&)>>{
             cyclic_x0, cyclic_x1, monoid_x1, monoid_power(2), pair_s, comm(m), expsum_zero(Generator::X0, m),
             expsum_zero(Generator::X1, m), expsum_equal(Generator::X0, m), mixed(m)}) {
      auto [sys, f] = build_standalone(build);
      check_fragment_shape(f);
      EXPECT_EQ(f.equations().size(), sys.equations().size());
    }
  }
}

TEST(Fragments, HeaderNamesKindAndMode) {
  auto [sys, f] = build_standalone(monoid_power(1));
  EXPECT_EQ(f.header(), "fragment: monoid_power k=1 mode=germ $X");
  EXPECT_NE(serialize_group_system(sys).find("# fragment: monoid_power k=1 mode=germ $X\n"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Oracles

TEST(Oracle, Examples) {
  const auto& c = constants();
  EXPECT_TRUE(membership_oracle("cyclic_x0", {power(c.x0, -3)}));
  EXPECT_FALSE(membership_oracle("mon_x0", {power(c.x0, -3)}));
  EXPECT_TRUE(membership_oracle("pair_S", {power(c.x1, 2), power(compose(c.x0, power(c.x1, 2)), 3)}));
  EXPECT_TRUE(membership_oracle("mon_x0x1k(2)", {power(compose(c.x0, power(c.x1, 2)), 3)}));
  EXPECT_FALSE(membership_oracle("mon_x0x1k(1)", {power(compose(c.x0, power(c.x1, 2)), 3)}));
  EXPECT_THROW(membership_oracle("nope", {c.x0}), Error);
  EXPECT_THROW(membership_oracle("mon_x0x1k(a)", {c.x0}), Error);
}

TEST(Oracle, QuantifierFreeFragmentsAgreeOnBall) {
  const auto ball = enumerate_ball(5);
  for (const auto& e : ball.elements) {
    const auto& g = e.element;
    EXPECT_EQ(holds1(cyclic_x0, g), membership_oracle("cyclic_x0", {g}));
    EXPECT_EQ(holds1(cyclic_x1, g), membership_oracle("cyclic_x1", {g}));
    EXPECT_EQ(holds1(monoid_x1, g), membership_oracle("mon_x1", {g}));
    EXPECT_EQ(holds1(monoid_power(0), g), membership_oracle("mon_x0", {g}));
    for (int k = 1; k <= 2; ++k) {
      EXPECT_EQ(holds1(monoid_power(k), g), membership_oracle("mon_x0x1k(" + std::to_string(k) + ")", {g}));
    }
  }
}

TEST(Oracle, PairSOnShapedAndRandomPairs) {
  const auto& c = constants();
  for (int p = -2; p <= 4; ++p) {
    for (int q = -2; q <= 4; ++q) {
      const auto r = power(c.x1, p);
      const auto s = power(compose(c.x0, r), q);
      EXPECT_EQ(holds(pair_s, {{"X", r}, {"Y", s}}), p >= 0 && q >= 0);
      EXPECT_EQ(membership_oracle("pair_S", {r, s}), p >= 0 && q >= 0);
    }
  }
  Gen g(31);
  const auto ball = enumerate_ball(4);
  for (int i = 0; i < 300; ++i) {
    const auto& r = g.pick(ball.elements).element;
    const auto& s = g.pick(ball.elements).element;
    EXPECT_EQ(holds(pair_s, {{"X", r}, {"Y", s}}), membership_oracle("pair_S", {r, s}));
  }
}

TEST(SignGadget, HoldsIffExponentNonNegative) {
  const auto& c = constants();
  for (int k = 0; k <= 3; ++k) {
    const auto base = compose(c.x0, power(c.x1, k));
    for (int n = -6; n <= 6; ++n) {
      const auto h = power(base, n);
      EXPECT_EQ(commutes(conjugate(c.x1, h), c.l), n >= 0) << "k=" << k << " n=" << n;
    }
  }
}

// ---------------------------------------------------------------------------
// Fragments with auxiliaries

TEST(Auxiliary, GermWitnessesMatchOracleOnBall) {
  const auto ball = enumerate_ball(4);
  for (const auto& e : ball.elements) {
    const auto& g = e.element;
    EXPECT_EQ(witnessed(comm(Mode::Germ), {{"X", g}}), membership_oracle("comm_subgroup", {g}));
    EXPECT_EQ(witnessed(expsum_zero(Generator::X0, Mode::Germ), {{"X", g}}), membership_oracle("expsum0_x0", {g}));
    EXPECT_EQ(witnessed(expsum_zero(Generator::X1, Mode::Germ), {{"X", g}}), membership_oracle("expsum0_x1", {g}));
  }
}

TEST(Auxiliary, NonMembersHaveNoSmallWitness) {
  // Soundness evidence: for elements outside the set, no auxiliary values
  // from a small ball satisfy the germ fragment.
  const auto& c = constants();
  const std::vector<Element> outside{c.x0, c.x1, w("x0 x1^-1"), w("x1^2 x0")};
  for (const auto& g : outside) {
    auto [sys, f] = build_standalone(comm(Mode::Germ));
    const auto r = brute_force_solve(sys, 3, std::vector<std::string>{f.role("H1").name, f.role("H2").name},
                                     {{"X", g}});
    EXPECT_TRUE(r.solutions.empty());
  }
  auto [sys, f] = build_standalone(expsum_zero(Generator::X0, Mode::Germ));
  for (const auto& g : {c.x0, w("x0 x1"), w("x0^-1 x1^3")}) {
    EXPECT_TRUE(brute_force_solve(sys, 4, std::vector<std::string>{f.role("H").name}, {{"X", g}}).solutions.empty());
  }
}

TEST(Auxiliary, GermWitnessConjugatorIsMinimal) {
  const auto& c = constants();
  const auto y = commutator(c.x1p, c.x0p);  // supported in (0, 1/2)
  auto [sys, f] = build_standalone(comm(Mode::Germ));
  Assignment a{{"X", y}};
  fill_fragment_witness(f, a, {});
  EXPECT_TRUE(check_system(sys, a));
  const auto lo = support(y).front().lo;
  std::int64_t m = 0;
  while (Rational(1, detail::pow2(static_cast<std::uint64_t>(m + 1))) > lo) ++m;
  EXPECT_EQ(a.at(f.role("H1").name), power(c.x0, -m));
  EXPECT_TRUE(a.at(f.role("H2").name).is_identity());
}

TEST(Auxiliary, PaperModeSoundness) {
  Gen g(41);
  for (int i = 0; i < 1000; ++i) {
    CommutatorTuple t;
    for (auto& e : t) e = thompson::testing::letters_to_element(g.letters(6));
    EXPECT_EQ(abelianise(commutator_product(t)), (ExpSums{0, 0}));
  }
}

TEST(Auxiliary, ModesAgreeOnBall) {
  // Paper-mode characterisation of {expsum_x0 = 0}: X = C Z with C in [F,F]
  // and Z in <x1>. Decided by searching Z among powers of x1 and testing C
  // with both endpoint germs trivial.
  const auto& c = constants();
  const auto ball = enumerate_ball(4);
  auto in_comm = [](const Element& e) { return endpoint_slopes(e) == EndpointSlopes{0, 0}; };
  for (const auto& e : ball.elements) {
    const auto& g = e.element;
    bool paper0 = false, paper1 = false;
    for (int j = -6; j <= 6; ++j) {
      paper0 = paper0 || in_comm(compose(g, power(c.x1, -j)));
      paper1 = paper1 || in_comm(compose(g, power(c.x0, -j)));
    }
    const auto counts = thompson::testing::letter_counts(e.word);
    const bool germ0 = endpoint_slopes(g).at_zero == 0;
    EXPECT_EQ(paper0, counts.x0 == 0);
    EXPECT_EQ(germ0, counts.x0 == 0);
    EXPECT_EQ(paper1, counts.x1 == 0);
  }
}

// ---------------------------------------------------------------------------
// decompose_commutators

TEST(Decompose, Examples) {
  const auto& c = constants();
  const auto one = decompose_commutators(commutator(c.x0, c.x1), 1);
  ASSERT_TRUE(one.has_value());
  EXPECT_EQ(commutator_product(*one), commutator(c.x0, c.x1));
  EXPECT_EQ((*one)[0], c.x0);
  EXPECT_EQ((*one)[1], c.x1);
  const auto id = decompose_commutators(Element(), 0);
  ASSERT_TRUE(id.has_value());
  for (const auto& e : *id) EXPECT_TRUE(e.is_identity());
  const auto y = compose(commutator(c.x0, c.x1), commutator(c.x1, power(c.x0, 2)));
  const auto two = decompose_commutators(y, 2);
  ASSERT_TRUE(two.has_value());
  EXPECT_EQ(commutator_product(*two), y);
  EXPECT_THROW(decompose_commutators(c.x0, 1), Error);
}

TEST(Decompose, TableOracleIsVerifiedByCaller) {
  const auto& c = constants();
  const auto y = commutator(c.x0, c.x1);
  const Element id;
  auto bogus = table_oracle({{y, CommutatorTuple{c.x1, c.x0, id, id}}});
  auto [sys, f] = build_standalone(comm(Mode::Paper));
  Assignment a{{"X", y}};
  try {
    fill_fragment_witness(f, a, bogus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecompositionNotFound);
  }
  auto good = table_oracle({{y, CommutatorTuple{c.x0, c.x1, id, id}}});
  Assignment b{{"X", y}};
  fill_fragment_witness(f, b, good);
  EXPECT_TRUE(check_system(sys, b));
}
