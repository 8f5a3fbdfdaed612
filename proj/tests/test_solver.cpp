#include <set>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace thompson;

namespace {

// Every word of length <= r, composed letter by letter, then deduplicated.
std::size_t naive_ball_size(int r) {
  std::set<Element> seen;
  std::vector<std::vector<Letter>> layer{{}};
  seen.insert(Element());
  for (int len = 1; len <= r; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer) {
      for (Generator gen : {Generator::X0, Generator::X1}) {
        for (bool inv : {false, true}) {
          auto v = w;
          v.push_back({gen, inv});
          seen.insert(thompson::testing::letters_to_element(v));
          next.push_back(std::move(v));
        }
      }
    }
    layer = std::move(next);
  }
  return seen.size();
}

std::set<Element> powers_in_ball(const Ball& ball, const Element& g) {
  std::set<Element> out;
  for (const auto& e : ball.elements) {
    for (int n = -8; n <= 8; ++n) {
      if (power(g, n) == e.element) out.insert(e.element);
    }
  }
  return out;
}

std::set<Element> solution_set(const SolveResult& r, const std::string& var) {
  std::set<Element> out;
  for (const auto& s : r.solutions) out.insert(s.at(var));
  return out;
}

}  // namespace

TEST(Ball, SmallRadii) {
  EXPECT_EQ(enumerate_ball(0).elements.size(), 1u);
  const auto b1 = enumerate_ball(1);
  ASSERT_EQ(b1.elements.size(), 5u);
  const auto& c = constants();
  std::set<Element> expect{Element(), c.x0, invert(c.x0), c.x1, invert(c.x1)};
  std::set<Element> got;
  for (const auto& e : b1.elements) got.insert(e.element);
  EXPECT_EQ(got, expect);
  EXPECT_THROW(enumerate_ball(-1), Error);
}

TEST(Ball, MatchesNaiveWordEnumeration) {
  for (int r = 0; r <= 4; ++r) EXPECT_EQ(enumerate_ball(r).elements.size(), naive_ball_size(r)) << r;
}

TEST(Ball, WitnessWordsAreShortestAndCorrect) {
  const auto ball = enumerate_ball(5);
  std::size_t prev = 0;
  for (const auto& e : ball.elements) {
    EXPECT_LE(e.word.size(), 5u);
    EXPECT_GE(e.word.size(), prev);
    prev = e.word.size();
    EXPECT_EQ(thompson::testing::letters_to_element(e.word), e.element);
  }
}

TEST(Ball, ResourceLimit) {
  BallOptions o;
  o.max_elements = 100;
  try {
    enumerate_ball(6, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ResourceLimit);
  }
}

TEST(Solve, CentraliserOfX0) {
  const auto s = parse_group_system("$X x0 = x0 $X\n");
  SolveOptions o;
  o.exhaustive = true;
  const auto r = brute_force_solve(s, 4, std::nullopt, {}, o);
  const auto ball = enumerate_ball(4);
  EXPECT_EQ(solution_set(r, "X"), powers_in_ball(ball, constants().x0));
  EXPECT_EQ(r.solutions.size(), 9u);
  for (const auto& a : r.solutions) EXPECT_TRUE(check_system(s, a));
}

TEST(Solve, SingleEquation) {
  const auto s = parse_group_system("$X = x1\n");
  const auto r = brute_force_solve(s, 2);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].at("X"), constants().x1);
}

TEST(Solve, CyclicX1Fragment) {
  auto [sys, f] = build_standalone([](EquationSystem& s) { return define_cyclic_x1(s, Variable{"X"}); });
  SolveOptions o;
  o.exhaustive = true;
  const auto r = brute_force_solve(sys, 4, std::nullopt, {}, o);
  EXPECT_EQ(solution_set(r, "X"), powers_in_ball(enumerate_ball(4), constants().x1));
}

TEST(Solve, FragmentsMatchOraclesOnBall) {
  const auto ball = enumerate_ball(3);
  SolveOptions o;
  o.exhaustive = true;
  const std::vector<std::pair<std::function<Fragment(EquationSystem&)>, std::string>> cases{
      {[](EquationSystem& s) { return define_cyclic_x0(s, Variable{"X"}); }, "cyclic_x0"},
      {[](EquationSystem& s) { return define_monoid_power(s, Variable{"X"}, 0); }, "mon_x0"},
      {[](EquationSystem& s) { return define_monoid_power(s, Variable{"X"}, 1); }, "mon_x0x1k(1)"},
      {[](EquationSystem& s) { return define_monoid_x1(s, Variable{"X"}); }, "mon_x1"},
  };
  for (const auto& [build, set] : cases) {
    auto [sys, f] = build_standalone(build);
    const auto r = brute_force_solve(sys, 3, std::nullopt, {}, o);
    std::set<Element> expect;
    for (const auto& e : ball.elements) {
      if (membership_oracle(set, {e.element})) expect.insert(e.element);
    }
    EXPECT_EQ(solution_set(r, "X"), expect) << set;
  }
}

TEST(Solve, InvariantUnderGeneratorOrder) {
  const auto s = parse_group_system("$X $Y = $Y $X\n$X x1 = x1 $X\n");
  SolveOptions a, b;
  a.exhaustive = b.exhaustive = true;
  b.ball.generator_order = {Letter{Generator::X1, true}, Letter{Generator::X0, false}, Letter{Generator::X1, false},
                            Letter{Generator::X0, true}};
  const auto ra = brute_force_solve(s, 2, std::nullopt, {}, a);
  const auto rb = brute_force_solve(s, 2, std::nullopt, {}, b);
  std::set<std::pair<Element, Element>> sa, sb;
  for (const auto& x : ra.solutions) sa.emplace(x.at("X"), x.at("Y"));
  for (const auto& x : rb.solutions) sb.emplace(x.at("X"), x.at("Y"));
  EXPECT_EQ(sa, sb);
  EXPECT_FALSE(sa.empty());
}

TEST(Solve, RestrictedVariablesAndFixedValues) {
  const auto s = parse_group_system("$X $Y^-1 = 1\n");
  const auto r = brute_force_solve(s, 3, std::vector<std::string>{"X"}, {{"Y", power(constants().x0, 2)}});
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].at("X"), power(constants().x0, 2));
  EXPECT_THROW(brute_force_solve(s, 3, std::vector<std::string>{"X"}), Error);
  EXPECT_THROW(brute_force_solve(s, 3, std::vector<std::string>{"Z"}), Error);
}

TEST(Solve, FirstSolutionIsDeterministic) {
  const auto s = parse_group_system("$X x0 = x0 $X\n");
  const auto r = brute_force_solve(s, 3);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_TRUE(r.solutions[0].at("X").is_identity());
}

TEST(Solve, CheckLimit) {
  const auto s = parse_group_system("$X $Y = $Y $X\n");
  SolveOptions o;
  o.exhaustive = true;
  o.max_checks = 50;
  EXPECT_THROW(brute_force_solve(s, 3, std::nullopt, {}, o), Error);
}
