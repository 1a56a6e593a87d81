#include <gtest/gtest.h>

#include <cmath>

#include "monoshift/followers.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace monoshift;

TEST(EvenMonoid, Steps) {
  const auto a = even_monoid();
  a.validate();
  EXPECT_FALSE(a.step[2][1].has_value());
  EXPECT_TRUE(a.step[0][0] && a.step[0][1]);
  std::size_t q = a.initial;
  for (Generator s : {1, 0, 0}) q = *a.step[q][s];
  EXPECT_EQ(a.names[q], "qE");
}

TEST(EvenMonoid, StateAdjacencyRadius) {
  const auto b = state_adjacency(even_monoid());
  EXPECT_NEAR(spectral_radius(b), (1 + std::sqrt(5.0)) / 2, 1e-12);
  const auto f = char_poly_trace_recursion(b);
  // (x - 1)(x^2 - x - 1) = x^3 - 2x^2 + 1
  EXPECT_EQ(f.coeffs, (std::vector<BigInt>{1, -2, 0, 1}));
}

TEST(EvenMonoid, DegreeFullShift) {
  const auto d = degree_on_automaton(even_monoid(), SftRules::full_shift(2, 2));
  EXPECT_NEAR(d.degree, std::log((1 + std::sqrt(5.0)) / 2), 1e-9);
  EXPECT_TRUE(d.full_degree);
}

TEST(FollowerClasses, Counts) {
  EXPECT_EQ(follower_classes(corpus::example21()).states(), 3u);
  EXPECT_EQ(follower_classes(Presentation::free(4)).states(), 1u);
  EXPECT_EQ(follower_classes(corpus::fibonacci()).states(), 2u);
  EXPECT_EQ(minimize(even_monoid()).states(), 3u);
}

TEST(FollowerClasses, QuotientPreservesWalks) {
  auto g = corpus::rng(73);
  for (int t = 0; t < 40; ++t) {
    const auto p = corpus::random_any(g, 1 + t % 4);
    const auto a = build_ball(to_follower_automaton(p), 4), b = build_ball(follower_classes(p), 4);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t v = 0; v < a.size(); ++v) EXPECT_EQ(a.nodes[v].symbols, b.nodes[v].symbols);
  }
}

TEST(DegreeOnAutomaton, OneStateTotal) {
  FollowerAutomaton a;
  a.generators = 3;
  a.names = {"q"};
  a.step = {{0, 0, 0}};
  EXPECT_EQ(degree_on_automaton(a, SftRules::full_shift(1, 3)).degree, 0.0);
  EXPECT_NEAR(degree_on_automaton(a, SftRules::full_shift(2, 3)).degree, std::log(3.0), 1e-9);
}

TEST(DegreeOnAutomaton, FullShiftMatchesStateAdjacency) {
  auto g = corpus::rng(79);
  for (int t = 0; t < 60; ++t) {
    const auto p = corpus::random_any(g, 1 + t % 4);
    const auto aut = to_follower_automaton(p);
    const auto d = degree_on_automaton(aut, SftRules::full_shift(2, p.generators()));
    EXPECT_NEAR(d.degree, log_prime(spectral_radius(state_adjacency(aut))), 1e-9);
  }
}

TEST(DegreeOnAutomaton, MatchesLagForm) {
  auto g = corpus::rng(83);
  for (const auto& p : corpus::ra_corpus()) {
    for (int t = 0; t < 6; ++t) {
      const auto r = corpus::random_rules(g, 1 + t % 3, p.generators(), 0.6);
      const auto a = degree(p, r), b = degree_on_automaton(to_follower_automaton(p), r);
      EXPECT_NEAR(a.degree, b.degree, 1e-9);
      EXPECT_EQ(a.essential, b.essential);
      // minimizing the automaton does not change the answer
      EXPECT_NEAR(b.degree, degree_on_automaton(follower_classes(p), r).degree, 1e-9);
    }
  }
}

TEST(DegreeOnAutomaton, InvariantUnderMinimizationWithRandomRules) {
  auto g = corpus::rng(89);
  for (int t = 0; t < 40; ++t) {
    const auto r = corpus::random_rules(g, 2 + t % 2, 2);
    EXPECT_NEAR(degree_on_automaton(even_monoid(), r).degree, degree_on_automaton(minimize(even_monoid()), r).degree,
                1e-12);
  }
}
