#include <gtest/gtest.h>

#include <cmath>

#include "monoshift/degree.hpp"
#include "monoshift/followers.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace monoshift;

namespace {
const double kRhoExample = 2.147899035704787;
const double kPhi = (1 + std::sqrt(5.0)) / 2;

double ln_rho(const Presentation& p) { return log_prime(spectral_radius(to_int_matrix(p.matrix()))); }

// Max of ln' rho over every simple subsystem, radii from Eigen.
double degree_bruteforce(const LagSnre& s) {
  double best = 0;
  for (const auto& [sub, m] : enumerate_simple_subsystems(s)) best = std::max(best, log_prime(oracle::spectral_radius_eigen(m.entries)));
  return best;
}
}  // namespace

TEST(Degree, ExampleFullShift) {
  const auto d = degree(corpus::example21(), SftRules::full_shift(2, 3));
  EXPECT_NEAR(d.degree, std::log(kRhoExample), 1e-9);
  EXPECT_NEAR(d.spectral_radius, kRhoExample, 1e-9);
  EXPECT_TRUE(d.full_degree);
  EXPECT_EQ(d.essential, (std::vector<Symbol>{0, 1}));
  EXPECT_EQ(d.lags, 3u);
  EXPECT_EQ(d.subsystem_count, 144);
}

TEST(Degree, FibonacciGoldenMean) {
  const auto d = degree(corpus::fibonacci(), SftRules::hom_shift(corpus::golden_mean(), 2));
  EXPECT_NEAR(d.degree, std::log(kPhi), 1e-9);
}

TEST(Degree, FibonacciWithInessentialSymbol) {
  const auto r = SftRules::hom_shift({{1, 1}, {0, 1}}, 2);
  const auto d = degree(corpus::fibonacci(), r);
  EXPECT_EQ(d.essential, std::vector<Symbol>{0});
  EXPECT_NEAR(d.degree, std::log(kPhi), 1e-9);
}

TEST(Degree, SingleSymbolIsZero) {
  for (const auto& p : corpus::ra_corpus(5)) {
    const auto d = degree(p, SftRules::full_shift(1, p.generators()));
    EXPECT_EQ(d.degree, 0.0);
    EXPECT_TRUE(d.essential.empty());
  }
}

TEST(Degree, InfiniteRepresentationRejected) {
  EXPECT_THROW(degree(Presentation({{0, 1}, {1, 0}}), SftRules::full_shift(2, 2)), InfiniteRepresentation);
}

TEST(Degree, FullShiftEqualsLogRadius) {
  for (const auto& p : corpus::ra_corpus())
    for (std::size_t k = 2; k <= 3; ++k) {
      const auto d = degree(p, SftRules::full_shift(k, p.generators()));
      EXPECT_NEAR(d.degree, ln_rho(p), 1e-9);
    }
}

TEST(Snre, StateFactors) {
  const auto s = build_state_snre(to_follower_automaton(corpus::fibonacci()), SftRules::hom_shift(corpus::golden_mean(), 2));
  ASSERT_EQ(s.factors[0][0].size(), 2u);
  for (const auto& f : s.factors[0][0]) EXPECT_EQ(f.coefficients, (std::vector<std::uint8_t>{1, 1}));
  for (const auto& f : s.factors[0][1]) EXPECT_EQ(f.coefficients, (std::vector<std::uint8_t>{1, 0}));
}

TEST(Snre, LagFactorsExample) {
  const auto p = corpus::example21();
  const auto r = SftRules::full_shift(2, 3);
  const auto snre = build_snre(p, r, essential_symbols(p, r));
  ASSERT_TRUE(snre.lag.has_value());
  for (Symbol i = 0; i < 2; ++i) {
    std::vector<std::size_t> per_lag(4, 0);
    for (const auto& f : snre.lag->factors[i]) {
      ++per_lag[f.lag];
      EXPECT_EQ(f.coefficients, (std::vector<std::uint8_t>{1, 1}));
    }
    EXPECT_EQ(per_lag, (std::vector<std::size_t>{0, 1, 2, 1}));
    // total degree at lag m is xi_m
    for (const auto& mono : snre.lag->monomials[i])
      for (std::size_t m = 1; m <= 3; ++m)
        EXPECT_EQ(snre.lag->exponent(mono, m, 0) + snre.lag->exponent(mono, m, 1), snre.lag->xi(m));
  }
  EXPECT_FALSE(build_snre(Presentation({{0, 1}, {1, 0}}), SftRules::full_shift(2, 2),
                          essential_symbols(Presentation({{0, 1}, {1, 0}}), SftRules::full_shift(2, 2)))
                   .lag.has_value());
}

TEST(Subsystems, ExampleRowSumsAndEigenIdentity) {
  const auto p = corpus::example21();
  const auto r = SftRules::full_shift(2, 3);
  const auto lag = build_lag_snre(p, r, essential_symbols(p, r));
  const auto subs = enumerate_simple_subsystems(lag);
  EXPECT_EQ(subs.size(), 144u);
  std::set<IntMatrix> distinct;
  for (const auto& [sub, m] : subs) {
    distinct.insert(m.entries);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t lagm = 1; lagm <= 3; ++lagm)
        EXPECT_EQ(m.entries[a][(lagm - 1) * 2] + m.entries[a][(lagm - 1) * 2 + 1], static_cast<std::int64_t>(lag.xi(lagm)));
    // v = (rho^2, rho, 1) (x) 1_2
    std::vector<double> v{kRhoExample * kRhoExample, kRhoExample * kRhoExample, kRhoExample, kRhoExample, 1, 1};
    for (std::size_t i = 0; i < 6; ++i) {
      double mv = 0;
      for (std::size_t j = 0; j < 6; ++j) mv += m.entries[i][j] * v[j];
      EXPECT_NEAR(mv, kRhoExample * v[i], 1e-6 * v[0]);
    }
    EXPECT_NEAR(spectral_radius(m.entries), spectral_radius_charpoly(m.entries), 1e-9);
  }
  EXPECT_EQ(distinct.size(), subs.size());
}

TEST(Subsystems, SingleEssentialSymbol) {
  const auto p = corpus::example21();
  const auto r = SftRules::hom_shift({{1, 1}, {0, 1}}, 3);
  const auto lag = build_lag_snre(p, r, essential_symbols(p, r));
  for (const auto& [sub, m] : enumerate_simple_subsystems(lag)) {
    EXPECT_EQ(m.dim(), 3u);
    for (std::size_t lagm = 1; lagm <= 3; ++lagm) EXPECT_LE(m.entries[0][lagm - 1], static_cast<std::int64_t>(lag.xi(lagm)));
  }
}

TEST(Subsystems, Cap) {
  const auto p = corpus::example21();
  const auto r = SftRules::full_shift(3, 3);
  const auto lag = build_lag_snre(p, r, essential_symbols(p, r));
  Limits tight;
  tight.matrices = 10;
  EXPECT_THROW(enumerate_simple_subsystems(lag, tight), ResourceLimit);
}

TEST(Degree, MatchesSubsystemBruteForce) {
  auto g = corpus::rng(59);
  int checked = 0;
  for (int t = 0; t < 300 && checked < 120; ++t) {
    const auto p = corpus::random_finite(g, 2 + t % 3);
    const auto r = corpus::random_rules(g, 2 + t % 2, p.generators(), 0.55);
    const auto lag = build_lag_snre(p, r, essential_symbols(p, r));
    const auto lf = make_lag_family(lag);
    if (subsystem_count(lf) > 3000) continue;
    ++checked;
    const auto d = degree(p, r);
    EXPECT_NEAR(d.degree, degree_bruteforce(lag), 1e-7);
    // the witness attains the degree
    EXPECT_NEAR(log_prime(spectral_radius(d.witness_matrix.entries)), d.degree, 1e-9);
  }
  EXPECT_GT(checked, 60);
}

TEST(Degree, NeverExceedsLogRadius) {
  auto g = corpus::rng(61);
  for (int t = 0; t < 150; ++t) {
    const auto p = corpus::random_finite(g, 1 + t % 5);
    const auto r = corpus::random_rules(g, 1 + t % 4, p.generators());
    EXPECT_LE(degree(p, r).degree, ln_rho(p) + 1e-9);
  }
}

TEST(Degree, DeterministicWitness) {
  const auto p = corpus::example21();
  const auto r = SftRules::full_shift(2, 3);
  const auto a = degree(p, r), b = degree(p, r);
  EXPECT_EQ(a.witness, b.witness);
  EXPECT_EQ(a.witness_matrix.entries, b.witness_matrix.entries);
}

TEST(FullDegree, Examples) {
  const auto p = corpus::example21();
  EXPECT_TRUE(full_degree_check(p, SftRules::full_shift(2, 3)));
  EXPECT_TRUE(full_degree_check(p, SftRules::full_shift(3, 3)));
  EXPECT_FALSE(full_degree_check(p, SftRules::full_shift(1, 3)));
  SftRules r = SftRules::hom_shift({{1, 1}, {0, 1}}, 3);
  r.rules[2] = {{0, 1}, {0, 1}};  // across s3 symbol 1 must turn into the inessential 2
  EXPECT_FALSE(full_degree_check(p, r));
  EXPECT_EQ(degree(p, r).degree, 0.0);
}

TEST(FullDegree, EquivalentToDegreeGap) {
  auto g = corpus::rng(67);
  for (int t = 0; t < 300; ++t) {
    const auto p = corpus::random_finite(g, 1 + t % 5);
    const auto r = corpus::random_rules(g, 2 + t % 3, p.generators(), 0.6);
    const auto d = degree(p, r);
    EXPECT_EQ(full_degree_check(p, r), std::abs(d.degree - ln_rho(p)) <= 1e-9) << t;
    EXPECT_EQ(d.full_degree, full_degree_check(p, r));
  }
}

TEST(Degree, DeadSymbolsAreExcluded) {
  // symbol 2 has no successor across s3, and every element has an s3 child
  const auto p = corpus::example21();
  SftRules r = SftRules::full_shift(2, 3);
  r.rules[2] = {{1, 1}, {0, 0}};
  const auto ess = essential_symbols(p, r);
  EXPECT_FALSE(ess.live[ess.initial][1]);
  const auto d = degree(p, r);
  EXPECT_EQ(d.essential, std::vector<Symbol>{0});
  EXPECT_NEAR(d.degree, degree_on_automaton(to_follower_automaton(p), r).degree, 1e-9);
  EXPECT_NEAR(d.degree, std::log(kRhoExample), 1e-9);
}
