#include "ergotor/fourier.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "ergotor/errors.hpp"
#include "gtest/gtest.h"

namespace ergotor {
namespace {

using namespace std::complex_literals;

const MultiIndex kZero{};
const MultiIndex e1 = MultiIndex::unit(1);
const MultiIndex e2 = MultiIndex::unit(2);

FourierSeries geometric_units(std::size_t count) {
  std::vector<FourierSeries::Term> terms;
  for (std::size_t n = 1; n <= count; ++n) {
    terms.emplace_back(MultiIndex::unit(n), std::ldexp(1.0, -static_cast<int>(n)));
  }
  return FourierSeries(terms);
}

FourierSeries random_series(std::mt19937_64& rng, std::size_t d, std::size_t terms) {
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<FourierSeries::Term> out;
  for (std::size_t k = 0; k < terms; ++k) {
    std::vector<std::int64_t> m(d);
    for (auto& v : m) v = entry(rng);
    out.emplace_back(MultiIndex::dense(m), Complex{coef(rng), coef(rng)});
  }
  return FourierSeries(out);
}

TorusPoint random_point(std::mt19937_64& rng, std::size_t d) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x(d);
  for (auto& c : x) c = unif(rng);
  return TorusPoint(x);
}

TEST(MultiIndex, Basics) {
  MultiIndex m{{3, -1}, {1, 2}, {2, 0}};
  EXPECT_EQ(m.support(), 3u);
  EXPECT_EQ(m[1], 2);
  EXPECT_EQ(m[2], 0);
  EXPECT_EQ(m[3], -1);
  EXPECT_EQ(m.entries().size(), 2u);
  EXPECT_EQ(m.to_string(), "(1:2,3:-1)");
  EXPECT_EQ(kZero.support(), 0u);
  EXPECT_TRUE((e1 + (-e1)).is_zero());
  EXPECT_THROW(MultiIndex({{0, 1}}), InvalidInput);
  EXPECT_THROW(MultiIndex({{1, 1}, {1, 2}}), InvalidInput);
}

TEST(Evaluate, Examples) {
  FourierSeries constant{{kZero, 3.0}};
  EXPECT_EQ(evaluate(constant, TorusPoint({0.37})), Complex(3.0));

  FourierSeries harmonic{{e1, 1.0}};
  auto v = evaluate(harmonic, TorusPoint({0.25, 0.9}));
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), 1.0, 1e-15);

  FourierSeries pair{{e1, 1.0}, {-e1, 1.0}};
  auto w = evaluate(pair, TorusPoint({0.5}));
  EXPECT_NEAR(w.real(), -2.0, 1e-15);
  EXPECT_NEAR(w.imag(), 0.0, 1e-15);

  EXPECT_THROW(evaluate(FourierSeries{{e2, 1.0}}, TorusPoint({0.5})), InvalidInput);
}

TEST(FourierSeries, DropsNegligibleAndMergesDuplicates) {
  FourierSeries f{{e1, 1.0}, {e1, 2.0}, {e2, 1e-301}};
  EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(f.coefficient(e1), Complex(3.0));
  FourierSeries g{{e1, 1.0}, {e1, -1.0}};
  EXPECT_TRUE(g.empty());
}

TEST(PartialSum, Examples) {
  FourierSeries f{{e1, 1.0}, {MultiIndex::unit(3), 2.0}, {MultiIndex{{1, 1}, {3, 1}}, 0.5}};
  auto f2 = partial_sum(f, 2);
  EXPECT_EQ(f2, (FourierSeries{{e1, 1.0}}));
  EXPECT_EQ(partial_sum(f, 3), f);
  EXPECT_EQ(partial_sum(f, 100), f);
  FourierSeries c{{kZero, 4.0 + 1i}};
  EXPECT_EQ(partial_sum(c, 1), c);
}

TEST(PartialSum, TruncationLattice) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_series(rng, 5, 12);
    for (std::size_t r = 1; r <= 6; ++r) {
      for (std::size_t s = 1; s <= 6; ++s) {
        EXPECT_EQ(partial_sum(partial_sum(f, r), s), partial_sum(f, std::min(r, s)));
      }
    }
  }
}

TEST(L2Tail, Examples) {
  FourierSeries f{{e1, 1.0}, {e2, 0.5}};
  EXPECT_DOUBLE_EQ(l2_tail(f, 1), 0.25);
  EXPECT_EQ(l2_tail(f, 2), 0.0);
  EXPECT_DOUBLE_EQ(l2_tail(f, 0), 1.25);

  FourierSeries with_mean{{MultiIndex{}, 2.0}, {e1, 1.0}};
  EXPECT_DOUBLE_EQ(l2_tail(with_mean, 0), 1.0);
  EXPECT_DOUBLE_EQ(l2_norm_squared(with_mean), 5.0);

  // independent sum: 4^-4 + ... + 4^-10 = 0.005208015441894531
  double oracle = 0.0;
  for (int n = 4; n <= 10; ++n) oracle += std::pow(4.0, -n);
  EXPECT_NEAR(oracle, 0.005208015441894531, 1e-18);
  EXPECT_NEAR(l2_tail(geometric_units(10), 3), oracle, 1e-18);
}

TEST(L2Tail, DecreasingInRank) {
  std::mt19937_64 rng(11);
  auto f = random_series(rng, 6, 30);
  for (std::size_t r = 1; r < 8; ++r) EXPECT_LE(l2_tail(f, r + 1), l2_tail(f, r));
  EXPECT_EQ(l2_tail(f, f.max_support()), 0.0);
}

TEST(JInfinity, FiniteSeriesAreMembers) {
  FourierSeries f{{e1, 3.0 + 4i}, {e2, -1.0}, {kZero, 0.5}};
  auto r1 = is_j_infinity(f, 1);
  EXPECT_TRUE(r1.member);
  EXPECT_DOUBLE_EQ(r1.l1_mass, 5.5);
  EXPECT_DOUBLE_EQ(is_j_infinity(f, 2).l1_mass, 6.5);
  EXPECT_THROW(is_j_infinity(f, 0), InvalidInput);
}

TEST(JInfinity, GeometricRuleConverges) {
  CoefficientRule rule;
  rule.coefficient = [](const MultiIndex& m) -> Complex {
    double e = 0;
    for (const auto& [coord, v] : m.entries()) e += static_cast<double>(std::abs(v));
    return std::pow(2.0, -e);
  };
  // mass outside [-B, B]^r is 3^r - (3 - 2^{1-B})^r
  rule.l1_tail = [](std::size_t r, std::int64_t box) -> std::optional<TailBound> {
    const double inner = 3.0 - std::pow(2.0, 1.0 - static_cast<double>(box));
    return TailBound{std::pow(3.0, r) - std::pow(inner, r), false};
  };
  auto report = is_j_infinity(rule, 2);
  EXPECT_TRUE(report.member);
  EXPECT_NEAR(report.l1_mass, 9.0, 1e-10);
  EXPECT_LE(report.tail_bound, 1e-12);
}

TEST(JInfinity, HarmonicRuleDiverges) {
  CoefficientRule rule;
  rule.coefficient = [](const MultiIndex& m) -> Complex {
    return m.is_zero() ? 0.0 : 1.0 / static_cast<double>(std::abs(m[1]));
  };
  rule.l1_tail = [](std::size_t, std::int64_t) -> std::optional<TailBound> {
    return TailBound{INFINITY, true};
  };
  auto report = is_j_infinity(rule, 1);
  EXPECT_FALSE(report.member);
  EXPECT_TRUE(std::isinf(report.l1_mass));
}

TEST(JInfinity, RuleWithoutTailIsIndeterminate) {
  CoefficientRule rule;
  rule.coefficient = [](const MultiIndex&) -> Complex { return 1.0; };
  EXPECT_THROW(is_j_infinity(rule, 1), Indeterminate);
  rule.l1_tail = [](std::size_t, std::int64_t) -> std::optional<TailBound> {
    return std::nullopt;
  };
  EXPECT_THROW(is_j_infinity(rule, 1), Indeterminate);
}

// Independent check: window sums straight from the coefficient map.
double brute_window(const FourierSeries& f, std::size_t lo, std::size_t hi) {
  double sum = 0.0;
  for (const auto& [m, a] : f.terms()) {
    if (m.support() > lo && m.support() <= hi) sum += std::norm(a);
  }
  return sum;
}

// Lexicographically first valid rank tuple, by plain enumeration.
std::vector<std::size_t> brute_schedule(const FourierSeries& f, std::size_t K) {
  const std::size_t top = f.max_support() + K;
  std::vector<std::size_t> ranks(K);
  std::vector<std::size_t> found;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t k,
                                                              std::size_t from) {
    if (k == K) return true;
    for (std::size_t r = from; r <= top; ++r) {
      if (k > 0 && brute_window(f, ranks[k - 1], r) >
                       std::ldexp(1.0, -2 * static_cast<int>(k + 1))) {
        continue;
      }
      ranks[k] = r;
      if (search(k + 1, r + 1)) return true;
    }
    return false;
  };
  if (search(0, 1)) found = ranks;
  return found;
}

TEST(SelectRk, GeometricUnits) {
  auto f = geometric_units(12);
  auto schedule = select_rk(f, 4);
  EXPECT_EQ(schedule.ranks, (std::vector<std::size_t>{1, 2, 3, 4}));
  ASSERT_EQ(schedule.tail_bounds.size(), 3u);
  for (std::size_t k = 2; k <= 4; ++k) {
    const double brute = brute_window(f, schedule.ranks[k - 2], schedule.ranks[k - 1]);
    EXPECT_EQ(brute, std::pow(4.0, -static_cast<double>(k)));
    EXPECT_EQ(schedule.tail_bounds[k - 2], brute);
    EXPECT_LE(brute, std::ldexp(1.0, -2 * static_cast<int>(k)));
  }
  EXPECT_TRUE(schedule.satisfies_decay());
}

TEST(SelectRk, SaturatedSupport) {
  FourierSeries f{{e1, 2.0}, {MultiIndex::unit(1, -3), 1.0}};
  auto s = select_rk(f, 3);
  EXPECT_EQ(s.ranks, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(s.tail_bounds, (std::vector<double>{0.0, 0.0}));

  auto c = select_rk(FourierSeries{{kZero, 5.0}}, 2);
  EXPECT_EQ(c.ranks, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(c.tail_bounds, (std::vector<double>{0.0}));
  EXPECT_THROW(select_rk(f, 1), InvalidInput);
}

TEST(SelectRk, SkipsRanksWhenWindowsAreHeavy) {
  // Heavy mass on coordinates 2 and 3 forces r_1 past them.
  FourierSeries f{{e1, 1.0}, {e2, 1.0}, {MultiIndex::unit(3), 1.0},
                  {MultiIndex::unit(4), 0.2}, {MultiIndex::unit(5), 0.01}};
  auto s = select_rk(f, 3);
  EXPECT_TRUE(s.satisfies_decay());
  // windows 0.04 <= 1/16 and 1e-4 <= 1/64
  EXPECT_EQ(s.ranks, (std::vector<std::size_t>{3, 4, 5}));
}

TEST(SelectRk, RandomSchedulesSatisfyDecay) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto f = random_series(rng, 8, 25);
    for (std::size_t K : {2, 3, 5}) {
      auto s = select_rk(f, K);
      ASSERT_EQ(s.ranks.size(), K);
      for (std::size_t k = 2; k <= K; ++k) {
        EXPECT_LE(brute_window(f, s.ranks[k - 2], s.ranks[k - 1]),
                  std::ldexp(1.0, -2 * static_cast<int>(k)));
      }
      EXPECT_EQ(s.ranks, brute_schedule(f, K));
    }
  }
}

TEST(Majorant, Examples) {
  FourierSeries within{{e1, 1.0}, {kZero, 0.5}};
  auto s = RkSchedule::from_ranks(within, {1, 2, 3});
  TorusPoint theta({0.3, 0.6, 0.1});
  EXPECT_NEAR(majorant_g(within, s, theta), std::abs(evaluate(within, theta)), 1e-15);

  FourierSeries c{{kZero, 2.0}};
  EXPECT_EQ(majorant_g(c, select_rk(c, 3), theta), 2.0);

  FourierSeries two{{e1, 1.0}, {e2, 1.0}};
  auto s12 = RkSchedule::from_ranks(two, {1, 2});
  EXPECT_NEAR(majorant_g(two, s12, TorusPoint({0.0, 0.0})), 2.0, 1e-15);
  EXPECT_THROW(majorant_g(two, s12, TorusPoint({0.0})), InvalidInput);
}

TEST(Majorant, DominatesTruncation) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto f = random_series(rng, 6, 20);
    auto s = select_rk(f, 3);
    for (int k = 0; k < 20; ++k) {
      auto theta = random_point(rng, 9);
      EXPECT_GE(majorant_g(f, s, theta) + 1e-12,
                std::abs(evaluate(partial_sum(f, s.ranks.back()), theta)));
    }
  }
}

TEST(SpaceAverage, Examples) {
  EXPECT_EQ(space_average(FourierSeries{{kZero, 3.0}, {e1, 7.0}}), Complex(3.0));
  EXPECT_EQ(space_average(FourierSeries{{e1, 7.0}}), Complex(0.0));
  EXPECT_EQ(space_average(FourierSeries{{kZero, 1.0 + 2i}}), Complex(1.0, 2.0));
}

TEST(Permutation, EvaluateInvariant) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    auto f = random_series(rng, 5, 10);
    std::vector<std::size_t> images{0, 1, 2, 3, 4};
    std::shuffle(images.begin(), images.end(), rng);
    FinitePermutation sigma(images);
    auto theta = random_point(rng, 5);
    auto lhs = evaluate(apply_permutation(sigma, f), apply_permutation(sigma, theta));
    EXPECT_LT(std::abs(lhs - evaluate(f, theta)), 1e-12);
  }
}

TEST(SeriesJson, Format) {
  FourierSeries f{{MultiIndex{{1, 2}, {3, -1}}, 0.5 - 0.25i}};
  EXPECT_EQ(series_to_json(f),
            R"({"terms":[{"im":-0.25,"index":{"1":2,"3":-1},"re":0.5}]})");
  auto g = series_from_json(R"({"terms":[{"index":{},"re":1.5}]})");
  EXPECT_EQ(g, (FourierSeries{{kZero, 1.5}}));
}

TEST(SeriesJson, RoundTripIsLossless) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> wide(-1e6, 1e6);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_series(rng, 7, 15);
    f = f + FourierSeries{{MultiIndex::unit(12, 9), Complex{wide(rng), 1.0 / 3.0}}};
    EXPECT_EQ(series_from_json(series_to_json(f)), f);
  }
}

TEST(SeriesJson, Rejects) {
  EXPECT_THROW(series_from_json("{"), InvalidInput);
  EXPECT_THROW(series_from_json(R"({"terms":{}})"), InvalidInput);
  EXPECT_THROW(series_from_json(R"({"terms":[{"index":{"0":1}}]})"), InvalidInput);
  EXPECT_THROW(series_from_json(R"({"terms":[{"index":{"x":1}}]})"), InvalidInput);
  EXPECT_THROW(series_from_json(R"({"terms":[{"index":{"1":0.5}}]})"), InvalidInput);
  EXPECT_THROW(series_from_json(R"({"terms":[{"index":{"1":1},"re":"a"}]})"),
               InvalidInput);
}

}  // namespace
}  // namespace ergotor
