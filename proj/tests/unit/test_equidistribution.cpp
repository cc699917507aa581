#include "ergotor/equidistribution.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ergotor/errors.hpp"
#include "gtest/gtest.h"

namespace ergotor {
namespace {

using namespace std::complex_literals;
using std::numbers::pi;

const MultiIndex e1 = MultiIndex::unit(1);
const MultiIndex e2 = MultiIndex::unit(2);

FrequencySequence one_sqrt2() {
  return FrequencySequence::explicit_values({1.0, std::sqrt(2.0)});
}

// Time in (0, T) with {u + t lambda} in [a, b], from the cumulative count of
// [a, b] along the unwrapped line: F(x) = floor(x)(b - a) + clamp({x} - a).
double one_coordinate_occupation(double u, double lambda, double a, double b, double T) {
  const auto F = [&](double x) {
    const double whole = std::floor(x);
    return whole * (b - a) + std::clamp(x - whole - a, 0.0, b - a);
  };
  return (F(u + T * lambda) - F(u)) / lambda;
}

TEST(JordanRegion, Construction) {
  auto box = JordanRegion::box({{0.0, 0.5}, {0.25, 1.0}});
  EXPECT_EQ(box.dim(), 2u);
  EXPECT_DOUBLE_EQ(box.volume(), 0.375);
  EXPECT_THROW(JordanRegion::box({{0.6, 0.5}}), InvalidInput);
  EXPECT_THROW(JordanRegion::box({{-0.1, 0.5}}), InvalidInput);
  EXPECT_THROW(JordanRegion::box({}), InvalidInput);

  auto ball = JordanRegion::ball({0.1, 0.5}, 0.2);
  EXPECT_EQ(ball.kind(), JordanRegion::Kind::kBallCylinder);
  EXPECT_NEAR(ball.volume(), 0.3 * 0.4, 1e-15);
  EXPECT_THROW(JordanRegion::ball({0.5}, 0.0), InvalidInput);
  EXPECT_THROW(JordanRegion::ball({1.5}, 0.1), InvalidInput);
}

TEST(Occupation, IntegerPeriods) {
  auto r = occupation_measure(TorusPoint::zero(1), FrequencySequence::explicit_values({1.0}),
                              JordanRegion::box({{0.0, 0.5}}), 10.0);
  EXPECT_NEAR(r.measure, 5.0, 1e-12);
  EXPECT_NEAR(r.ratio, 0.5, 1e-13);
}

TEST(Occupation, FullCubeIsExact) {
  auto lambda = FrequencySequence::generate(FrequencyFamily::kSqrtSquarefree, 3);
  auto r = occupation_measure(TorusPoint({0.3, 0.2, 0.9}), lambda,
                              JordanRegion::full_cube(3), 123.456);
  EXPECT_EQ(r.measure, 123.456);
  EXPECT_EQ(r.ratio, 1.0);
}

TEST(Occupation, KroneckerRatio) {
  auto region = JordanRegion::box({{0.0, 0.5}, {0.0, 0.5}});
  auto r = occupation_measure(TorusPoint::zero(2), one_sqrt2(), region, 1e4);
  EXPECT_NEAR(r.ratio, 0.25, 0.02);
  EXPECT_GE(r.measure, 0.0);
  EXPECT_LE(r.measure, 1e4);
  EXPECT_GT(r.event_count, 0u);
}

TEST(Occupation, MatchesOneCoordinateClosedForm) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    double a = unif(rng), b = unif(rng);
    if (a > b) std::swap(a, b);
    const double u = unif(rng);
    const double lambda = 0.3 + 3.0 * unif(rng);
    const double T = 1.0 + 2000.0 * unif(rng);
    auto r = occupation_measure(TorusPoint({u}), FrequencySequence::explicit_values({lambda}),
                                JordanRegion::box({{a, b}}), T);
    EXPECT_NEAR(r.measure, one_coordinate_occupation(u, lambda, a, b, T), 1e-9 * T);
  }
}

TEST(Occupation, ProductOfIndependentCoordinatesIsNotAssumed) {
  // 2-d occupation agrees with brute-force fine sampling on a short horizon.
  auto lambda = one_sqrt2();
  auto region = JordanRegion::box({{0.2, 0.7}, {0.1, 0.4}});
  TorusPoint u({0.35, 0.8});
  const double T = 20.0;
  auto r = occupation_measure(u, lambda, region, T);
  const std::size_t samples = 2'000'000;
  std::size_t inside = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * T / samples;
    if (region.contains(flow(u, t, lambda).coords())) ++inside;
  }
  EXPECT_NEAR(r.ratio, static_cast<double>(inside) / samples, 1e-5);
}

TEST(Occupation, Errors) {
  auto lambda = one_sqrt2();
  auto region = JordanRegion::box({{0.0, 0.5}, {0.0, 0.5}});
  EXPECT_THROW(occupation_measure(TorusPoint::zero(1), lambda, region, 10.0), InvalidInput);
  EXPECT_THROW(occupation_measure(TorusPoint::zero(2), lambda, region, -1.0), InvalidInput);
  SweepOptions tight;
  tight.max_events = 100;
  EXPECT_THROW(occupation_measure(TorusPoint::zero(2), lambda, region, 1e3, tight), BudgetError);
}

TEST(Occupation, KroneckerConvergenceLadder) {
  auto region = JordanRegion::box({{0.0, 0.5}, {0.0, 0.5}});
  double first = 0.0, last = 0.0;
  for (double T : {10.0, 100.0, 1000.0, 10000.0}) {
    auto r = occupation_measure(TorusPoint::zero(2), one_sqrt2(), region, T);
    const double err = std::abs(r.ratio - 0.25);
    if (T == 10.0) first = err;
    last = err;
  }
  EXPECT_LT(last, 0.02);
  EXPECT_LT(last, first);
}

// Truncated Fourier expansion of the indicator of [a, b] on one coordinate,
// averaged along the flow through weyl_sum.
TEST(WeylOccupation, IndicatorExpansionConsistency) {
  const double a = 0.2, b = 0.7, T = 50.0, u = 0.15;
  const double lambda_value = std::sqrt(2.0);
  auto lambda = FrequencySequence::explicit_values({lambda_value});
  const int M = 400;
  Complex total = (b - a) * weyl_sum(MultiIndex{}, TorusPoint({u}), lambda, T);
  for (int m = -M; m <= M; ++m) {
    if (m == 0) continue;
    // c(m) = (e^{-2 pi i m a} - e^{-2 pi i m b}) / (2 pi i m)
    const Complex c = (std::exp(-2.0i * pi * double(m) * a) -
                       std::exp(-2.0i * pi * double(m) * b)) /
                      (2.0i * pi * double(m));
    total += c * weyl_sum(MultiIndex::unit(1, m), TorusPoint({u}), lambda, T);
  }
  // tail <= sum_{|m|>M} (1/(pi|m|)) (1/(pi T |m| lambda)) <= 2/(pi^2 T lambda M)
  const double tail = 2.0 / (pi * pi * T * lambda_value * M);
  auto r = occupation_measure(TorusPoint({u}), lambda, JordanRegion::box({{a, b}}), T);
  EXPECT_LE(std::abs(total - r.ratio), tail);
}

TEST(WeylSum, Examples) {
  auto unit = FrequencySequence::explicit_values({1.0});
  EXPECT_EQ(weyl_sum(MultiIndex{}, TorusPoint::zero(1), unit, 3.7), Complex(1.0));
  EXPECT_NEAR(std::abs(weyl_sum(e1, TorusPoint::zero(1), unit, 1.0)), 0.0, 1e-15);
  auto half = weyl_sum(e1, TorusPoint::zero(1), unit, 0.5);
  EXPECT_NEAR(half.real(), 0.0, 1e-15);
  EXPECT_NEAR(half.imag(), 2.0 / pi, 1e-15);
  EXPECT_THROW(weyl_sum(MultiIndex{{1, 2}, {2, -1}}, TorusPoint::zero(2),
                        FrequencySequence::explicit_values({1.0, 2.0}), 1.0),
               ResonanceError);
}

TEST(WeylSum, BoundHolds) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto lambda = FrequencySequence::generate(FrequencyFamily::kSqrtSquarefree, 3);
  for (int trial = 0; trial < 200; ++trial) {
    MultiIndex m = MultiIndex::dense(std::vector<std::int64_t>{entry(rng), entry(rng), entry(rng)});
    TorusPoint u({unif(rng), unif(rng), unif(rng)});
    const double T = 0.1 + 100.0 * unif(rng);
    EXPECT_LE(std::abs(weyl_sum(m, u, lambda, T)), weyl_bound(m, lambda, T) * (1 + 1e-12));
  }
}

TEST(RegionIntegral, Examples) {
  FourierSeries one{{MultiIndex{}, 1.0}};
  auto square = JordanRegion::box({{0.0, 0.5}, {0.0, 0.5}});
  EXPECT_DOUBLE_EQ(region_integral(one, square).real(), 0.25);

  auto strip = JordanRegion::box({{0.0, 0.5}});
  auto v = region_integral(FourierSeries{{e1, 1.0}}, strip);
  EXPECT_NEAR(v.real(), 0.0, 1e-15);
  EXPECT_NEAR(v.imag(), 1.0 / pi, 1e-15);

  EXPECT_EQ(region_integral(FourierSeries{{e2, 1.0}}, strip), Complex(0.0));
}

TEST(RegionIntegral, FullCubeIsSpaceAverage) {
  FourierSeries f{{MultiIndex{}, 0.7 - 2i}, {e1, 3.0}, {MultiIndex{{1, -2}, {2, 5}}, 1i}};
  EXPECT_EQ(region_integral(f, JordanRegion::full_cube(2)), space_average(f));
  EXPECT_EQ(region_integral(f, JordanRegion::full_cube(1)), space_average(f));
}

TEST(RegionIntegral, MatchesMidpointQuadrature) {
  FourierSeries f{{e1, 1.0}, {MultiIndex{{1, 1}, {2, -3}}, 0.5i}, {MultiIndex{}, 0.25}};
  auto region = JordanRegion::box({{0.1, 0.55}, {0.3, 0.9}});
  const int n = 1000;
  Complex sum{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = 0.1 + 0.45 * (i + 0.5) / n;
      const double y = 0.3 + 0.6 * (j + 0.5) / n;
      sum += evaluate(f, TorusPoint({x, y}));
    }
  }
  sum *= 0.45 * 0.6 / (double(n) * n);
  EXPECT_LT(std::abs(sum - region_integral(f, region)), 1e-5);
}

TEST(RestrictedAverage, ConstantEqualsOccupationRatio) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto lambda = FrequencySequence::generate(FrequencyFamily::kLogPrimes, 3);
  FourierSeries one{{MultiIndex{}, 1.0}};
  for (int trial = 0; trial < 30; ++trial) {
    double a = unif(rng), b = unif(rng), c = unif(rng), d = unif(rng);
    auto region = JordanRegion::box({{std::min(a, b), std::max(a, b)},
                                     {std::min(c, d), std::max(c, d)}});
    TorusPoint u({unif(rng), unif(rng), unif(rng)});
    const double T = 1.0 + 300.0 * unif(rng);
    const auto avg = restricted_time_average(one, u, lambda, region, T);
    EXPECT_EQ(avg.real(), occupation_measure(u, lambda, region, T).ratio);
    EXPECT_EQ(avg.imag(), 0.0);
  }
}

TEST(RestrictedAverage, FullCubeEqualsTimeAverage) {
  auto lambda = one_sqrt2();
  FourierSeries f{{e1, 1.0}, {e2, -0.5i}, {MultiIndex{{1, 1}, {2, 1}}, 0.3}};
  TorusPoint u({0.4, 0.15});
  for (double T : {0.7, 13.0, 250.0}) {
    auto restricted = restricted_time_average(f, u, lambda, JordanRegion::full_cube(2), T);
    EXPECT_LT(std::abs(restricted - time_average_analytic(f, u, lambda, T)), 1e-13);
  }
}

TEST(RestrictedAverage, ApproachesRegionIntegral) {
  FourierSeries f{{e1, 1.0}};
  auto region = JordanRegion::box({{0.0, 0.5}});
  auto avg = restricted_time_average(f, TorusPoint::zero(2), one_sqrt2(), region, 1e4);
  EXPECT_LT(std::abs(avg - Complex(0.0, 1.0 / pi)), 0.01);
}

TEST(RestrictedAverage, QuadratureFallbackAgrees) {
  auto lambda = one_sqrt2();
  FourierSeries f{{e1, 1.0}, {MultiIndex{{1, 2}, {2, -1}}, 0.5}};
  auto region = JordanRegion::box({{0.1, 0.6}, {0.2, 0.9}});
  TorusPoint u({0.3, 0.7});
  Observable h = [&](const TorusPoint& theta) { return evaluate(f, theta); };
  auto q = restricted_time_average(h, u, lambda, region, 40.0, 1e-11,
                                   max_oscillation(f, lambda));
  EXPECT_LT(std::abs(q.value - restricted_time_average(f, u, lambda, region, 40.0)), 1e-10);
}

TEST(Discrepancy, IntegerPeriodsVanish) {
  auto r = discrepancy_estimate(TorusPoint::zero(1), FrequencySequence::explicit_values({1.0}),
                                1, 1000.0, 10);
  EXPECT_LT(r.discrepancy, 1e-12);
}

TEST(Discrepancy, MatchesPerBoxSweep) {
  auto lambda = one_sqrt2();
  TorusPoint u({0.1, 0.6});
  const std::size_t g = 5;
  const double T = 300.0;
  auto r = discrepancy_estimate(u, lambda, 2, T, g);
  double brute = 0.0;
  for (std::size_t i = 1; i <= g; ++i) {
    for (std::size_t j = 1; j <= g; ++j) {
      auto box = JordanRegion::box({{0.0, double(i) / g}, {0.0, double(j) / g}});
      auto occ = occupation_measure(u, lambda, box, T);
      brute = std::max(brute, std::abs(occ.ratio - occ.volume));
    }
  }
  EXPECT_NEAR(r.discrepancy, brute, 1e-12);
  EXPECT_EQ(r.worst_corner.size(), 2u);
}

TEST(Discrepancy, KroneckerRegression) {
  // pinned: exact sweep at T = 1e4, g = 10
  auto r = discrepancy_estimate(TorusPoint::zero(2), one_sqrt2(), 2, 1e4, 10);
  EXPECT_LT(r.discrepancy, 0.02);
  EXPECT_GT(r.discrepancy, 0.0);
}

TEST(Discrepancy, DoublingTrend) {
  double previous = INFINITY;
  for (double T : {1250.0, 2500.0, 5000.0, 10000.0}) {
    auto r = discrepancy_estimate(TorusPoint::zero(2), one_sqrt2(), 2, T, 10);
    EXPECT_LE(r.discrepancy, 2.0 * previous);
    previous = r.discrepancy;
  }
}

TEST(Discrepancy, Budget) {
  SweepOptions tight;
  tight.max_cells = 50;
  EXPECT_THROW(discrepancy_estimate(TorusPoint::zero(2), one_sqrt2(), 2, 10.0, 10, tight),
               BudgetError);
  EXPECT_THROW(discrepancy_estimate(TorusPoint::zero(2), one_sqrt2(), 3, 10.0, 10),
               InvalidInput);
}

TEST(Csv, Header) {
  auto r = occupation_measure(TorusPoint::zero(1), FrequencySequence::explicit_values({1.0}),
                              JordanRegion::box({{0.0, 0.5}}), 10.0);
  const auto csv = occupation_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "T,ratio,volume,abs_error,event_count");
}

}  // namespace
}  // namespace ergotor
