#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "ergotor/ergodic.hpp"
#include "ergotor/fourier.hpp"

namespace ergotor {

/// Identity of the sampling generator recorded in every estimate.
inline constexpr std::string_view kRngName = "mt19937_64";

struct MCEstimate {
  Complex mean;
  /// sqrt(sum |h - mean|^2 / (n - 1)) / sqrt(n).
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::string rng = std::string(kRngName);
};

struct SamplingOptions {
  /// Samples per chunk; chunk c draws from an engine seeded with seed + c.
  std::size_t chunk_size = 8192;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Monte Carlo mean of h over [0,1)^d under the product of uniform measures.
/// Deterministic in (seed, n, d, chunk_size), whatever the thread count.
MCEstimate mc_space_integral(const Observable& h, std::size_t d, std::size_t n,
                             std::uint64_t seed,
                             const SamplingOptions& options = {});

/// Estimate of mu{theta : majorant_g(theta) >= c}. The comparison allows a
/// relative 1e-12 rounding slack so unit-modulus characters count as >= 1.
MCEstimate mc_measure_superlevel(const FourierSeries& f,
                                 const RkSchedule& schedule, double c,
                                 std::size_t d, std::size_t n,
                                 std::uint64_t seed,
                                 const SamplingOptions& options = {});

/// (||f_{r_1}||_2 + sum_m ||f_{r_m} - f_{r_{m-1}}||_2)^2, the Minkowski bound
/// on the integral of g^2.
double majorant_l2_bound(const FourierSeries& f, const RkSchedule& schedule);

/// majorant_l2_bound / c^2 >= mu{g >= c} (Chebyshev).
double chebyshev_bound(const FourierSeries& f, const RkSchedule& schedule,
                       double c);

/// Fraction of t in [0, T] with g(phi_t(u)) >= c, read off a midpoint grid
/// with at least 16 points per period of the fastest term.
double time_superlevel_fraction(const FourierSeries& f,
                                const RkSchedule& schedule, double c,
                                const TorusPoint& u,
                                const FrequencySequence& lambda, double T);

/// {"mean_re", "mean_im", "std_error", "n", "seed", "d", "rng"}.
std::string estimate_to_json(const MCEstimate& estimate);

}  // namespace ergotor
