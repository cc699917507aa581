#include "ergotor/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "ergotor/errors.hpp"
#include "json.hpp"

namespace ergotor {

namespace {

// Platform-independent uniform draw in [0, 1): the top 53 bits of the engine.
double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

struct ChunkStats {
  std::size_t n = 0;
  Complex mean;
  double m2 = 0.0;  // sum of |h - mean|^2
};

ChunkStats sample_chunk(const Observable& h, std::size_t d, std::size_t count,
                        std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  ChunkStats stats;
  std::vector<double> coords(d);
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& c : coords) c = uniform01(engine);
    const Complex value = h(TorusPoint(coords));
    ++stats.n;
    const Complex delta = value - stats.mean;
    stats.mean += delta / static_cast<double>(stats.n);
    stats.m2 += (std::conj(delta) * (value - stats.mean)).real();
  }
  return stats;
}

// Chan et al. pairwise update.
void merge(ChunkStats& into, const ChunkStats& other) {
  if (other.n == 0) return;
  const double na = static_cast<double>(into.n);
  const double nb = static_cast<double>(other.n);
  const double n = na + nb;
  const Complex delta = other.mean - into.mean;
  into.mean += delta * (nb / n);
  into.m2 += other.m2 + std::norm(delta) * na * nb / n;
  into.n += other.n;
}

}  // namespace

MCEstimate mc_space_integral(const Observable& h, std::size_t d, std::size_t n,
                             std::uint64_t seed,
                             const SamplingOptions& options) {
  if (n < 2) throw InvalidInput("Monte Carlo needs at least 2 samples");
  if (d < 1) throw InvalidInput("sampling dimension must be positive");
  if (options.chunk_size < 1) throw InvalidInput("chunk_size must be positive");

  const std::size_t chunks = (n + options.chunk_size - 1) / options.chunk_size;
  std::vector<ChunkStats> results(chunks);
  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

  const auto work = [&](unsigned worker) {
    for (std::size_t c = worker; c < chunks; c += threads) {
      const std::size_t begin = c * options.chunk_size;
      const std::size_t count = std::min(options.chunk_size, n - begin);
      results[c] = sample_chunk(h, d, count, seed + c);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  ChunkStats total;
  for (const auto& chunk : results) merge(total, chunk);

  MCEstimate estimate;
  estimate.mean = total.mean;
  estimate.n = n;
  estimate.seed = seed;
  estimate.d = d;
  estimate.std_error =
      std::sqrt(total.m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
  return estimate;
}

MCEstimate mc_measure_superlevel(const FourierSeries& f,
                                 const RkSchedule& schedule, double c,
                                 std::size_t d, std::size_t n,
                                 std::uint64_t seed,
                                 const SamplingOptions& options) {
  if (!(c >= 0.0)) throw InvalidInput("threshold must be nonnegative");
  const double threshold = c * (1.0 - 1e-12);
  const Observable indicator = [&](const TorusPoint& theta) -> Complex {
    return majorant_g(f, schedule, theta) >= threshold ? 1.0 : 0.0;
  };
  return mc_space_integral(indicator, d, n, seed, options);
}

double majorant_l2_bound(const FourierSeries& f, const RkSchedule& schedule) {
  double sum = 0.0;
  for (double norm : schedule_window_norms(f, schedule)) sum += norm;
  return sum * sum;
}

double chebyshev_bound(const FourierSeries& f, const RkSchedule& schedule,
                       double c) {
  if (!(c > 0.0)) throw InvalidInput("threshold must be positive");
  return majorant_l2_bound(f, schedule) / (c * c);
}

double time_superlevel_fraction(const FourierSeries& f,
                                const RkSchedule& schedule, double c,
                                const TorusPoint& u,
                                const FrequencySequence& lambda, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("horizon T must be positive");
  const double nu = std::max(1.0, max_oscillation(f, lambda));
  const auto points =
      static_cast<std::size_t>(std::ceil(T * 16.0 * nu));
  const double step = T / static_cast<double>(points);
  const double threshold = c * (1.0 - 1e-12);
  std::size_t above = 0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * step;
    if (majorant_g(f, schedule, flow(u, t, lambda)) >= threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(points);
}

std::string estimate_to_json(const MCEstimate& estimate) {
  nlohmann::ordered_json doc = {
      {"mean_re", estimate.mean.real()}, {"mean_im", estimate.mean.imag()},
      {"std_error", estimate.std_error}, {"n", estimate.n},
      {"seed", estimate.seed},           {"d", estimate.d},
      {"rng", estimate.rng}};
  return doc.dump();
}

}  // namespace ergotor
