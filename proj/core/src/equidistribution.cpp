#include "ergotor/equidistribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergotor/errors.hpp"
#include "ergotor/format.hpp"
#include "ergotor/phase.hpp"
#include "gauss_panel.hpp"

namespace ergotor {

JordanRegion JordanRegion::box(std::vector<Interval> intervals) {
  if (intervals.empty()) throw InvalidInput("region needs at least one interval");
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto& iv = intervals[j];
    if (!(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0)) {
      throw InvalidInput("region interval " + std::to_string(j + 1) +
                         " must satisfy 0 <= a <= b <= 1");
    }
  }
  return JordanRegion(Kind::kBox, std::move(intervals));
}

JordanRegion JordanRegion::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw InvalidInput("ball needs a center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InvalidInput("ball radius must be positive and finite");
  }
  std::vector<Interval> faces;
  for (std::size_t j = 0; j < center.size(); ++j) {
    if (!(center[j] >= 0.0 && center[j] <= 1.0)) {
      throw InvalidInput("ball center coordinate " + std::to_string(j + 1) +
                         " outside [0, 1]");
    }
    faces.push_back({std::max(0.0, center[j] - radius),
                     std::min(1.0, center[j] + radius)});
  }
  JordanRegion region(Kind::kBallCylinder, std::move(faces));
  region.center_ = std::move(center);
  region.radius_ = radius;
  return region;
}

JordanRegion JordanRegion::full_cube(std::size_t N) {
  return box(std::vector<Interval>(N, Interval{0.0, 1.0}));
}

double JordanRegion::volume() const noexcept {
  double v = 1.0;
  for (const auto& iv : intervals_) v *= iv.hi - iv.lo;
  return v;
}

bool JordanRegion::contains(std::span<const double> x) const {
  if (x.size() < dim()) throw InvalidInput("point has fewer coordinates than region");
  for (std::size_t j = 0; j < dim(); ++j) {
    if (x[j] < intervals_[j].lo || x[j] > intervals_[j].hi) return false;
  }
  return true;
}

namespace {

constexpr double kGrazing = 1e-12;

void require_sweep_inputs(const TorusPoint& u, const FrequencySequence& lambda,
                          std::size_t N, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidInput("horizon T must be positive and finite");
  }
  if (N > u.dim()) {
    throw InvalidInput("region has " + std::to_string(N) +
                       " coordinates but the starting point only " +
                       std::to_string(u.dim()));
  }
  if (u.dim() > lambda.size()) {
    throw InvalidInput("starting point has more coordinates than frequencies");
  }
}

// Sorted distinct times in [0, T] at which some coordinate j < N crosses one
// of its levels, with 0 and T added.
std::vector<double> crossing_times(const TorusPoint& u,
                                   const FrequencySequence& lambda,
                                   std::vector<std::vector<double>> levels,
                                   double T, std::uint64_t max_events,
                                   std::size_t* event_count) {
  double expected = 0.0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    for (double& c : levels[j]) c = c >= 1.0 ? 0.0 : c;
    std::sort(levels[j].begin(), levels[j].end());
    levels[j].erase(std::unique(levels[j].begin(), levels[j].end()),
                    levels[j].end());
    expected += static_cast<double>(levels[j].size()) * (T * lambda[j] + 1.0);
  }
  if (expected > static_cast<double>(max_events)) {
    throw BudgetError("event sweep needs about " +
                      std::to_string(static_cast<std::uint64_t>(expected)) +
                      " crossings, budget is " + std::to_string(max_events));
  }
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(expected) + 2);
  for (std::size_t j = 0; j < levels.size(); ++j) {
    for (double c : levels[j]) {
      double k = std::floor(u[j] - c) + 1.0;
      for (;; k += 1.0) {
        const double t = (c - u[j] + k) / lambda[j];
        if (t >= T) break;
        if (t > 0.0) times.push_back(t);
      }
    }
  }
  *event_count = times.size();
  times.push_back(0.0);
  times.push_back(T);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

void position(const TorusPoint& u, const FrequencySequence& lambda, double t,
              std::size_t N, std::vector<double>& x) {
  for (std::size_t j = 0; j < N; ++j) {
    x[j] = fractional_part(u[j] + fractional_part(t * lambda[j]));
  }
}

struct Runs {
  std::vector<Interval> intervals;
  std::size_t event_count = 0;
  std::size_t grazing_count = 0;
};

// Maximal time intervals in (0, T) during which the flow stays in the region.
Runs in_region_runs(const TorusPoint& u, const FrequencySequence& lambda,
                    const JordanRegion& region, double T,
                    const SweepOptions& options) {
  const std::size_t N = region.dim();
  require_sweep_inputs(u, lambda, N, T);
  std::vector<std::vector<double>> levels(N);
  for (std::size_t j = 0; j < N; ++j) {
    levels[j] = {region.intervals()[j].lo, region.intervals()[j].hi};
  }
  Runs runs;
  const auto times =
      crossing_times(u, lambda, std::move(levels), T, options.max_events,
                     &runs.event_count);
  std::vector<double> x(N);
  bool open = false;
  double start = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i];
    const double t1 = times[i + 1];
    position(u, lambda, 0.5 * (t0 + t1), N, x);
    for (std::size_t j = 0; j < N; ++j) {
      const auto& iv = region.intervals()[j];
      const bool near = std::abs(x[j] - iv.lo) < kGrazing ||
                        std::abs(x[j] - iv.hi) < kGrazing ||
                        (iv.lo == 0.0 && 1.0 - x[j] < kGrazing);
      if (near) {
        ++runs.grazing_count;
        break;
      }
    }
    const bool inside = region.contains(x);
    if (inside && !open) {
      open = true;
      start = t0;
    } else if (!inside && open) {
      open = false;
      runs.intervals.push_back({start, t0});
    }
  }
  if (open) runs.intervals.push_back({start, T});
  return runs;
}

}  // namespace

OccupationResult occupation_measure(const TorusPoint& u,
                                    const FrequencySequence& lambda,
                                    const JordanRegion& region, double T,
                                    const SweepOptions& options) {
  const Runs runs = in_region_runs(u, lambda, region, T, options);
  OccupationResult result;
  for (const auto& run : runs.intervals) result.measure += run.hi - run.lo;
  result.T = T;
  result.ratio = result.measure / T;
  result.volume = region.volume();
  result.event_count = runs.event_count;
  result.grazing_count = runs.grazing_count;
  return result;
}

Complex restricted_time_average(const FourierSeries& f, const TorusPoint& u,
                                const FrequencySequence& lambda,
                                const JordanRegion& region, double T,
                                const SweepOptions& options) {
  if (f.max_support() > u.dim()) {
    throw InvalidInput("series touches coordinate " +
                       std::to_string(f.max_support()) +
                       " but the starting point has " + std::to_string(u.dim()));
  }
  const Runs runs = in_region_runs(u, lambda, region, T, options);

  struct Term {
    Complex scaled;  // a(m) e^{2 pi i <m, u>}
    double s;        // <m, lambda>
  };
  std::vector<Term> terms;
  for (const auto& [m, a] : f.terms()) {
    const double s = m.is_zero() ? 0.0 : frequency_of(m, lambda);
    terms.push_back({a * unit_phase(m.dot(u.coords())), s});
  }

  Complex total{};
  for (const auto& run : runs.intervals) {
    const double length = run.hi - run.lo;
    for (const auto& term : terms) {
      if (term.s == 0.0) {
        total += term.scaled * length;
      } else {
        total += term.scaled * unit_phase(product_turns(run.lo, term.s)) *
                 (length * averaged_phase(length, term.s));
      }
    }
  }
  return total / T;
}

namespace {

Complex runs_quadrature(const Observable& h, const TorusPoint& u,
                        const FrequencySequence& lambda,
                        const std::vector<Interval>& runs, double T,
                        double panels_per_unit) {
  const auto& rule = detail::panel_rule();
  Complex total{};
  for (const auto& run : runs) {
    const double length = run.hi - run.lo;
    const auto panels = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(length * panels_per_unit)));
    const double width = length / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = run.lo + (static_cast<double>(p) + 0.5) * width;
      Complex panel{};
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        panel += rule.weights[k] * h(flow(u, mid + 0.5 * width * rule.nodes[k], lambda));
      }
      total += 0.5 * width * panel;
    }
  }
  return total / T;
}

}  // namespace

QuadratureResult restricted_time_average(const Observable& h,
                                         const TorusPoint& u,
                                         const FrequencySequence& lambda,
                                         const JordanRegion& region, double T,
                                         double tol, double nu_max,
                                         const SweepOptions& options) {
  if (!(tol > 0.0)) throw InvalidInput("quadrature tolerance must be positive");
  if (!(nu_max > 0.0) || !std::isfinite(nu_max)) {
    throw InvalidInput("nu_max must be positive and finite");
  }
  const Runs runs = in_region_runs(u, lambda, region, T, options);
  double density = 4.0 * nu_max;
  Complex previous = runs_quadrature(h, u, lambda, runs.intervals, T, density);
  Complex current = previous;
  constexpr int kMaxHalvings = 20;
  for (int halving = 1; halving <= kMaxHalvings; ++halving) {
    density *= 2.0;
    current = runs_quadrature(h, u, lambda, runs.intervals, T, density);
    const double delta = std::abs(current - previous);
    if (delta < tol) {
      return {current, delta, halving,
              static_cast<std::size_t>(std::ceil(T * density))};
    }
    if (halving < kMaxHalvings) previous = current;
  }
  throw NoConvergence(current, previous,
                      "restricted quadrature did not converge");
}

Complex region_integral(const FourierSeries& f, const JordanRegion& region) {
  const std::size_t N = region.dim();
  Complex total{};
  for (const auto& [m, a] : f.terms()) {
    if (m.support() > N) continue;  // a full period in some free coordinate
    Complex product = a;
    for (std::size_t j = 0; j < N; ++j) {
      const auto& iv = region.intervals()[j];
      const double width = iv.hi - iv.lo;
      const std::int64_t mj = m[j + 1];
      if (mj == 0) {
        product *= width;
      } else {
        const double freq = static_cast<double>(mj);
        const double turns = freq * width;
        if (turns == std::floor(turns)) {  // whole periods integrate to zero
          product = 0.0;
          break;
        }
        product *=unit_phase(product_turns(freq, iv.lo)) *
                   (width * averaged_phase(width, freq));
      }
    }
    total += product;
  }
  return total;
}

Complex weyl_sum(const MultiIndex& m, const TorusPoint& u,
                 const FrequencySequence& lambda, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidInput("horizon T must be positive and finite");
  }
  if (m.is_zero()) return {1.0, 0.0};
  if (m.support() > u.dim()) {
    throw InvalidInput("multi-index " + m.to_string() +
                       " exceeds the starting point's dimension");
  }
  const double s = frequency_of(m, lambda);
  return unit_phase(m.dot(u.coords())) * averaged_phase(T, s);
}

double weyl_bound(const MultiIndex& m, const FrequencySequence& lambda,
                  double T) {
  if (m.is_zero()) return 1.0;
  const double s = frequency_of(m, lambda);
  return std::min(1.0, 1.0 / (std::numbers::pi * T * std::abs(s)));
}

DiscrepancyResult discrepancy_estimate(const TorusPoint& u,
                                       const FrequencySequence& lambda,
                                       std::size_t N, double T,
                                       std::size_t grid_resolution,
                                       const SweepOptions& options) {
  if (N < 1) throw InvalidInput("discrepancy needs N >= 1");
  if (grid_resolution < 1) throw InvalidInput("grid_resolution must be positive");
  require_sweep_inputs(u, lambda, N, T);
  const std::size_t g = grid_resolution;
  const double cells_needed = std::pow(static_cast<double>(g), static_cast<double>(N));
  if (cells_needed > static_cast<double>(options.max_cells)) {
    throw BudgetError("discrepancy grid needs " +
                      std::to_string(static_cast<std::uint64_t>(cells_needed)) +
                      " cells, budget is " + std::to_string(options.max_cells));
  }
  const auto cells = static_cast<std::size_t>(cells_needed);

  std::vector<std::vector<double>> levels(N);
  for (auto& lv : levels) {
    for (std::size_t i = 0; i < g; ++i) {
      lv.push_back(static_cast<double>(i) / static_cast<double>(g));
    }
  }
  DiscrepancyResult result;
  result.T = T;
  const auto times = crossing_times(u, lambda, std::move(levels), T,
                                    options.max_events, &result.event_count);

  // time spent in each grid cell, cell index mixed-radix with coordinate 0
  // varying fastest
  std::vector<double> occupancy(cells, 0.0);
  std::vector<double> x(N);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    position(u, lambda, 0.5 * (times[i] + times[i + 1]), N, x);
    std::size_t cell = 0;
    for (std::size_t j = N; j-- > 0;) {
      auto c = static_cast<std::size_t>(x[j] * static_cast<double>(g));
      cell = cell * g + std::min(c, g - 1);
    }
    occupancy[cell] += times[i + 1] - times[i];
  }
  // prefix sums along every axis: occupancy[c] becomes the time spent in the
  // anchored box with corner (c_1 + 1, ..., c_N + 1) / g
  std::size_t stride = 1;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t c = 0; c < cells; ++c) {
      if ((c / stride) % g != 0) occupancy[c] += occupancy[c - stride];
    }
    stride *= g;
  }
  for (std::size_t c = 0; c < cells; ++c) {
    double volume = 1.0;
    std::vector<std::size_t> corner(N);
    std::size_t rest = c;
    for (std::size_t j = 0; j < N; ++j) {
      corner[j] = rest % g + 1;
      rest /= g;
      volume *= static_cast<double>(corner[j]) / static_cast<double>(g);
    }
    const double ratio = occupancy[c] / T;
    const double gap = std::abs(ratio - volume);
    if (c == 0 || gap > result.discrepancy) {
      result.discrepancy = gap;
      result.worst_corner = std::move(corner);
      result.ratio = ratio;
      result.volume = volume;
    }
  }
  return result;
}

std::string occupation_csv(const std::vector<OccupationResult>& rows) {
  std::string out = "T,ratio,volume,abs_error,event_count\n";
  for (const auto& r : rows) {
    out += format_double(r.T) + ',' + format_double(r.ratio) + ',' +
           format_double(r.volume) + ',' +
           format_double(std::abs(r.ratio - r.volume)) + ',' +
           std::to_string(r.event_count) + '\n';
  }
  return out;
}

std::string discrepancy_csv(const std::vector<DiscrepancyResult>& rows) {
  std::string out = "T,ratio,volume,abs_error,event_count\n";
  for (const auto& r : rows) {
    out += format_double(r.T) + ',' + format_double(r.ratio) + ',' +
           format_double(r.volume) + ',' + format_double(r.discrepancy) + ',' +
           std::to_string(r.event_count) + '\n';
  }
  return out;
}

}  // namespace ergotor
