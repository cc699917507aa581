#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ergotor/ergodic.hpp"
#include "ergotor/fourier.hpp"
#include "ergotor/frequencies.hpp"
#include "ergotor/torus.hpp"

namespace ergotor {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Jordan-measurable target set on the first N coordinates: an axis-aligned
/// box, or a max-metric ball clipped to the unit cube (which is again a box).
class JordanRegion {
 public:
  enum class Kind { kBox, kBallCylinder };

  static JordanRegion box(std::vector<Interval> intervals);
  static JordanRegion ball(std::vector<double> center, double radius);
  /// [0,1]^N.
  static JordanRegion full_cube(std::size_t N);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return intervals_.size(); }
  /// Per-coordinate intervals; for balls these are the clipped faces.
  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  const std::vector<double>& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  double volume() const noexcept;
  /// Closed-box membership of the first N coordinates of x.
  bool contains(std::span<const double> x) const;

 private:
  JordanRegion(Kind kind, std::vector<Interval> intervals)
      : kind_(kind), intervals_(std::move(intervals)) {}

  Kind kind_;
  std::vector<Interval> intervals_;
  std::vector<double> center_;
  double radius_ = 0.0;
};

struct OccupationResult {
  /// I(T) = |{t in (0, T) : phi_t(u) in region}|.
  double measure = 0.0;
  double ratio = 0.0;
  double T = 0.0;
  double volume = 0.0;
  std::size_t event_count = 0;
  /// Elementary intervals whose midpoint lay within 1e-12 of a face.
  std::size_t grazing_count = 0;
};

struct SweepOptions {
  std::uint64_t max_events = 100'000'000;
  std::uint64_t max_cells = 10'000'000;
};

/// Exact occupation time of a box by event sweep: every face crossing
/// t = (face - u_j + k) / lambda_j in (0, T) is collected and sorted, and each
/// elementary interval is classified by its midpoint.
OccupationResult occupation_measure(const TorusPoint& u,
                                    const FrequencySequence& lambda,
                                    const JordanRegion& region, double T,
                                    const SweepOptions& options = {});

/// T^-1 times the integral of f(phi_t(u)) over the times spent in the region,
/// integrating every Fourier term in closed form on each in-region interval.
Complex restricted_time_average(const FourierSeries& f, const TorusPoint& u,
                                const FrequencySequence& lambda,
                                const JordanRegion& region, double T,
                                const SweepOptions& options = {});

/// Same quantity for an arbitrary observable, by Gauss-Legendre panels on
/// each in-region interval (see time_average_quadrature).
QuadratureResult restricted_time_average(const Observable& h,
                                         const TorusPoint& u,
                                         const FrequencySequence& lambda,
                                         const JordanRegion& region, double T,
                                         double tol, double nu_max,
                                         const SweepOptions& options = {});

/// Integral of f over the region times the remaining coordinates: closed
/// form per term, zero for any term moving a coordinate beyond N.
Complex region_integral(const FourierSeries& f, const JordanRegion& region);

/// (1/T) int_0^T e^{2 pi i <m, phi_t(u)>} dt.
Complex weyl_sum(const MultiIndex& m, const TorusPoint& u,
                 const FrequencySequence& lambda, double T);

/// min(1, 1 / (pi T |<m, lambda>|)); 1 for the zero index.
double weyl_bound(const MultiIndex& m, const FrequencySequence& lambda,
                  double T);

struct DiscrepancyResult {
  double discrepancy = 0.0;
  /// Grid corner (i_1, ..., i_N) of the worst anchored box [0, i_j / g].
  std::vector<std::size_t> worst_corner;
  double ratio = 0.0;
  double volume = 0.0;
  double T = 0.0;
  std::size_t event_count = 0;
};

/// max over anchored boxes [0, i_1/g] x ... x [0, i_N/g] of
/// |occupation ratio - volume|. One sweep over the grid lines fills a cell
/// histogram whose prefix sums give every box at once.
DiscrepancyResult discrepancy_estimate(const TorusPoint& u,
                                       const FrequencySequence& lambda,
                                       std::size_t N, double T,
                                       std::size_t grid_resolution,
                                       const SweepOptions& options = {});

/// Header "T,ratio,volume,abs_error,event_count".
std::string occupation_csv(const std::vector<OccupationResult>& rows);
std::string discrepancy_csv(const std::vector<DiscrepancyResult>& rows);

}  // namespace ergotor
