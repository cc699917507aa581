#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ergotor/fourier.hpp"
#include "ergotor/frequencies.hpp"
#include "ergotor/torus.hpp"

namespace ergotor {

/// Observable on the torus; must be safe to call concurrently.
using Observable = std::function<Complex(const TorusPoint&)>;

/// <m, lambda>; throws ResonanceError when it vanishes for m != 0.
double frequency_of(const MultiIndex& m, const FrequencySequence& lambda);

/// Closed-form (1/T) int_0^T f(phi_t(u)) dt for a finite Fourier series.
Complex time_average_analytic(const FourierSeries& f, const TorusPoint& u,
                              const FrequencySequence& lambda, double T);

struct QuadratureResult {
  Complex value;
  /// |last - previous| at the accepted refinement.
  double delta = 0.0;
  int halvings = 0;
  std::size_t panels = 0;
};

struct QuadratureOptions {
  int max_halvings = 20;
};

/// (1/T) int_0^T h(phi_t(u)) dt by composite 10-point Gauss-Legendre panels
/// no wider than 1/(4 nu_max), halved until two successive estimates differ
/// by less than `tol`.
QuadratureResult time_average_quadrature(const Observable& h,
                                         const TorusPoint& u,
                                         const FrequencySequence& lambda,
                                         double T, double tol, double nu_max,
                                         const QuadratureOptions& options = {});

/// max over the support of |<m, lambda>|: the fastest oscillation of
/// t -> f(phi_t(u)).
double max_oscillation(const FourierSeries& f, const FrequencySequence& lambda);

/// sum_{m != 0} |a(m)| / (pi T |<m, lambda>|), a bound on
/// |time_average_analytic - a(0)| valid for every starting point.
double ergodic_error_bound(const FourierSeries& f,
                           const FrequencySequence& lambda, double T);

struct AverageReport {
  std::size_t u_id = 0;
  TorusPoint u = TorusPoint::zero(1);
  std::vector<double> T_grid;
  std::vector<Complex> values;
  Complex space_avg;
  std::vector<double> errors;
  std::vector<double> bounds;
};

/// One report per starting point, in input order.
std::vector<AverageReport> convergence_sweep(const FourierSeries& f,
                                             const std::vector<TorusPoint>& u_set,
                                             const FrequencySequence& lambda,
                                             const std::vector<double>& T_grid);

/// Per-horizon maximum of the errors over all reports.
std::vector<double> worst_errors(const std::vector<AverageReport>& reports);

/// Least-squares slope of log(y) against log(x). Entries with y == 0 are
/// skipped; returns -inf when all y vanish.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// CSV rows "u_id,T,re_value,im_value,error,bound" with a header.
std::string average_reports_csv(const std::vector<AverageReport>& reports);

/// [{"u_id", "u", "T_grid", "values": [{"re", "im"}], "space_avg": {"re", "im"},
///   "errors", "bounds"}, ...]
std::string average_reports_json(const std::vector<AverageReport>& reports);

}  // namespace ergotor
