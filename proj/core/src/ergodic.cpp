#include "ergotor/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ergotor/errors.hpp"
#include "ergotor/format.hpp"
#include "ergotor/phase.hpp"
#include "gauss_panel.hpp"
#include "json.hpp"

namespace ergotor {

namespace {

void require_horizon(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw InvalidInput("horizon T must be positive and finite");
  }
}

void require_covered(const FourierSeries& f, const TorusPoint& u,
                     const FrequencySequence& lambda) {
  if (f.max_support() > u.dim()) {
    throw InvalidInput("series touches coordinate " +
                       std::to_string(f.max_support()) +
                       " but the starting point has " +
                       std::to_string(u.dim()));
  }
  if (u.dim() > lambda.size()) {
    throw InvalidInput("starting point has more coordinates than frequencies");
  }
}

Complex composite_average(const Observable& h, const TorusPoint& u,
                          const FrequencySequence& lambda, double T,
                          std::size_t panels) {
  const auto& rule = detail::panel_rule();
  const double width = T / static_cast<double>(panels);
  Complex total{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * width;
    Complex panel{};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * h(flow(u, mid + 0.5 * width * rule.nodes[k], lambda));
    }
    total += 0.5 * panel;
  }
  return total / static_cast<double>(panels);
}

}  // namespace

double frequency_of(const MultiIndex& m, const FrequencySequence& lambda) {
  const double s = m.dot(lambda.values());
  if (!m.is_zero()) {
    double scale = 0.0;
    for (const auto& [coord, value] : m.entries()) {
      scale += std::abs(static_cast<double>(value) * lambda[coord - 1]);
    }
    if (std::abs(s) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
      throw ResonanceError(m.to_string(), "resonant multi-index " +
                                              m.to_string() +
                                              ": <m, lambda> = 0");
    }
  }
  return s;
}

Complex time_average_analytic(const FourierSeries& f, const TorusPoint& u,
                              const FrequencySequence& lambda, double T) {
  require_horizon(T);
  require_covered(f, u, lambda);
  Complex sum{};
  for (const auto& [m, a] : f.terms()) {
    if (m.is_zero()) {
      sum += a;
      continue;
    }
    const double s = frequency_of(m, lambda);
    sum += a * unit_phase(m.dot(u.coords())) * averaged_phase(T, s);
  }
  return sum;
}

QuadratureResult time_average_quadrature(const Observable& h,
                                         const TorusPoint& u,
                                         const FrequencySequence& lambda,
                                         double T, double tol, double nu_max,
                                         const QuadratureOptions& options) {
  require_horizon(T);
  if (!(tol > 0.0)) throw InvalidInput("quadrature tolerance must be positive");
  if (!(nu_max > 0.0) || !std::isfinite(nu_max)) {
    throw InvalidInput("nu_max must be positive and finite");
  }
  if (u.dim() > lambda.size()) {
    throw InvalidInput("starting point has more coordinates than frequencies");
  }
  std::size_t panels =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T * 4.0 * nu_max)));
  Complex previous = composite_average(h, u, lambda, T, panels);
  Complex current = previous;
  for (int halving = 1; halving <= options.max_halvings; ++halving) {
    panels *= 2;
    current = composite_average(h, u, lambda, T, panels);
    const double delta = std::abs(current - previous);
    if (delta < tol) return {current, delta, halving, panels};
    if (halving < options.max_halvings) previous = current;
  }
  std::ostringstream msg;
  msg << "quadrature did not reach tol " << tol << " after "
      << options.max_halvings << " halvings; last estimates " << current
      << " and " << previous;
  throw NoConvergence(current, previous, msg.str());
}

double max_oscillation(const FourierSeries& f, const FrequencySequence& lambda) {
  double nu = 0.0;
  for (const auto& [m, a] : f.terms()) nu = std::max(nu, std::abs(m.dot(lambda.values())));
  return nu;
}

double ergodic_error_bound(const FourierSeries& f,
                           const FrequencySequence& lambda, double T) {
  require_horizon(T);
  double bound = 0.0;
  for (const auto& [m, a] : f.terms()) {
    if (m.is_zero()) continue;
    const double s = frequency_of(m, lambda);
    bound += std::abs(a) / (std::numbers::pi * T * std::abs(s));
  }
  return bound;
}

std::vector<AverageReport> convergence_sweep(const FourierSeries& f,
                                             const std::vector<TorusPoint>& u_set,
                                             const FrequencySequence& lambda,
                                             const std::vector<double>& T_grid) {
  if (T_grid.empty()) throw InvalidInput("T_grid is empty");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    require_horizon(T_grid[i]);
    if (i > 0 && !(T_grid[i] > T_grid[i - 1])) {
      throw InvalidInput("T_grid must be strictly increasing");
    }
  }
  const Complex mean = space_average(f);
  std::vector<AverageReport> reports;
  reports.reserve(u_set.size());
  for (std::size_t id = 0; id < u_set.size(); ++id) {
    AverageReport report;
    report.u_id = id;
    report.u = u_set[id];
    report.T_grid = T_grid;
    report.space_avg = mean;
    for (double T : T_grid) {
      const Complex value = time_average_analytic(f, u_set[id], lambda, T);
      report.values.push_back(value);
      report.errors.push_back(std::abs(value - mean));
      report.bounds.push_back(ergodic_error_bound(f, lambda, T));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<double> worst_errors(const std::vector<AverageReport>& reports) {
  std::vector<double> worst;
  for (const auto& report : reports) {
    worst.resize(std::max(worst.size(), report.errors.size()), 0.0);
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
      worst[i] = std::max(worst[i], report.errors[i]);
    }
  }
  return worst;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidInput("loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n == 0) return -std::numeric_limits<double>::infinity();
  if (n == 1) throw InvalidInput("loglog_slope: need two nonzero points");
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

std::string average_reports_csv(const std::vector<AverageReport>& reports) {
  std::string out = "u_id,T,re_value,im_value,error,bound\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.T_grid.size(); ++i) {
      out += std::to_string(r.u_id) + ',' + format_double(r.T_grid[i]) + ',' +
             format_double(r.values[i].real()) + ',' +
             format_double(r.values[i].imag()) + ',' +
             format_double(r.errors[i]) + ',' + format_double(r.bounds[i]) + '\n';
    }
  }
  return out;
}

std::string average_reports_json(const std::vector<AverageReport>& reports) {
  using nlohmann::ordered_json;
  const auto complex_json = [](Complex z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
  };
  ordered_json doc = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json values = ordered_json::array();
    for (const auto& v : r.values) values.push_back(complex_json(v));
    doc.push_back({{"u_id", r.u_id},
                   {"u", std::vector<double>(r.u.coords().begin(), r.u.coords().end())},
                   {"T_grid", r.T_grid},
                   {"values", std::move(values)},
                   {"space_avg", complex_json(r.space_avg)},
                   {"errors", r.errors},
                   {"bounds", r.bounds}});
  }
  return doc.dump();
}

}  // namespace ergotor
