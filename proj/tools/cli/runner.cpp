#include "runner.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "ergotor/equidistribution.hpp"
#include "ergotor/ergodic.hpp"
#include "ergotor/format.hpp"
#include "ergotor/montecarlo.hpp"
#include "ergotor/version.hpp"

namespace ergotor::cli {

using nlohmann::ordered_json;

namespace {

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(values[i]);
  }
  return out;
}

Cell u64(std::size_t v) { return static_cast<std::uint64_t>(v); }

Report run_weyl(const ExperimentConfig& c) {
  const auto lambda = c.frequencies->resolve();
  const auto points = c.u->resolve(lambda.size());
  Report report;
  report.table.columns = {"u_id", "T", "index", "re", "im", "modulus", "bound"};
  bool bound_holds = true;
  for (const auto& [m, a] : c.function->terms()) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (double T : c.T_grid) {
        const Complex w = weyl_sum(m, points[i], lambda, T);
        const double bound = weyl_bound(m, lambda, T);
        bound_holds = bound_holds && std::abs(w) <= bound * (1.0 + 1e-12);
        report.table.rows.push_back({u64(i), T, m.to_string(), w.real(), w.imag(),
                                     std::abs(w), bound});
      }
    }
  }
  report.summary = {{"bound_holds", bound_holds}};
  return report;
}

Report run_kronecker(const ExperimentConfig& c) {
  const auto lambda = c.frequencies->resolve();
  const auto points = c.u->resolve(lambda.size());
  const auto region = c.region->resolve();
  Report report;
  report.table.columns = {"u_id",      "T",           "ratio",        "volume",
                          "abs_error", "event_count", "grazing_count"};
  double final_error = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double T : c.T_grid) {
      const auto r = occupation_measure(points[i], lambda, region, T);
      const double err = std::abs(r.ratio - r.volume);
      if (T == c.T_grid.back()) final_error = std::max(final_error, err);
      report.table.rows.push_back({u64(i), T, r.ratio, r.volume, err,
                                   u64(r.event_count), u64(r.grazing_count)});
    }
  }
  report.summary = {{"volume", region.volume()}, {"final_abs_error", final_error}};
  return report;
}

Report run_ergodic(const ExperimentConfig& c) {
  const auto lambda = c.frequencies->resolve();
  const auto points = c.u->resolve(lambda.size());
  const auto& f = *c.function;
  const Complex a0 = space_average(f);
  Report report;
  report.table.columns = {"u_id", "T", "re_value", "im_value", "error", "bound"};
  std::vector<double> worst(c.T_grid.size(), 0.0);
  bool bound_holds = true;
  const double nu = std::max(1.0, max_oscillation(f, lambda));
  const Observable h = [&](const TorusPoint& theta) { return evaluate(f, theta); };
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < c.T_grid.size(); ++k) {
      const double T = c.T_grid[k];
      const Complex value =
          c.method == "quadrature"
              ? time_average_quadrature(h, points[i], lambda, T, c.quadrature_tolerance, nu)
                    .value
              : time_average_analytic(f, points[i], lambda, T);
      const double err = std::abs(value - a0);
      const double bound = ergodic_error_bound(f, lambda, T);
      // quadrature values carry their own tolerance on top of the bound
      const double slack = c.method == "quadrature" ? c.quadrature_tolerance : 0.0;
      bound_holds = bound_holds && err <= bound * (1.0 + 1e-12) + slack;
      worst[k] = std::max(worst[k], err);
      report.table.rows.push_back({u64(i), T, value.real(), value.imag(), err, bound});
    }
  }
  report.summary = {{"space_average", {{"re", a0.real()}, {"im", a0.imag()}}},
                    {"worst_errors", worst},
                    {"bound_holds", bound_holds}};
  if (c.T_grid.size() >= 2) {
    const double slope = loglog_slope(c.T_grid, worst);
    report.summary["loglog_slope"] =
        std::isfinite(slope) ? ordered_json(slope) : ordered_json(nullptr);
  }
  return report;
}

Report run_select_rk(const ExperimentConfig& c) {
  const auto schedule = select_rk(*c.function, c.K);
  Report report;
  report.table.columns = {"k", "rank", "difference", "limit", "satisfied"};
  for (std::size_t k = 1; k <= schedule.size(); ++k) {
    if (k == 1) {
      report.table.rows.push_back({u64(k), u64(schedule.ranks[0]), {}, {}, {}});
      continue;
    }
    const double diff = schedule.tail_bounds[k - 2];
    const double limit = RkSchedule::decay_limit(k);
    report.table.rows.push_back({u64(k), u64(schedule.ranks[k - 1]), diff, limit, diff <= limit});
  }
  report.summary = {{"ranks", schedule.ranks},
                    {"satisfies_decay", schedule.satisfies_decay()}};
  return report;
}

Report run_independence(const ExperimentConfig& c) {
  const auto lambda = c.frequencies->resolve();
  const auto r = check_independence(lambda, c.coeff_bound, c.independence_tolerance);
  const std::string verdict = r.passed ? "independent" : "dependent";
  Report report;
  report.table.columns = {"d",       "coeff_bound", "min_combination", "tolerance",
                          "verdict", "witness",     "vectors_checked"};
  report.table.rows.push_back({u64(lambda.size()), static_cast<std::int64_t>(r.coeff_bound),
                               r.min_combination, r.tolerance, verdict, join(r.witness),
                               static_cast<std::uint64_t>(r.vectors_checked)});
  report.summary = {{"verdict", verdict},
                    {"min_combination", r.min_combination},
                    {"witness", r.witness}};
  return report;
}

Report run_discrepancy(const ExperimentConfig& c) {
  const auto lambda = c.frequencies->resolve();
  const auto points = c.u->resolve(lambda.size());
  Report report;
  report.table.columns = {"u_id",        "T",     "N",      "grid_resolution", "discrepancy",
                          "worst_corner", "ratio", "volume", "event_count"};
  double final_worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double T : c.T_grid) {
      const auto r = discrepancy_estimate(points[i], lambda, c.N, T, c.grid_resolution);
      if (T == c.T_grid.back()) final_worst = std::max(final_worst, r.discrepancy);
      report.table.rows.push_back({u64(i), T, u64(c.N), u64(c.grid_resolution),
                                   r.discrepancy, join(r.worst_corner), r.ratio, r.volume,
                                   u64(r.event_count)});
    }
  }
  report.summary = {{"final_discrepancy", final_worst}};
  return report;
}

Report run_chebyshev(const ExperimentConfig& c) {
  const auto& f = *c.function;
  const auto schedule =
      c.ranks.empty() ? select_rk(f, c.K) : RkSchedule::from_ranks(f, c.ranks);
  const std::size_t d = std::max<std::size_t>(1, f.max_support());
  Report report;
  report.table.columns = {"c",        "source",    "u_id",  "T",
                          "estimate", "std_error", "bound", "consistent"};
  bool all_consistent = true;
  for (double level : c.thresholds) {
    const double bound = chebyshev_bound(f, schedule, level);
    const auto est = mc_measure_superlevel(f, schedule, level, d, c.samples, c.seed);
    const bool ok = est.mean.real() - 4.0 * est.std_error <= bound;
    all_consistent = all_consistent && ok;
    report.table.rows.push_back({level, std::string("mu0"), {}, {}, est.mean.real(),
                                 est.std_error, bound, ok});
  }
  if (c.frequencies) {
    const auto lambda = c.frequencies->resolve();
    const auto points = c.u->resolve(lambda.size());
    for (double level : c.thresholds) {
      const double bound = chebyshev_bound(f, schedule, level);
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (double T : c.T_grid) {
          const double fraction =
              time_superlevel_fraction(f, schedule, level, points[i], lambda, T);
          const bool ok = fraction <= bound + 0.01;
          all_consistent = all_consistent && ok;
          report.table.rows.push_back({level, std::string("time"), u64(i), T, fraction, {},
                                       bound, ok});
        }
      }
    }
  }
  report.summary = {{"ranks", schedule.ranks},
                    {"l2_bound", majorant_l2_bound(f, schedule)},
                    {"rng", std::string(kRngName)},
                    {"all_consistent", all_consistent}};
  return report;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string host_name() {
  char buf[256] = {};
  if (gethostname(buf, sizeof buf - 1) != 0) return "unknown";
  return buf;
}

void print_violations(const std::filesystem::path& path, const std::vector<Violation>& list,
                      std::ostream& err) {
  for (const auto& v : list) {
    err << path.string();
    if (v.line) err << ':' << v.line;
    err << ": " << v.name;
    if (!v.pointer.empty()) err << " at " << v.pointer;
    err << ": " << v.message << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << body;
  file.close();
  if (!file) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

Report execute(const ExperimentConfig& config) {
  Report report;
  switch (config.experiment) {
    case Experiment::kWeyl: report = run_weyl(config); break;
    case Experiment::kKronecker: report = run_kronecker(config); break;
    case Experiment::kErgodic: report = run_ergodic(config); break;
    case Experiment::kSelectRk: report = run_select_rk(config); break;
    case Experiment::kIndependence: report = run_independence(config); break;
    case Experiment::kDiscrepancy: report = run_discrepancy(config); break;
    case Experiment::kChebyshev: report = run_chebyshev(config); break;
  }
  report.config = to_json(config, false);
  return report;
}

std::string error_json(const Error& error) {
  ordered_json inner{{"kind", error.kind()}, {"message", error.what()}};
  if (const auto* e = dynamic_cast<const ResonanceError*>(&error)) {
    inner["index"] = e->index();
  } else if (const auto* e = dynamic_cast<const NoConvergence*>(&error)) {
    inner["last"] = {{"re", e->last().real()}, {"im", e->last().imag()}};
    inner["previous"] = {{"re", e->previous().real()}, {"im", e->previous().imag()}};
  }
  return ordered_json{{"error", inner}}.dump();
}

int run_command(const std::filesystem::path& config_path, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
  auto parsed = load_config(config_path);
  if (!parsed.config) {
    print_violations(config_path, parsed.violations, err);
    return kExitInvalid;
  }
  auto config = std::move(*parsed.config);
  if (options.out_dir) config.output.dir = options.out_dir->string();
  if (options.format) config.output.format = *options.format;
  if (options.seed) config.seed = *options.seed;

  Report report;
  try {
    report = execute(config);
  } catch (const InvalidInput& e) {
    err << error_json(e) << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << error_json(e) << '\n';
    return kExitNumerical;
  }

  const std::filesystem::path dir = config.output.dir;
  const std::string& stem = config.output.name;
  const bool want_json = config.output.format != "csv";
  const bool want_csv = config.output.format != "json";
  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(dir);
    if (want_json) {
      written.push_back(dir / (stem + ".json"));
      write_file(written.back(), report_json(report));
    }
    if (want_csv) {
      written.push_back(dir / (stem + ".csv"));
      write_file(written.back(), to_csv(report.table));
      // a CSV cannot carry the resolved config, so it travels alongside
      written.push_back(dir / (stem + ".config.json"));
      write_file(written.back(), report.config.dump(2) + "\n");
    }
    ordered_json meta{{"tool", "ergotor"},
                      {"version", std::string(kVersion)},
                      {"created_utc", utc_timestamp()},
                      {"host", host_name()},
                      {"config_path", config_path.string()},
                      {"files", ordered_json::array()}};
    for (const auto& p : written) meta["files"].push_back(p.filename().string());
    written.push_back(dir / (stem + ".meta.json"));
    write_file(written.back(), meta.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << config_path.string() << ": output.dir: " << e.what() << '\n';
    return kExitInvalid;
  }
  for (const auto& p : written) out << "wrote " << p.string() << '\n';
  return kExitOk;
}

int validate_command(const std::filesystem::path& config_path, std::ostream& out,
                     std::ostream& err) {
  const auto parsed = load_config(config_path);
  if (!parsed.config) {
    print_violations(config_path, parsed.violations, err);
    err << "invalid: " << parsed.violations.size() << " violation"
        << (parsed.violations.size() == 1 ? "" : "s") << '\n';
    return kExitInvalid;
  }
  out << "valid\n";
  return kExitOk;
}

}  // namespace ergotor::cli
