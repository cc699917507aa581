#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergotor/equidistribution.hpp"
#include "ergotor/fourier.hpp"
#include "ergotor/frequencies.hpp"
#include "json.hpp"

namespace ergotor::cli {

enum class Experiment {
  kWeyl,
  kKronecker,
  kErgodic,
  kSelectRk,
  kIndependence,
  kDiscrepancy,
  kChebyshev,
};

std::string_view experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;

// An explicit frequency as written: a number, "sqrt(x)" or "log(x)".
using FrequencyToken = std::variant<double, std::string>;

struct FrequencyConfig {
  FrequencyFamily family = FrequencyFamily::kSqrtSquarefree;
  std::size_t d = 0;
  std::vector<FrequencyToken> values;  // explicit family only

  FrequencySequence resolve() const;
  friend bool operator==(const FrequencyConfig&, const FrequencyConfig&) = default;
};

struct StartConfig {
  enum class Kind { kZero, kRandom, kList };
  Kind kind = Kind::kZero;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;

  /// Random points draw d coordinates each from mt19937_64(seed).
  std::vector<TorusPoint> resolve(std::size_t d) const;
  friend bool operator==(const StartConfig&, const StartConfig&) = default;
};

struct RegionConfig {
  JordanRegion::Kind kind = JordanRegion::Kind::kBox;
  std::vector<Interval> intervals;
  std::vector<double> center;
  double radius = 0.0;

  JordanRegion resolve() const;
  std::size_t dim() const noexcept {
    return kind == JordanRegion::Kind::kBox ? intervals.size() : center.size();
  }
  friend bool operator==(const RegionConfig& a, const RegionConfig& b);
};

struct OutputConfig {
  std::string format = "both";  // csv | json | both
  std::string dir = ".";
  std::string name;             // defaults to the experiment name
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::kErgodic;
  std::uint64_t seed = 0;
  std::optional<FrequencyConfig> frequencies;
  std::optional<FourierSeries> function;
  std::optional<StartConfig> u;
  std::vector<double> T_grid;
  std::optional<RegionConfig> region;
  std::string method = "analytic";  // ergodic: analytic | quadrature
  double quadrature_tolerance = 1e-10;
  double independence_tolerance = 1e-6;
  int coeff_bound = 10;
  std::size_t K = 4;
  std::vector<std::size_t> ranks;  // chebyshev: hand-picked schedule
  std::vector<double> thresholds;
  std::size_t samples = 100'000;
  std::size_t grid_resolution = 10;
  std::size_t N = 0;  // discrepancy dimension, 0 = all of d
  OutputConfig output;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Violation {
  std::string name;     // e.g. "T_grid.monotone"
  std::string pointer;  // JSON pointer of the offending value
  std::string message;
  std::size_t line = 0;
};

struct ParsedConfig {
  std::optional<ExperimentConfig> config;
  std::vector<Violation> violations;
};

/// Checks every field of a config document and builds the typed config when
/// no violation was found. Relative function paths resolve against base_dir.
/// Violation lines are filled in from `text`.
ParsedConfig parse_config(std::string_view text,
                          const std::filesystem::path& base_dir);

/// Reads and parses a config file; a missing file is a single violation.
ParsedConfig load_config(const std::filesystem::path& path);

/// Canonical document for a config; parse_config(to_json(c)) gives back c.
/// Reports embed it without output.dir so that their bodies do not depend on
/// where they were written.
nlohmann::ordered_json to_json(const ExperimentConfig& config,
                               bool with_output_dir = true);

}  // namespace ergotor::cli
