#include "config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ergotor/errors.hpp"
#include "locate.hpp"

namespace ergotor::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperiments{{
    {Experiment::kWeyl, "weyl"},
    {Experiment::kKronecker, "kronecker"},
    {Experiment::kErgodic, "ergodic"},
    {Experiment::kSelectRk, "select_rk"},
    {Experiment::kIndependence, "independence"},
    {Experiment::kDiscrepancy, "discrepancy"},
    {Experiment::kChebyshev, "chebyshev"},
}};

// Canonical key order of a config document.
const std::vector<std::string> kKnownKeys{
    "experiment", "seed",      "frequencies", "function",        "u",
    "T_grid",     "region",    "method",      "tolerances",      "coeff_bound",
    "K",          "ranks",     "thresholds",  "samples",         "grid_resolution",
    "N",          "output"};

struct FieldRules {
  std::set<std::string> allowed;
  std::set<std::string> required;
};

FieldRules rules_for(Experiment e) {
  FieldRules r;
  r.allowed = {"experiment", "seed", "tolerances", "output"};
  const auto add = [&](std::initializer_list<const char*> allowed,
                       std::initializer_list<const char*> required) {
    r.allowed.insert(allowed.begin(), allowed.end());
    r.required.insert(required.begin(), required.end());
  };
  switch (e) {
    case Experiment::kWeyl:
      add({"frequencies", "function", "u", "T_grid"},
          {"frequencies", "function", "u", "T_grid"});
      break;
    case Experiment::kKronecker:
      add({"frequencies", "u", "T_grid", "region"},
          {"frequencies", "u", "T_grid", "region"});
      break;
    case Experiment::kErgodic:
      add({"frequencies", "function", "u", "T_grid", "method"},
          {"frequencies", "function", "u", "T_grid"});
      break;
    case Experiment::kSelectRk:
      add({"function", "K"}, {"function"});
      break;
    case Experiment::kIndependence:
      add({"frequencies", "coeff_bound"}, {"frequencies"});
      break;
    case Experiment::kDiscrepancy:
      add({"frequencies", "u", "T_grid", "grid_resolution", "N"},
          {"frequencies", "u", "T_grid"});
      break;
    case Experiment::kChebyshev:
      add({"function", "K", "ranks", "thresholds", "samples", "frequencies", "u",
           "T_grid"},
          {"function", "thresholds"});
      break;
  }
  return r;
}

class Checker {
 public:
  void flag(std::string name, std::string pointer, std::string message) {
    violations.push_back({std::move(name), std::move(pointer), std::move(message), 0});
  }
  std::vector<Violation> violations;
};

std::string describe(const json& j) {
  std::string text = j.dump();
  if (text.size() > 40) text = text.substr(0, 37) + "...";
  return text;
}

// Non-negative integer, accepting integral floating values such as 1e5.
std::optional<std::uint64_t> as_count(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) return std::nullopt;  // negative
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (x >= 0.0 && x < 0x1.0p63 && x == std::floor(x)) {
      return static_cast<std::uint64_t>(x);
    }
  }
  return std::nullopt;
}

std::optional<std::uint64_t> integer_field(const json& doc, const std::string& key,
                                           std::uint64_t lo, std::uint64_t hi,
                                           Checker& check) {
  const auto value = as_count(doc.at(key));
  if (!value || *value < lo || *value > hi) {
    check.flag(key + ".range", "/" + key,
               key + " must be an integer in [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "], got " + describe(doc.at(key)));
    return std::nullopt;
  }
  return value;
}

std::optional<double> finite_number(const json& j) {
  if (!j.is_number()) return std::nullopt;
  const double x = j.get<double>();
  if (!std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<double> parse_real(std::string_view text) {
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

// Value of a frequency token, or nullopt when it is malformed.
std::optional<double> token_value(const FrequencyToken& token) {
  if (const double* x = std::get_if<double>(&token)) return *x;
  const auto& text = std::get<std::string>(token);
  for (std::string_view fn : {"sqrt", "log"}) {
    if (text.size() > fn.size() + 2 && text.compare(0, fn.size(), fn) == 0 &&
        text[fn.size()] == '(' && text.back() == ')') {
      const auto arg = parse_real(
          std::string_view(text).substr(fn.size() + 1, text.size() - fn.size() - 2));
      if (!arg || !std::isfinite(*arg) || !(*arg > 0.0)) return std::nullopt;
      return fn == "sqrt" ? std::sqrt(*arg) : std::log(*arg);
    }
  }
  return std::nullopt;
}

std::optional<FrequencyConfig> parse_frequencies(const json& j, Checker& check) {
  const std::string at = "/frequencies";
  if (!j.is_object()) {
    check.flag("frequencies.type", at, "frequencies must be an object");
    return std::nullopt;
  }
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "d" && key != "values") {
      check.flag("frequencies.unknown_field", at + "/" + escape_pointer_token(key),
                 "unknown field '" + key + "' in frequencies");
    }
  }
  FrequencyConfig parsed;
  if (!j.contains("family") || !j["family"].is_string()) {
    check.flag("frequencies.family", at,
               "frequencies.family must be one of sqrt_squarefree, log_primes, explicit");
    return std::nullopt;
  }
  try {
    parsed.family = parse_family(j["family"].get<std::string>());
  } catch (const InvalidInput&) {
    check.flag("frequencies.family", at + "/family",
               "unknown frequency family " + describe(j["family"]));
    return std::nullopt;
  }

  if (parsed.family != FrequencyFamily::kExplicit) {
    if (j.contains("values")) {
      check.flag("frequencies.values", at + "/values",
                 "values apply to the explicit family only");
    }
    const auto d = j.contains("d") ? as_count(j["d"]) : std::nullopt;
    if (!d || *d < 1 || *d > 64) {
      check.flag("frequencies.d", at + (j.contains("d") ? "/d" : ""),
                 "frequencies.d must be an integer in [1, 64]");
      return std::nullopt;
    }
    parsed.d = static_cast<std::size_t>(*d);
    return parsed;
  }

  if (!j.contains("values") || !j["values"].is_array() || j["values"].empty()) {
    check.flag("frequencies.values", at,
               "explicit frequencies need a nonempty values array");
    return std::nullopt;
  }
  bool ok = true;
  std::vector<double> resolved;
  for (std::size_t i = 0; i < j["values"].size(); ++i) {
    const auto& item = j["values"][i];
    FrequencyToken token;
    if (item.is_number()) token = item.get<double>();
    else if (item.is_string()) token = item.get<std::string>();
    const auto value = item.is_number() || item.is_string() ? token_value(token)
                                                            : std::nullopt;
    if (!value || !std::isfinite(*value) || !(*value > 0.0)) {
      check.flag("frequencies.values", at + "/values/" + std::to_string(i),
                 "frequency must be a positive number, \"sqrt(x)\" or \"log(x)\", got " +
                     describe(item));
      ok = false;
      continue;
    }
    parsed.values.push_back(token);
    resolved.push_back(*value);
  }
  if (!ok) return std::nullopt;
  if (!std::is_sorted(resolved.begin(), resolved.end(), std::less_equal<>())) {
    check.flag("frequencies.values", at + "/values",
               "explicit frequencies must be strictly increasing");
    return std::nullopt;
  }
  parsed.d = resolved.size();
  if (j.contains("d") && as_count(j["d"]) != parsed.d) {
    check.flag("frequencies.d", at + "/d",
               "frequencies.d disagrees with the number of values");
    return std::nullopt;
  }
  return parsed;
}

std::optional<FourierSeries> parse_function(const json& j,
                                            const std::filesystem::path& base_dir,
                                            Checker& check) {
  const std::string at = "/function";
  if (!j.is_object() || j.contains("terms") == j.contains("path") || j.size() != 1) {
    check.flag("function.type", at,
               "function must be an object with exactly one of 'terms' or 'path'");
    return std::nullopt;
  }
  if (j.contains("terms")) {
    try {
      return series_from_json(j.dump());
    } catch (const InvalidInput& e) {
      check.flag("function.terms", at + "/terms", e.what());
      return std::nullopt;
    }
  }
  if (!j["path"].is_string()) {
    check.flag("function.path", at + "/path", "function.path must be a string");
    return std::nullopt;
  }
  std::filesystem::path file = j["path"].get<std::string>();
  if (file.is_relative()) file = base_dir / file;
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    check.flag("function.path", at + "/path", "cannot read " + file.string());
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return series_from_json(buffer.str());
  } catch (const InvalidInput& e) {
    check.flag("function.path", at + "/path", file.string() + ": " + e.what());
    return std::nullopt;
  }
}

std::optional<StartConfig> parse_start(const json& j, Checker& check) {
  const std::string at = "/u";
  StartConfig parsed;
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (text == "zero") return parsed;
    // random:<count>:<seed>
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? 0 : first + 1);
    if (text.compare(0, first, "random") == 0 && first != std::string::npos &&
        second != std::string::npos) {
      const std::string_view count_text =
          std::string_view(text).substr(first + 1, second - first - 1);
      const std::string_view seed_text = std::string_view(text).substr(second + 1);
      std::uint64_t count = 0, seed = 0;
      const auto c = std::from_chars(count_text.data(),
                                     count_text.data() + count_text.size(), count);
      const auto s = std::from_chars(seed_text.data(),
                                     seed_text.data() + seed_text.size(), seed);
      if (c.ec == std::errc() && c.ptr == count_text.data() + count_text.size() &&
          s.ec == std::errc() && s.ptr == seed_text.data() + seed_text.size() &&
          !count_text.empty() && !seed_text.empty() && count >= 1 &&
          count <= 1'000'000) {
        parsed.kind = StartConfig::Kind::kRandom;
        parsed.count = static_cast<std::size_t>(count);
        parsed.seed = seed;
        return parsed;
      }
    }
    check.flag("u.format", at,
               "u must be \"zero\", \"random:<count>:<seed>\" or a list of points, got " +
                   describe(j));
    return std::nullopt;
  }
  if (!j.is_array() || j.empty()) {
    check.flag("u.format", at,
               "u must be \"zero\", \"random:<count>:<seed>\" or a nonempty list of points");
    return std::nullopt;
  }
  parsed.kind = StartConfig::Kind::kList;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string point_at = at + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].empty()) {
      check.flag("u.format", point_at, "each point must be a nonempty array of coordinates");
      ok = false;
      continue;
    }
    std::vector<double> coords;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const auto x = finite_number(j[i][k]);
      if (!x || *x < 0.0 || *x >= 1.0) {
        check.flag("u.range", point_at + "/" + std::to_string(k),
                   "coordinates must lie in [0, 1), got " + describe(j[i][k]));
        ok = false;
        continue;
      }
      coords.push_back(*x);
    }
    parsed.points.push_back(std::move(coords));
  }
  if (!ok) return std::nullopt;
  return parsed;
}

std::vector<double> parse_positive_list(const json& j, const std::string& key,
                                        bool increasing, Checker& check) {
  const std::string at = "/" + key;
  if (!j.is_array() || j.empty()) {
    check.flag(key + ".empty", at, key + " must be a nonempty array of numbers");
    return {};
  }
  std::vector<double> out;
  bool ok = true;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto x = finite_number(j[i]);
    if (!x || !(*x > 0.0)) {
      check.flag(key + ".positive", at + "/" + std::to_string(i),
                 key + " entries must be positive finite numbers, got " + describe(j[i]));
      ok = false;
      continue;
    }
    if (increasing && !out.empty() && *x <= out.back()) {
      check.flag(key + ".monotone", at + "/" + std::to_string(i),
                 key + " must be strictly increasing");
      ok = false;
    }
    out.push_back(*x);
  }
  return ok ? out : std::vector<double>{};
}

std::optional<RegionConfig> parse_region(const json& j, Checker& check) {
  const std::string at = "/region";
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    check.flag("region.kind", at, "region needs a kind: \"box\" or \"ball\"");
    return std::nullopt;
  }
  RegionConfig parsed;
  const auto kind = j["kind"].get<std::string>();
  const auto unknown = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        check.flag("region.unknown_field", at + "/" + escape_pointer_token(key),
                   "unknown field '" + key + "' in a " + kind + " region");
      }
    }
  };
  if (kind == "box") {
    unknown({"kind", "intervals"});
    if (!j.contains("intervals") || !j["intervals"].is_array() || j["intervals"].empty()) {
      check.flag("region.type", at, "a box region needs a nonempty intervals array");
      return std::nullopt;
    }
    bool ok = true;
    for (std::size_t i = 0; i < j["intervals"].size(); ++i) {
      const auto& item = j["intervals"][i];
      const std::string item_at = at + "/intervals/" + std::to_string(i);
      const auto lo = item.is_array() && item.size() == 2 ? finite_number(item[0]) : std::nullopt;
      const auto hi = item.is_array() && item.size() == 2 ? finite_number(item[1]) : std::nullopt;
      if (!lo || !hi) {
        check.flag("region.type", item_at, "an interval is a pair [a, b] of numbers");
        ok = false;
        continue;
      }
      if (*lo > *hi) {
        check.flag("region.interval", item_at,
                   "interval " + describe(item) + " has a > b");
        ok = false;
      } else if (*lo < 0.0 || *hi > 1.0) {
        check.flag("region.bounds", item_at,
                   "interval " + describe(item) + " leaves [0, 1]");
        ok = false;
      }
      parsed.intervals.push_back({*lo, *hi});
    }
    if (!ok) return std::nullopt;
    return parsed;
  }
  if (kind == "ball") {
    unknown({"kind", "center", "radius"});
    parsed.kind = JordanRegion::Kind::kBallCylinder;
    bool ok = true;
    if (!j.contains("center") || !j["center"].is_array() || j["center"].empty()) {
      check.flag("region.type", at, "a ball region needs a nonempty center array");
      ok = false;
    } else {
      for (std::size_t i = 0; i < j["center"].size(); ++i) {
        const auto x = finite_number(j["center"][i]);
        if (!x || *x < 0.0 || *x > 1.0) {
          check.flag("region.bounds", at + "/center/" + std::to_string(i),
                     "center coordinates must lie in [0, 1]");
          ok = false;
          continue;
        }
        parsed.center.push_back(*x);
      }
    }
    const auto r = j.contains("radius") ? finite_number(j["radius"]) : std::nullopt;
    if (!r || !(*r > 0.0)) {
      check.flag("region.radius", at + (j.contains("radius") ? "/radius" : ""),
                 "ball radius must be a positive number");
      ok = false;
    } else {
      parsed.radius = *r;
    }
    if (!ok) return std::nullopt;
    return parsed;
  }
  check.flag("region.kind", at + "/kind", "region kind must be \"box\" or \"ball\"");
  return std::nullopt;
}

void parse_tolerances(const json& j, ExperimentConfig& config, Checker& check) {
  const std::string at = "/tolerances";
  if (!j.is_object()) {
    check.flag("tolerances.type", at, "tolerances must be an object");
    return;
  }
  for (const auto& [key, value] : j.items()) {
    const auto x = finite_number(value);
    const std::string item_at = at + "/" + escape_pointer_token(key);
    if (key != "quadrature" && key != "independence") {
      check.flag("tolerances.unknown_field", item_at, "unknown tolerance '" + key + "'");
    } else if (!x || !(*x > 0.0)) {
      check.flag("tolerances." + key, item_at, "tolerance must be a positive number");
    } else if (key == "quadrature") {
      config.quadrature_tolerance = *x;
    } else {
      config.independence_tolerance = *x;
    }
  }
}

void parse_output(const json& j, ExperimentConfig& config, Checker& check) {
  const std::string at = "/output";
  if (!j.is_object()) {
    check.flag("output.type", at, "output must be an object");
    return;
  }
  for (const auto& [key, value] : j.items()) {
    const std::string item_at = at + "/" + escape_pointer_token(key);
    if (key == "format") {
      const auto f = value.is_string() ? value.get<std::string>() : "";
      if (f != "csv" && f != "json" && f != "both") {
        check.flag("output.format", item_at, "output.format must be csv, json or both");
      } else {
        config.output.format = f;
      }
    } else if (key == "dir") {
      if (!value.is_string() || value.get<std::string>().empty()) {
        check.flag("output.dir", item_at, "output.dir must be a nonempty string");
      } else {
        config.output.dir = value.get<std::string>();
      }
    } else if (key == "name") {
      const auto name = value.is_string() ? value.get<std::string>() : "";
      if (name.empty() || name.find_first_of("/\\") != std::string::npos ||
          name == "." || name == "..") {
        check.flag("output.name", item_at, "output.name must be a plain file stem");
      } else {
        config.output.name = name;
      }
    } else {
      check.flag("output.unknown_field", item_at, "unknown field '" + key + "' in output");
    }
  }
}

void check_dimensions(const ExperimentConfig& c, const json& doc, Checker& check) {
  if (!c.frequencies) return;
  const std::size_t d = c.frequencies->d;
  if (c.function && c.function->max_support() > d) {
    check.flag("function.support", "/function",
               "function touches coordinate " + std::to_string(c.function->max_support()) +
                   " but only " + std::to_string(d) + " frequencies are configured");
  }
  if (c.u && c.u->kind == StartConfig::Kind::kList) {
    for (std::size_t i = 0; i < c.u->points.size(); ++i) {
      if (c.u->points[i].size() != d) {
        check.flag("u.dimension", "/u/" + std::to_string(i),
                   "point has " + std::to_string(c.u->points[i].size()) +
                       " coordinates, expected " + std::to_string(d));
      }
    }
  }
  if (c.region && c.region->dim() > d) {
    check.flag("region.dimension", "/region",
               "region constrains " + std::to_string(c.region->dim()) +
                   " coordinates but d = " + std::to_string(d));
  }
  if (doc.contains("N") && c.N > d) {
    check.flag("N.range", "/N", "N must not exceed d = " + std::to_string(d));
  }
}

}  // namespace

std::string_view experiment_name(Experiment e) noexcept {
  for (const auto& [value, name] : kExperiments) {
    if (value == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) noexcept {
  for (const auto& [value, text] : kExperiments) {
    if (text == name) return value;
  }
  return std::nullopt;
}

FrequencySequence FrequencyConfig::resolve() const {
  if (family != FrequencyFamily::kExplicit) return FrequencySequence::generate(family, d);
  std::vector<double> out;
  for (const auto& token : values) {
    const auto value = token_value(token);
    if (!value) throw InvalidInput("malformed frequency value");
    out.push_back(*value);
  }
  return FrequencySequence::explicit_values(std::move(out));
}

std::vector<TorusPoint> StartConfig::resolve(std::size_t d) const {
  std::vector<TorusPoint> out;
  switch (kind) {
    case Kind::kZero:
      out.push_back(TorusPoint::zero(d));
      break;
    case Kind::kRandom: {
      std::mt19937_64 engine(seed);
      for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> coords(d);
        for (auto& x : coords) x = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        out.emplace_back(std::move(coords));
      }
      break;
    }
    case Kind::kList:
      for (const auto& p : points) out.emplace_back(p);
      break;
  }
  return out;
}

JordanRegion RegionConfig::resolve() const {
  return kind == JordanRegion::Kind::kBox ? JordanRegion::box(intervals)
                                          : JordanRegion::ball(center, radius);
}

bool operator==(const RegionConfig& a, const RegionConfig& b) {
  const auto same = [](const Interval& x, const Interval& y) {
    return x.lo == y.lo && x.hi == y.hi;
  };
  return a.kind == b.kind && a.center == b.center && a.radius == b.radius &&
         std::equal(a.intervals.begin(), a.intervals.end(), b.intervals.begin(),
                    b.intervals.end(), same);
}

ParsedConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ParsedConfig result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line =
        1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
    result.violations.push_back({"config.syntax", "", e.what(), line});
    return result;
  }

  Checker check;
  ExperimentConfig config;
  if (!doc.is_object()) {
    check.flag("config.type", "", "a config must be a JSON object");
    result.violations = std::move(check.violations);
    result.violations.front().line = 1;
    return result;
  }

  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end()) {
      check.flag("config.unknown_field", "/" + escape_pointer_token(key),
                 "unknown field '" + key + "'");
    }
  }

  std::optional<FieldRules> rules;
  if (!doc.contains("experiment")) {
    check.flag("experiment.required", "", "experiment is required");
  } else if (const auto e = doc["experiment"].is_string()
                                ? parse_experiment(doc["experiment"].get<std::string>())
                                : std::nullopt) {
    config.experiment = *e;
    rules = rules_for(*e);
  } else {
    check.flag("experiment.unknown", "/experiment",
               "experiment must be one of weyl, kronecker, ergodic, select_rk, "
               "independence, discrepancy, chebyshev");
  }

  if (rules) {
    for (const auto& key : kKnownKeys) {
      if (doc.contains(key) && !rules->allowed.contains(key)) {
        check.flag(key + ".unused", "/" + key,
                   key + " does not apply to the " +
                       std::string(experiment_name(config.experiment)) + " experiment");
      } else if (!doc.contains(key) && rules->required.contains(key)) {
        check.flag(key + ".required", "",
                   key + " is required by the " +
                       std::string(experiment_name(config.experiment)) + " experiment");
      }
    }
  }

  if (doc.contains("seed")) {
    if (const auto seed = as_count(doc["seed"])) config.seed = *seed;
    else check.flag("seed.type", "/seed", "seed must be a non-negative 64-bit integer");
  }
  if (doc.contains("frequencies")) config.frequencies = parse_frequencies(doc["frequencies"], check);
  if (doc.contains("function")) config.function = parse_function(doc["function"], base_dir, check);
  if (doc.contains("u")) config.u = parse_start(doc["u"], check);
  if (doc.contains("T_grid")) {
    config.T_grid = parse_positive_list(doc["T_grid"], "T_grid", true, check);
  }
  if (doc.contains("region")) config.region = parse_region(doc["region"], check);
  if (doc.contains("method")) {
    const auto m = doc["method"].is_string() ? doc["method"].get<std::string>() : "";
    if (m != "analytic" && m != "quadrature") {
      check.flag("method.value", "/method", "method must be analytic or quadrature");
    } else {
      config.method = m;
    }
  }
  if (doc.contains("tolerances")) parse_tolerances(doc["tolerances"], config, check);
  if (doc.contains("coeff_bound")) {
    if (auto v = integer_field(doc, "coeff_bound", 1, 20, check)) {
      config.coeff_bound = static_cast<int>(*v);
    }
  }
  if (doc.contains("K")) {
    if (auto v = integer_field(doc, "K", 1, 64, check)) config.K = *v;
  }
  if (doc.contains("ranks")) {
    const auto& r = doc["ranks"];
    if (doc.contains("K")) {
      check.flag("ranks.conflict", "/ranks", "give either K or ranks, not both");
    }
    if (!r.is_array() || r.empty()) {
      check.flag("ranks.type", "/ranks", "ranks must be a nonempty array of integers");
    } else {
      for (std::size_t i = 0; i < r.size(); ++i) {
        const auto v = as_count(r[i]);
        if (!v || *v < 1) {
          check.flag("ranks.type", "/ranks/" + std::to_string(i),
                     "ranks must be positive integers");
        } else if (!config.ranks.empty() && *v <= config.ranks.back()) {
          check.flag("ranks.monotone", "/ranks/" + std::to_string(i),
                     "ranks must be strictly increasing");
        } else {
          config.ranks.push_back(static_cast<std::size_t>(*v));
        }
      }
    }
  }
  if (doc.contains("thresholds")) {
    config.thresholds = parse_positive_list(doc["thresholds"], "thresholds", false, check);
  }
  if (doc.contains("samples")) {
    if (auto v = integer_field(doc, "samples", 2, 1'000'000'000, check)) config.samples = *v;
  }
  if (doc.contains("grid_resolution")) {
    if (auto v = integer_field(doc, "grid_resolution", 1, 10'000, check)) {
      config.grid_resolution = *v;
    }
  }
  if (doc.contains("N")) {
    if (auto v = integer_field(doc, "N", 1, 64, check)) config.N = *v;
  }
  if (doc.contains("output")) parse_output(doc["output"], config, check);

  if (config.experiment == Experiment::kChebyshev && rules) {
    const int time_side = doc.contains("frequencies") + doc.contains("u") + doc.contains("T_grid");
    if (time_side != 0 && time_side != 3) {
      check.flag("chebyshev.time_side", "",
                 "the time-side check needs frequencies, u and T_grid together");
    }
  }
  check_dimensions(config, doc, check);

  if (check.violations.empty()) {
    if (config.output.name.empty()) config.output.name = experiment_name(config.experiment);
    if (config.experiment == Experiment::kDiscrepancy && config.N == 0) {
      config.N = config.frequencies->d;
    }
    if (config.experiment != Experiment::kDiscrepancy) config.N = 0;
    result.config = std::move(config);
    return result;
  }
  const auto lines = value_lines(text);
  for (auto& v : check.violations) v.line = line_of(lines, v.pointer);
  result.violations = std::move(check.violations);
  return result;
}

ParsedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in || std::filesystem::is_directory(path)) {
    ParsedConfig result;
    result.violations.push_back(
        {"config.missing", "", "cannot read config file " + path.string(), 0});
    return result;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

ordered_json to_json(const ExperimentConfig& c, bool with_output_dir) {
  const auto rules = rules_for(c.experiment);
  const auto allowed = [&](const char* key) { return rules.allowed.contains(key); };
  ordered_json doc;
  doc["experiment"] = experiment_name(c.experiment);
  doc["seed"] = c.seed;
  if (c.frequencies) {
    ordered_json f;
    f["family"] = family_name(c.frequencies->family);
    if (c.frequencies->family == FrequencyFamily::kExplicit) {
      f["values"] = ordered_json::array();
      for (const auto& token : c.frequencies->values) {
        std::visit([&](const auto& v) { f["values"].push_back(v); }, token);
      }
    } else {
      f["d"] = c.frequencies->d;
    }
    doc["frequencies"] = std::move(f);
  }
  if (c.function) doc["function"] = ordered_json::parse(series_to_json(*c.function));
  if (c.u) {
    switch (c.u->kind) {
      case StartConfig::Kind::kZero: doc["u"] = "zero"; break;
      case StartConfig::Kind::kRandom:
        doc["u"] = "random:" + std::to_string(c.u->count) + ":" + std::to_string(c.u->seed);
        break;
      case StartConfig::Kind::kList: doc["u"] = c.u->points; break;
    }
  }
  if (!c.T_grid.empty()) doc["T_grid"] = c.T_grid;
  if (c.region) {
    ordered_json r;
    if (c.region->kind == JordanRegion::Kind::kBox) {
      r["kind"] = "box";
      r["intervals"] = ordered_json::array();
      for (const auto& iv : c.region->intervals) r["intervals"].push_back({iv.lo, iv.hi});
    } else {
      r["kind"] = "ball";
      r["center"] = c.region->center;
      r["radius"] = c.region->radius;
    }
    doc["region"] = std::move(r);
  }
  if (allowed("method")) doc["method"] = c.method;
  doc["tolerances"] = {{"quadrature", c.quadrature_tolerance},
                       {"independence", c.independence_tolerance}};
  if (allowed("coeff_bound")) doc["coeff_bound"] = c.coeff_bound;
  if (allowed("ranks") && !c.ranks.empty()) {
    doc["ranks"] = c.ranks;
  } else if (allowed("K")) {
    doc["K"] = c.K;
  }
  if (allowed("thresholds")) doc["thresholds"] = c.thresholds;
  if (allowed("samples")) doc["samples"] = c.samples;
  if (allowed("grid_resolution")) doc["grid_resolution"] = c.grid_resolution;
  if (allowed("N")) doc["N"] = c.N;
  ordered_json out{{"format", c.output.format}};
  if (with_output_dir) out["dir"] = c.output.dir;
  out["name"] = c.output.name;
  doc["output"] = std::move(out);
  return doc;
}

}  // namespace ergotor::cli
