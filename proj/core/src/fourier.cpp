#include "ergotor/fourier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "ergotor/errors.hpp"
#include "ergotor/phase.hpp"
#include "json.hpp"

namespace ergotor {

namespace {

constexpr double kDropBelow = 1e-300;

void normalize(std::vector<MultiIndex::Entry>& entries) {
  std::sort(entries.begin(), entries.end());
  std::vector<MultiIndex::Entry> merged;
  for (const auto& [coord, value] : entries) {
    if (coord == 0) throw InvalidInput("multi-index coordinates are 1-based");
    if (!merged.empty() && merged.back().first == coord) {
      throw InvalidInput("duplicate coordinate " + std::to_string(coord) +
                         " in multi-index");
    }
    merged.emplace_back(coord, value);
  }
  std::erase_if(merged, [](const auto& e) { return e.second == 0; });
  entries = std::move(merged);
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<Entry> entries)
    : MultiIndex(std::vector<Entry>(entries)) {}

MultiIndex::MultiIndex(std::vector<Entry> entries) : entries_(std::move(entries)) {
  normalize(entries_);
}

MultiIndex MultiIndex::unit(std::size_t k, std::int64_t m) {
  return MultiIndex({{k, m}});
}

MultiIndex MultiIndex::dense(std::span<const std::int64_t> values) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0) entries.emplace_back(i + 1, values[i]);
  }
  return MultiIndex(std::move(entries));
}

std::int64_t MultiIndex::operator[](std::size_t coord) const noexcept {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), coord,
      [](const Entry& e, std::size_t c) { return e.first < c; });
  return (it != entries_.end() && it->first == coord) ? it->second : 0;
}

std::int64_t MultiIndex::max_abs() const noexcept {
  std::int64_t m = 0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e.second));
  return m;
}

double MultiIndex::dot(std::span<const double> x) const {
  if (support() > x.size()) {
    throw InvalidInput("multi-index " + to_string() + " needs " +
                       std::to_string(support()) + " coordinates, got " +
                       std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const auto& [coord, value] : entries_) {
    sum += static_cast<double>(value) * x[coord - 1];
  }
  return sum;
}

MultiIndex MultiIndex::operator-() const {
  MultiIndex out = *this;
  for (auto& e : out.entries_) e.second = -e.second;
  return out;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  std::vector<MultiIndex::Entry> sum(a.entries_.begin(), a.entries_.end());
  for (const auto& [coord, value] : b.entries_) {
    auto it = std::find_if(sum.begin(), sum.end(),
                           [c = coord](const auto& e) { return e.first == c; });
    if (it != sum.end()) {
      it->second += value;
    } else {
      sum.emplace_back(coord, value);
    }
  }
  return MultiIndex(std::move(sum));
}

MultiIndex MultiIndex::permuted(const FinitePermutation& sigma) const {
  // entry at coordinate j lands on sigma^{-1}(j)
  const FinitePermutation inverse = sigma.inverse();
  std::vector<Entry> moved;
  moved.reserve(entries_.size());
  for (const auto& [coord, value] : entries_) {
    moved.emplace_back(inverse(coord - 1) + 1, value);
  }
  return MultiIndex(std::move(moved));
}

std::string MultiIndex::to_string() const {
  if (entries_.empty()) return "0";
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i].first) + ':' +
           std::to_string(entries_[i].second);
  }
  return out + ')';
}

FourierSeries::FourierSeries(std::initializer_list<Term> terms)
    : FourierSeries(std::vector<Term>(terms)) {}

FourierSeries::FourierSeries(std::vector<Term> terms) {
  for (auto& [index, a] : terms) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InvalidInput("non-finite coefficient at " + index.to_string());
    }
    terms_[index] += a;
  }
  std::erase_if(terms_, [](const auto& t) { return std::abs(t.second) < kDropBelow; });
}

std::size_t FourierSeries::max_support() const noexcept {
  std::size_t s = 0;
  for (const auto& [index, a] : terms_) s = std::max(s, index.support());
  return s;
}

Complex FourierSeries::coefficient(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

FourierSeries operator+(const FourierSeries& a, const FourierSeries& b) {
  std::vector<FourierSeries::Term> terms(a.terms_.begin(), a.terms_.end());
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return FourierSeries(std::move(terms));
}

FourierSeries operator-(const FourierSeries& a, const FourierSeries& b) {
  return a + Complex{-1.0, 0.0} * b;
}

FourierSeries operator*(Complex scale, const FourierSeries& f) {
  std::vector<FourierSeries::Term> terms;
  terms.reserve(f.size());
  for (const auto& [index, a] : f.terms_) terms.emplace_back(index, scale * a);
  return FourierSeries(std::move(terms));
}

Complex evaluate(const FourierSeries& f, const TorusPoint& theta) {
  if (f.max_support() > theta.dim()) {
    throw InvalidInput("evaluate: series touches coordinate " +
                       std::to_string(f.max_support()) + " but point has " +
                       std::to_string(theta.dim()));
  }
  Complex sum{};
  for (const auto& [index, a] : f.terms()) {
    sum += a * unit_phase(index.dot(theta.coords()));
  }
  return sum;
}

FourierSeries partial_sum(const FourierSeries& f, std::size_t r) {
  return rank_window(f, 0, r);
}

FourierSeries rank_window(const FourierSeries& f, std::size_t lo,
                          std::size_t hi) {
  std::vector<FourierSeries::Term> kept;
  for (const auto& [index, a] : f.terms()) {
    const std::size_t s = index.support();
    const bool inside = (lo == 0 && s == 0) || (s > lo && s <= hi);
    if (inside) kept.emplace_back(index, a);
  }
  return FourierSeries(std::move(kept));
}

FourierSeries apply_permutation(const FinitePermutation& sigma,
                                const FourierSeries& f) {
  std::vector<FourierSeries::Term> moved;
  moved.reserve(f.size());
  for (const auto& [index, a] : f.terms()) {
    moved.emplace_back(index.permuted(sigma), a);
  }
  return FourierSeries(std::move(moved));
}

Complex space_average(const FourierSeries& f) {
  return f.coefficient(MultiIndex{});
}

double l2_norm_squared(const FourierSeries& f) {
  double sum = 0.0;
  for (const auto& [index, a] : f.terms()) sum += std::norm(a);
  return sum;
}

double l2_tail(const FourierSeries& f, std::size_t r) {
  double sum = 0.0;
  for (const auto& [index, a] : f.terms()) {
    if (index.support() > r) sum += std::norm(a);
  }
  return sum;
}

JInfinityReport is_j_infinity(const FourierSeries& f, std::size_t r) {
  if (r < 1) throw InvalidInput("is_j_infinity: rank must be positive");
  JInfinityReport report;
  report.rank = r;
  report.member = true;
  for (const auto& [index, a] : f.terms()) {
    if (index.support() <= r) {
      report.l1_mass += std::abs(a);
      report.box = std::max(report.box, index.max_abs());
    }
  }
  return report;
}

namespace {

// l1 mass of rule coefficients over the dense box [-box, box]^rank.
double box_mass(const CoefficientRule& rule, std::size_t rank,
                std::int64_t box) {
  std::vector<std::int64_t> m(rank, -box);
  double sum = 0.0;
  while (true) {
    sum += std::abs(rule.coefficient(MultiIndex::dense(m)));
    std::size_t i = 0;
    while (i < rank && m[i] == box) m[i++] = -box;
    if (i == rank) break;
    ++m[i];
  }
  return sum;
}

}  // namespace

JInfinityReport is_j_infinity(const CoefficientRule& rule, std::size_t r,
                              const RuleSumOptions& options) {
  if (r < 1) throw InvalidInput("is_j_infinity: rank must be positive");
  if (!rule.coefficient) throw InvalidInput("rule has no coefficient function");
  if (!rule.l1_tail) {
    throw Indeterminate("rule-generated series declares no tail bound");
  }
  const auto terms_in = [r](std::int64_t box) {
    return std::pow(2.0 * static_cast<double>(box) + 1.0, static_cast<double>(r));
  };

  JInfinityReport report;
  report.rank = r;
  std::int64_t box = 1;
  while (true) {
    auto tail = rule.l1_tail(r, box);
    if (!tail) {
      throw Indeterminate("rule declares no tail bound at rank " +
                          std::to_string(r) + ", box " + std::to_string(box));
    }
    if (tail->divergent || !std::isfinite(tail->l1)) {
      report.member = false;
      report.l1_mass = std::numeric_limits<double>::infinity();
      report.tail_bound = std::numeric_limits<double>::infinity();
      report.box = box;
      return report;
    }
    const bool refined = tail->l1 <= options.tail_tolerance;
    const bool budget_left =
        terms_in(2 * box) <= static_cast<double>(options.max_terms);
    if (refined || !budget_left) {
      report.member = true;
      report.l1_mass = box_mass(rule, r, box);
      report.tail_bound = tail->l1;
      report.box = box;
      return report;
    }
    box *= 2;
  }
}

RkSchedule RkSchedule::from_ranks(const FourierSeries& f,
                                  std::vector<std::size_t> ranks) {
  if (ranks.empty()) throw InvalidInput("schedule needs at least one rank");
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k] < 1 || (k > 0 && ranks[k] <= ranks[k - 1])) {
      throw InvalidInput("schedule ranks must be positive and strictly increasing");
    }
  }
  RkSchedule schedule;
  for (std::size_t k = 1; k < ranks.size(); ++k) {
    schedule.tail_bounds.push_back(
        l2_norm_squared(rank_window(f, ranks[k - 1], ranks[k])));
  }
  schedule.ranks = std::move(ranks);
  return schedule;
}

double RkSchedule::decay_limit(std::size_t k) {
  return std::ldexp(1.0, -2 * static_cast<int>(k));
}

bool RkSchedule::satisfies_decay() const {
  for (std::size_t i = 0; i < tail_bounds.size(); ++i) {
    if (tail_bounds[i] > decay_limit(i + 2)) return false;
  }
  return true;
}

RkSchedule select_rk(const FourierSeries& f, std::size_t K) {
  if (K < 2) throw InvalidInput("select_rk: K must be at least 2");
  const std::size_t top = f.max_support() + K;

  // mass[s]: squared coefficients of the terms with support exactly s
  std::vector<double> mass(top + 1, 0.0);
  for (const auto& [index, a] : f.terms()) mass[index.support()] += std::norm(a);

  // feasible[k][r]: positions k+1..K can follow r_k = r (k zero-based)
  std::vector<std::vector<char>> feasible(K, std::vector<char>(top + 1, 0));
  std::fill(feasible[K - 1].begin(), feasible[K - 1].end(), 1);
  for (std::size_t k = K - 1; k-- > 0;) {
    const double limit = RkSchedule::decay_limit(k + 2);
    for (std::size_t r = 1; r <= top; ++r) {
      double window = 0.0;
      for (std::size_t next = r + 1; next <= top; ++next) {
        window += mass[next];
        if (window > limit) break;
        if (feasible[k + 1][next]) {
          feasible[k][r] = 1;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> ranks;
  std::size_t r = 1;
  while (!feasible[0][r]) ++r;
  ranks.push_back(r);
  for (std::size_t k = 1; k < K; ++k) {
    const double limit = RkSchedule::decay_limit(k + 1);
    double window = 0.0;
    std::size_t next = ranks.back() + 1;
    for (;; ++next) {
      window += mass[next];
      if (window <= limit && feasible[k][next]) break;
    }
    ranks.push_back(next);
  }
  return RkSchedule::from_ranks(f, std::move(ranks));
}

double majorant_g(const FourierSeries& f, const RkSchedule& schedule,
                  const TorusPoint& theta) {
  if (schedule.ranks.empty()) throw InvalidInput("majorant_g: empty schedule");
  const std::size_t needed =
      partial_sum(f, schedule.ranks.back()).max_support();
  if (needed > theta.dim()) {
    throw InvalidInput("majorant_g: point has " + std::to_string(theta.dim()) +
                       " coordinates, schedule needs " + std::to_string(needed));
  }
  double g = std::abs(evaluate(partial_sum(f, schedule.ranks.front()), theta));
  for (std::size_t m = 1; m < schedule.ranks.size(); ++m) {
    g += std::abs(evaluate(
        rank_window(f, schedule.ranks[m - 1], schedule.ranks[m]), theta));
  }
  return g;
}

std::vector<double> schedule_window_norms(const FourierSeries& f,
                                          const RkSchedule& schedule) {
  std::vector<double> norms;
  if (schedule.ranks.empty()) return norms;
  norms.push_back(std::sqrt(l2_norm_squared(partial_sum(f, schedule.ranks[0]))));
  for (std::size_t m = 1; m < schedule.ranks.size(); ++m) {
    norms.push_back(std::sqrt(l2_norm_squared(
        rank_window(f, schedule.ranks[m - 1], schedule.ranks[m]))));
  }
  return norms;
}

std::string series_to_json(const FourierSeries& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [index, a] : f.terms()) {
    nlohmann::json idx = nlohmann::json::object();
    for (const auto& [coord, value] : index.entries()) {
      idx[std::to_string(coord)] = value;
    }
    terms.push_back({{"index", idx}, {"re", a.real()}, {"im", a.imag()}});
  }
  return nlohmann::json{{"terms", terms}}.dump();
}

FourierSeries series_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("series JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array()) {
    throw InvalidInput("series JSON: expected an object with a 'terms' array");
  }
  std::vector<FourierSeries::Term> terms;
  for (std::size_t i = 0; i < doc["terms"].size(); ++i) {
    const auto& t = doc["terms"][i];
    const std::string where = "series JSON: terms[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("index") || !t["index"].is_object()) {
      throw InvalidInput(where + ": missing 'index' object");
    }
    std::vector<MultiIndex::Entry> entries;
    for (const auto& [key, value] : t["index"].items()) {
      std::size_t coord = 0;
      auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), coord);
      if (ec != std::errc{} || ptr != key.data() + key.size() || coord == 0) {
        throw InvalidInput(where + ": coordinate key '" + key +
                           "' is not a positive decimal integer");
      }
      if (!value.is_number_integer()) {
        throw InvalidInput(where + ": index entry '" + key + "' is not an integer");
      }
      entries.emplace_back(coord, value.get<std::int64_t>());
    }
    const auto number = [&](const char* name) {
      if (!t.contains(name)) return 0.0;
      if (!t[name].is_number()) throw InvalidInput(where + ": '" + name + "' is not a number");
      return t[name].get<double>();
    };
    terms.emplace_back(MultiIndex(std::move(entries)),
                       Complex{number("re"), number("im")});
  }
  return FourierSeries(std::move(terms));
}

}  // namespace ergotor
