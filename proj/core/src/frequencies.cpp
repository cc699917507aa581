#include "ergotor/frequencies.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ergotor/errors.hpp"

namespace ergotor {

std::string_view family_name(FrequencyFamily family) noexcept {
  switch (family) {
    case FrequencyFamily::kSqrtSquarefree:
      return "sqrt_squarefree";
    case FrequencyFamily::kLogPrimes:
      return "log_primes";
    case FrequencyFamily::kExplicit:
      return "explicit";
  }
  return "unknown";
}

FrequencyFamily parse_family(std::string_view name) {
  if (name == "sqrt_squarefree") return FrequencyFamily::kSqrtSquarefree;
  if (name == "log_primes") return FrequencyFamily::kLogPrimes;
  if (name == "explicit") return FrequencyFamily::kExplicit;
  throw InvalidInput("unknown frequency family '" + std::string(name) + "'");
}

std::vector<std::uint64_t> squarefree_integers(std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    bool squarefree = true;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
      if (n % (p * p) == 0) {
        squarefree = false;
        break;
      }
    }
    if (squarefree) out.push_back(n);
  }
  return out;
}

std::vector<std::uint64_t> primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t n = 2; out.size() < count; ++n) {
    bool prime = true;
    for (std::uint64_t p : out) {
      if (p * p > n) break;
      if (n % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

FrequencySequence FrequencySequence::generate(FrequencyFamily family,
                                              std::size_t d) {
  if (d < 1) throw InvalidInput("frequency count must be at least 1");
  std::vector<double> values;
  values.reserve(d);
  switch (family) {
    case FrequencyFamily::kSqrtSquarefree:
      for (auto n : squarefree_integers(d)) {
        values.push_back(std::sqrt(static_cast<double>(n)));
      }
      break;
    case FrequencyFamily::kLogPrimes:
      for (auto p : primes(d)) {
        values.push_back(std::log(static_cast<double>(p)));
      }
      break;
    case FrequencyFamily::kExplicit:
      throw InvalidInput("explicit frequencies need values, not a count");
  }
  return FrequencySequence(family, std::move(values));
}

FrequencySequence FrequencySequence::explicit_values(
    std::vector<double> values) {
  if (values.empty()) throw InvalidInput("frequency count must be at least 1");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw InvalidInput("frequency " + std::to_string(i + 1) +
                         " must be finite and positive");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw InvalidInput("frequencies must be strictly increasing (index " +
                         std::to_string(i + 1) + ")");
    }
  }
  return FrequencySequence(FrequencyFamily::kExplicit, std::move(values));
}

namespace {

constexpr double kExactIntegerLimit = 1099511627776.0;  // 2^40

template <typename Sum>
class RelationSearch {
 public:
  RelationSearch(std::vector<Sum> lambda, int bound)
      : lambda_(std::move(lambda)),
        bound_(bound),
        current_(lambda_.size(), 0),
        best_(std::numeric_limits<Sum>::max()) {}

  void run() { visit(0, Sum{0}, false); }

  Sum best() const { return best_; }
  const std::vector<std::int64_t>& witness() const { return witness_; }
  std::uint64_t checked() const { return checked_; }

 private:
  // Only vectors whose first nonzero entry is positive are visited; c and -c
  // give the same modulus.
  void visit(std::size_t i, Sum partial, bool nonzero) {
    if (i == lambda_.size()) {
      if (!nonzero) return;
      ++checked_;
      Sum value = partial < Sum{0} ? -partial : partial;
      if (value < best_) {
        best_ = value;
        witness_ = current_;
      }
      return;
    }
    const int lo = nonzero ? -bound_ : 0;
    for (int c = lo; c <= bound_; ++c) {
      current_[i] = c;
      visit(i + 1, partial + static_cast<Sum>(c) * lambda_[i], nonzero || c != 0);
    }
    current_[i] = 0;
  }

  std::vector<Sum> lambda_;
  int bound_;
  std::vector<std::int64_t> current_;
  Sum best_;
  std::vector<std::int64_t> witness_;
  std::uint64_t checked_ = 0;
};

}  // namespace

IndependenceReport check_independence(const FrequencySequence& lambda,
                                      int coeff_bound, double tolerance,
                                      const IndependenceLimits& limits) {
  if (coeff_bound < 1) throw InvalidInput("coeff_bound must be positive");
  if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be positive");

  const std::size_t d = lambda.size();
  const auto suggest = [&] {
    return " (try d <= " + std::to_string(limits.max_dimension) +
           ", coeff_bound <= " + std::to_string(limits.max_coeff_bound) + ")";
  };
  if (d > limits.max_dimension || coeff_bound > limits.max_coeff_bound) {
    throw BudgetError("independence search over d=" + std::to_string(d) +
                      ", coeff_bound=" + std::to_string(coeff_bound) +
                      " exceeds limits" + suggest());
  }
  double total = std::pow(2.0 * coeff_bound + 1.0, static_cast<double>(d));
  if (total > static_cast<double>(limits.max_vectors)) {
    int fit = coeff_bound;
    while (fit > 1 && std::pow(2.0 * fit + 1.0, static_cast<double>(d)) >
                          static_cast<double>(limits.max_vectors)) {
      --fit;
    }
    throw BudgetError("independence search needs " +
                      std::to_string(static_cast<std::uint64_t>(total)) +
                      " vectors, budget is " +
                      std::to_string(limits.max_vectors) +
                      "; suggested coeff_bound <= " + std::to_string(fit));
  }

  IndependenceReport report;
  report.coeff_bound = coeff_bound;
  report.tolerance = tolerance;

  bool integral = true;
  for (double v : lambda.values()) {
    if (v != std::floor(v) || v > kExactIntegerLimit) integral = false;
  }
  if (integral) {
    std::vector<std::int64_t> ints;
    for (double v : lambda.values()) ints.push_back(static_cast<std::int64_t>(v));
    RelationSearch<std::int64_t> search(std::move(ints), coeff_bound);
    search.run();
    report.min_combination = static_cast<double>(search.best());
    report.witness = search.witness();
    report.vectors_checked = search.checked();
  } else {
    std::vector<long double> wide(lambda.values().begin(),
                                  lambda.values().end());
    RelationSearch<long double> search(std::move(wide), coeff_bound);
    search.run();
    report.min_combination = static_cast<double>(search.best());
    report.witness = search.witness();
    report.vectors_checked = search.checked();
  }
  report.passed = report.min_combination > tolerance;
  return report;
}

}  // namespace ergotor
