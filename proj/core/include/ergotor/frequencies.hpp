#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ergotor {

enum class FrequencyFamily {
  kSqrtSquarefree,  // sqrt(2), sqrt(3), sqrt(5), sqrt(6), ...
  kLogPrimes,       // log 2, log 3, log 5, ...
  kExplicit,
};

std::string_view family_name(FrequencyFamily family) noexcept;
FrequencyFamily parse_family(std::string_view name);

/// Strictly increasing positive frequencies (lambda_1 < ... < lambda_d).
/// Values for the generated families are a pure function of (family, d).
class FrequencySequence {
 public:
  static FrequencySequence generate(FrequencyFamily family, std::size_t d);
  static FrequencySequence explicit_values(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  FrequencyFamily family() const noexcept { return family_; }

  friend bool operator==(const FrequencySequence&,
                         const FrequencySequence&) = default;

 private:
  FrequencySequence(FrequencyFamily family, std::vector<double> values)
      : family_(family), values_(std::move(values)) {}

  FrequencyFamily family_;
  std::vector<double> values_;
};

/// The first `count` squarefree integers greater than one.
std::vector<std::uint64_t> squarefree_integers(std::size_t count);
std::vector<std::uint64_t> primes(std::size_t count);

struct IndependenceReport {
  double min_combination = 0.0;
  /// Normalized so its first nonzero entry is positive.
  std::vector<std::int64_t> witness;
  int coeff_bound = 0;
  double tolerance = 0.0;
  bool passed = false;
  std::uint64_t vectors_checked = 0;
};

struct IndependenceLimits {
  std::size_t max_dimension = 6;
  int max_coeff_bound = 20;
  std::uint64_t max_vectors = 200'000'000;
};

/// Exhaustive search for the smallest |<c, lambda>| over nonzero integer
/// vectors with |c_i| <= coeff_bound. Integer-valued frequencies are summed
/// in exact integer arithmetic, so rational relations among them report 0.
IndependenceReport check_independence(const FrequencySequence& lambda,
                                      int coeff_bound, double tolerance,
                                      const IndependenceLimits& limits = {});

}  // namespace ergotor
