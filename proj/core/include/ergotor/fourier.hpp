#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ergotor/torus.hpp"

namespace ergotor {

using Complex = std::complex<double>;

/// Integer vector with finitely many nonzero entries. Coordinates are
/// one-based, matching the serialized form; only nonzero entries are stored,
/// sorted by coordinate.
class MultiIndex {
 public:
  using Entry = std::pair<std::size_t, std::int64_t>;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<Entry> entries);
  explicit MultiIndex(std::vector<Entry> entries);

  /// m * e_k.
  static MultiIndex unit(std::size_t k, std::int64_t m = 1);
  /// Coordinates 1..values.size() taken from `values`.
  static MultiIndex dense(std::span<const std::int64_t> values);

  bool is_zero() const noexcept { return entries_.empty(); }
  /// Largest coordinate with a nonzero entry, 0 for the zero index.
  std::size_t support() const noexcept {
    return entries_.empty() ? 0 : entries_.back().first;
  }
  std::int64_t operator[](std::size_t coord) const noexcept;
  std::span<const Entry> entries() const noexcept { return entries_; }
  /// max_j |m_j|.
  std::int64_t max_abs() const noexcept;

  /// sum_j m_j x_{j-1}; `x` must cover support().
  double dot(std::span<const double> x) const;

  MultiIndex operator-() const;
  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

  /// Index moved along with a permuted point: (sigma m)_i = m_{sigma(i)},
  /// so that <sigma m, sigma theta> = <m, theta>.
  MultiIndex permuted(const FinitePermutation& sigma) const;

  /// "0" or "(1:2,3:-1)".
  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Finitely supported Fourier series sum a(m) e^{2 pi i <m, theta>}.
/// Immutable once built; duplicate indices are summed and coefficients with
/// modulus below 1e-300 are dropped.
class FourierSeries {
 public:
  using Term = std::pair<MultiIndex, Complex>;

  FourierSeries() = default;
  FourierSeries(std::initializer_list<Term> terms);
  explicit FourierSeries(std::vector<Term> terms);

  const std::map<MultiIndex, Complex>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  /// Largest coordinate touched by any term.
  std::size_t max_support() const noexcept;
  Complex coefficient(const MultiIndex& m) const;

  friend FourierSeries operator+(const FourierSeries& a, const FourierSeries& b);
  friend FourierSeries operator-(const FourierSeries& a, const FourierSeries& b);
  friend FourierSeries operator*(Complex scale, const FourierSeries& f);

  friend bool operator==(const FourierSeries&, const FourierSeries&) = default;

 private:
  std::map<MultiIndex, Complex> terms_;
};

Complex evaluate(const FourierSeries& f, const TorusPoint& theta);

/// f_r: the terms whose support lies in {1, ..., r}.
FourierSeries partial_sum(const FourierSeries& f, std::size_t r);

/// Terms with lo < support <= hi, i.e. f_hi - f_lo.
FourierSeries rank_window(const FourierSeries& f, std::size_t lo,
                          std::size_t hi);

/// sigma f, defined so that evaluate(sigma f, sigma theta) = evaluate(f, theta).
FourierSeries apply_permutation(const FinitePermutation& sigma,
                                const FourierSeries& f);

/// a(0), the mean of f under the product measure.
Complex space_average(const FourierSeries& f);

double l2_norm_squared(const FourierSeries& f);

/// Sum of |a(m)|^2 over indices whose support is not inside {1, ..., r}, i.e.
/// the squared norm of f - partial_sum(f, r). At r = 0 only a(0) is left out.
double l2_tail(const FourierSeries& f, std::size_t r);

struct JInfinityReport {
  std::size_t rank = 0;
  /// l1 mass over indices supported in {1..rank}; +inf when divergent.
  double l1_mass = 0.0;
  /// Certified bound on the mass not yet included in l1_mass.
  double tail_bound = 0.0;
  bool member = false;
  /// Coefficient box |m_j| <= box that was summed (0 for finite series).
  std::int64_t box = 0;
};

JInfinityReport is_j_infinity(const FourierSeries& f, std::size_t r);

/// Certified statement about the l1 mass outside a coefficient box.
struct TailBound {
  double l1 = 0.0;
  bool divergent = false;
};

/// A series with infinitely many terms, given lazily. The generator must
/// declare, for each rank r and box B, a bound on the l1 mass of the indices
/// supported in {1..r} with some |m_j| > B (or certify that it diverges).
struct CoefficientRule {
  std::function<Complex(const MultiIndex&)> coefficient;
  std::function<std::optional<TailBound>(std::size_t rank, std::int64_t box)>
      l1_tail;
};

struct RuleSumOptions {
  /// Stop refining once the declared tail drops below this.
  double tail_tolerance = 1e-12;
  std::uint64_t max_terms = 20'000'000;
};

/// Sums a rule-generated series over growing boxes until its declared tail
/// bound certifies convergence (finite) or divergence. Throws Indeterminate
/// when the rule declares no bound.
JInfinityReport is_j_infinity(const CoefficientRule& rule, std::size_t r,
                              const RuleSumOptions& options = {});

/// Ranks r_1 < ... < r_K with their verified differences
/// tail_bounds[k-2] = integral |f_{r_k} - f_{r_{k-1}}|^2, k = 2..K.
struct RkSchedule {
  std::vector<std::size_t> ranks;
  std::vector<double> tail_bounds;

  /// Builds a schedule for hand-picked ranks, computing its differences.
  static RkSchedule from_ranks(const FourierSeries& f,
                               std::vector<std::size_t> ranks);

  std::size_t size() const noexcept { return ranks.size(); }
  /// 2^(-2k) for the one-based rank position k.
  static double decay_limit(std::size_t k);
  /// Every difference k >= 2 is at most 2^(-2k).
  bool satisfies_decay() const;
};

/// Lexicographically smallest ranks with
/// integral |f_{r_k} - f_{r_{k-1}}|^2 <= 2^(-2k) for k = 2..K. Differences are
/// exact coefficient sums. Once the ranks pass max_support() the remaining
/// differences are zero.
RkSchedule select_rk(const FourierSeries& f, std::size_t K);

/// g = |f_{r_1}| + sum_{m>=2} |f_{r_m} - f_{r_{m-1}}| at theta.
double majorant_g(const FourierSeries& f, const RkSchedule& schedule,
                  const TorusPoint& theta);

/// ||f_{r_1}||_2 and ||f_{r_m} - f_{r_{m-1}}||_2 for m = 2..K.
std::vector<double> schedule_window_norms(const FourierSeries& f,
                                          const RkSchedule& schedule);

/// {"terms": [{"index": {"1": m1, "3": m3}, "re": x, "im": y}, ...]}
std::string series_to_json(const FourierSeries& f);
/// Throws InvalidInput on malformed documents.
FourierSeries series_from_json(std::string_view text);

}  // namespace ergotor
