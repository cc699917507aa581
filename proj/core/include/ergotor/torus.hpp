#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ergotor/frequencies.hpp"

namespace ergotor {

/// x - floor(x), folded into [0, 1) even when rounding lands on 1.
double fractional_part(double x) noexcept;

/// A point of the truncated torus [0,1)^d. Coordinates past d are taken to be
/// zero wherever an infinite point is meant.
class TorusPoint {
 public:
  /// Validating constructor: every coordinate must already lie in [0, 1).
  explicit TorusPoint(std::vector<double> coords);

  static TorusPoint zero(std::size_t d);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// Coordinatewise fractional part; throws InvalidInput on non-finite input.
TorusPoint wrap_fractional(std::span<const double> x);

/// phi_t(u) = {u + t * lambda}. Requires dim(u) <= lambda.size().
TorusPoint flow(const TorusPoint& u, double t, const FrequencySequence& lambda);

/// Sum over n of e^(1-n) |a_n - b_n|. Dropping coordinates past d changes
/// the infinite-dimensional value by at most e^(1-d).
double tychonoff_distance(const TorusPoint& a, const TorusPoint& b);

/// Upper bound on the contribution of coordinates beyond `d` to the
/// Tychonoff distance.
double tychonoff_tail_bound(std::size_t d) noexcept;

/// Shortest distance between two coordinates on the circle R/Z.
double circular_distance(double a, double b) noexcept;

/// Bijection of {0, ..., n-1}; every index >= n is fixed. Indices are
/// zero-based here, one-based in serialized forms.
class FinitePermutation {
 public:
  /// `images[i]` is sigma(i). Throws unless `images` is a bijection.
  explicit FinitePermutation(std::vector<std::size_t> images);

  static FinitePermutation identity(std::size_t n);
  static FinitePermutation transposition(std::size_t n, std::size_t i,
                                         std::size_t j);
  /// sigma(k) = k + 1 (mod n).
  static FinitePermutation cycle(std::size_t n);

  std::size_t support_bound() const noexcept { return images_.size(); }
  std::size_t operator()(std::size_t i) const noexcept {
    return i < images_.size() ? images_[i] : i;
  }

  FinitePermutation inverse() const;
  /// (this * other)(i) = this(other(i)).
  FinitePermutation compose(const FinitePermutation& other) const;
  bool is_identity() const noexcept;

 private:
  std::vector<std::size_t> images_;
};

/// (sigma theta)_i = theta_{sigma(i)}.
TorusPoint apply_permutation(const FinitePermutation& sigma,
                             const TorusPoint& theta);

}  // namespace ergotor
