#include "ergotor/torus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergotor/errors.hpp"

namespace ergotor {

double fractional_part(double x) noexcept {
  double f = x - std::floor(x);
  // -1e-17 - floor(-1e-17) rounds to exactly 1.0
  return f >= 1.0 ? 0.0 : f;
}

TorusPoint::TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InvalidInput("torus point needs d >= 1");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!(coords_[i] >= 0.0 && coords_[i] < 1.0)) {
      throw InvalidInput("torus coordinate " + std::to_string(i + 1) +
                         " outside [0, 1)");
    }
  }
}

TorusPoint TorusPoint::zero(std::size_t d) {
  return TorusPoint(std::vector<double>(d, 0.0));
}

TorusPoint wrap_fractional(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw InvalidInput("non-finite coordinate " + std::to_string(i + 1));
    }
    out[i] = fractional_part(x[i]);
  }
  return TorusPoint(std::move(out));
}

TorusPoint flow(const TorusPoint& u, double t, const FrequencySequence& lambda) {
  if (u.dim() > lambda.size()) {
    throw InvalidInput("flow: point has " + std::to_string(u.dim()) +
                       " coordinates but only " +
                       std::to_string(lambda.size()) + " frequencies");
  }
  if (!std::isfinite(t)) throw InvalidInput("flow: non-finite time");
  std::vector<double> out(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    out[i] = fractional_part(u[i] + fractional_part(t * lambda[i]));
  }
  return TorusPoint(std::move(out));
}

double tychonoff_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("tychonoff_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < a.dim(); ++n) {
    sum += std::exp(-static_cast<double>(n)) * std::abs(a[n] - b[n]);
  }
  return sum;
}

double tychonoff_tail_bound(std::size_t d) noexcept {
  // sum_{n>d} e^(1-n) = e^(-d) / (1 - 1/e) <= e^(1-d)
  return std::exp(1.0 - static_cast<double>(d));
}

double circular_distance(double a, double b) noexcept {
  double diff = fractional_part(a - b);
  return std::min(diff, 1.0 - diff);
}

FinitePermutation::FinitePermutation(std::vector<std::size_t> images)
    : images_(std::move(images)) {
  std::vector<bool> hit(images_.size(), false);
  for (std::size_t v : images_) {
    if (v >= images_.size() || hit[v]) {
      throw InvalidInput("permutation images are not a bijection");
    }
    hit[v] = true;
  }
}

FinitePermutation FinitePermutation::identity(std::size_t n) {
  std::vector<std::size_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = i;
  return FinitePermutation(std::move(images));
}

FinitePermutation FinitePermutation::transposition(std::size_t n, std::size_t i,
                                                   std::size_t j) {
  if (i >= n || j >= n) throw InvalidInput("transposition index out of range");
  std::vector<std::size_t> images(n);
  for (std::size_t k = 0; k < n; ++k) images[k] = k;
  std::swap(images[i], images[j]);
  return FinitePermutation(std::move(images));
}

FinitePermutation FinitePermutation::cycle(std::size_t n) {
  std::vector<std::size_t> images(n);
  for (std::size_t k = 0; k < n; ++k) images[k] = (k + 1) % n;
  return FinitePermutation(std::move(images));
}

FinitePermutation FinitePermutation::inverse() const {
  std::vector<std::size_t> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = i;
  return FinitePermutation(std::move(inv));
}

FinitePermutation FinitePermutation::compose(
    const FinitePermutation& other) const {
  std::size_t n = std::max(support_bound(), other.support_bound());
  std::vector<std::size_t> images(n);
  for (std::size_t i = 0; i < n; ++i) images[i] = (*this)(other(i));
  return FinitePermutation(std::move(images));
}

bool FinitePermutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

TorusPoint apply_permutation(const FinitePermutation& sigma,
                             const TorusPoint& theta) {
  if (sigma.support_bound() > theta.dim()) {
    throw InvalidInput("permutation support " +
                       std::to_string(sigma.support_bound()) +
                       " exceeds point dimension " +
                       std::to_string(theta.dim()));
  }
  std::vector<double> out(theta.dim());
  for (std::size_t i = 0; i < theta.dim(); ++i) out[i] = theta[sigma(i)];
  return TorusPoint(std::move(out));
}

}  // namespace ergotor
