#include "ergotor/phase.hpp"

#include <cmath>
#include <numbers>

namespace ergotor {

namespace {

// a * b reduced modulo `period` (a power of two), rounding error included.
double reduced_product(double a, double b, double period) noexcept {
  double p = a * b;
  double err = std::fma(a, b, -p);
  double r = p - period * std::floor(p / period);
  r += err;
  r -= period * std::floor(r / period);
  return r;
}

constexpr double kSeriesThreshold = 1e-4;

}  // namespace

double product_turns(double a, double b) noexcept {
  double r = reduced_product(a, b, 1.0);
  return r >= 1.0 ? 0.0 : r;
}

std::complex<double> unit_phase(double turns) noexcept {
  double angle = 2.0 * std::numbers::pi * (turns - std::floor(turns));
  return {std::cos(angle), std::sin(angle)};
}

std::complex<double> averaged_phase(double T, double s) noexcept {
  const double x = 2.0 * std::numbers::pi * T * s;
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return {1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x * x2 / 24.0};
  }
  // (e^{ix} - 1)/(ix) = e^{ix/2} sin(x/2)/(x/2), with x/2 = pi T s
  const double half_turns = reduced_product(T, s, 2.0);
  const double angle = std::numbers::pi * half_turns;
  const double magnitude = std::sin(angle) / (std::numbers::pi * T * s);
  return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

}  // namespace ergotor
