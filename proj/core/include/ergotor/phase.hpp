#pragma once

#include <complex>

namespace ergotor {

/// {a * b} with the rounding error of the product folded back in, so the
/// phase of e^(2 pi i a b) stays accurate when a * b is large.
double product_turns(double a, double b) noexcept;

/// e^(2 pi i turns).
std::complex<double> unit_phase(double turns) noexcept;

/// (e^(2 pi i T s) - 1) / (2 pi i T s), equal to 1 at T s = 0. Below
/// |2 pi T s| = 1e-4 a fourth-order Taylor expansion is used.
std::complex<double> averaged_phase(double T, double s) noexcept;

}  // namespace ergotor
