#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace infoloss {

/// G(z) = B(z) / A(z) with B(z) = sum_k b_k z^-k and A(z) = 1 - sum_l a_l z^-l,
/// matching y[n] = sum_k b_k x[n-k] + sum_l a_l y[n-l].
///
/// Construction rejects b_0 = 0, non-finite coefficients and poles with
/// modulus above 1 - 1e-9.
class TransferFunction {
 public:
  TransferFunction(std::vector<double> b, std::vector<double> a);

  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& a() const noexcept { return a_; }

  /// Numerator roots in z, zero roots from trailing zero coefficients included.
  const std::vector<std::complex<double>>& zeros() const noexcept { return zeros_; }
  const std::vector<std::complex<double>>& poles() const noexcept { return poles_; }

  std::complex<double> numerator(std::complex<double> z) const;
  std::complex<double> denominator(std::complex<double> z) const;

 private:
  std::vector<double> b_;
  std::vector<double> a_;
  std::vector<std::complex<double>> zeros_;
  std::vector<std::complex<double>> poles_;
};

inline constexpr double kUnitCircleMargin = 1e-9;

/// Roots of c_0 x^d + c_1 x^(d-1) + ... + c_d (c_0 != 0) via companion-matrix
/// eigenvalues and Newton polishing. Throws NumericError listing residuals if
/// some root does not reach relative residual 1e-10.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

/// (1/2pi) int_{-pi}^{pi} ln|G(e^{jw})| dw in nats/sample, periodic trapezoid
/// rule starting at `grid` points and doubling until successive values agree
/// to 1e-8. Throws SingularityError for a zero within 1e-9 of the unit circle.
double rate_change_integral(const TransferFunction& tf, std::size_t grid = 1024);

/// ln|b_0| + sum of ln|z| over zeros outside the unit circle, in nats/sample.
double rate_change_roots(const TransferFunction& tf);

/// True iff every zero lies strictly inside the unit circle. Throws
/// IndeterminateError when a zero is within 1e-9 of it.
bool is_minimum_phase(const TransferFunction& tf);

}  // namespace infoloss
