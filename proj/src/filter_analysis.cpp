#include "infoloss/filter_analysis.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>

#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

using cplx = std::complex<double>;

// Horner with the running sum of |c_k| |x|^(d-k) for a relative residual.
std::pair<cplx, double> evaluate(const std::vector<double>& c, cplx x) {
  cplx p = 0;
  double scale = 0;
  const double r = std::abs(x);
  for (double ck : c) {
    p = p * x + ck;
    scale = scale * r + std::abs(ck);
  }
  return {p, scale};
}

cplx derivative(const std::vector<double>& c, cplx x) {
  cplx d = 0;
  const std::size_t deg = c.size() - 1;
  for (std::size_t k = 0; k < deg; ++k) d = d * x + c[k] * static_cast<double>(deg - k);
  return d;
}

double relative_residual(const std::vector<double>& c, cplx x) {
  auto [p, scale] = evaluate(c, x);
  return scale > 0 ? std::abs(p) / scale : std::abs(p);
}

// Coefficients of z^d B(1/z) style polynomials, trailing zeros split off as roots at 0.
std::vector<cplx> roots_in_z(std::vector<double> c) {
  std::vector<cplx> out;
  while (c.size() > 1 && c.back() == 0.0) {
    c.pop_back();
    out.emplace_back(0.0, 0.0);
  }
  auto r = polynomial_roots(c);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace

std::vector<cplx> polynomial_roots(const std::vector<double>& coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0) throw ValidationError("leading polynomial coefficient must be nonzero");
  const std::size_t d = coeffs.size() - 1;
  if (d == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t j = 0; j < d; ++j) companion(0, j) = -coeffs[j + 1] / coeffs[0];
  for (std::size_t i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericError("companion eigenvalue solve failed");

  std::vector<cplx> roots(d);
  std::vector<double> residuals(d);
  bool ok = true;
  for (std::size_t i = 0; i < d; ++i) {
    cplx z = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    double best = relative_residual(coeffs, z);
    for (int it = 0; it < 50 && best >= 1e-14; ++it) {
      const cplx dp = derivative(coeffs, z);
      if (dp == cplx(0, 0)) break;
      const cplx next = z - evaluate(coeffs, z).first / dp;
      const double res = relative_residual(coeffs, next);
      if (!(res < best)) break;
      z = next;
      best = res;
    }
    roots[i] = z;
    residuals[i] = best;
    ok = ok && best < 1e-10;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "root polishing did not converge; relative residuals:";
    for (double r : residuals) msg << ' ' << r;
    throw NumericError(msg.str());
  }
  return roots;
}

TransferFunction::TransferFunction(std::vector<double> b, std::vector<double> a) : b_(std::move(b)), a_(std::move(a)) {
  if (b_.empty()) throw ValidationError("transfer function needs at least b_0");
  for (double v : b_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite numerator coefficient");
  }
  for (double v : a_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite denominator coefficient");
  }
  if (b_.front() == 0.0) throw ValidationError("b_0 must be nonzero");
  zeros_ = roots_in_z(b_);
  std::vector<double> den{1.0};
  for (double v : a_) den.push_back(-v);
  poles_ = roots_in_z(den);
  for (const cplx& p : poles_) {
    if (std::abs(p) > 1.0 - kUnitCircleMargin) {
      std::ostringstream msg;
      msg << "unstable filter: pole " << p << " has modulus " << std::abs(p);
      throw ValidationError(msg.str());
    }
  }
}

cplx TransferFunction::numerator(cplx z) const {
  const cplx w = 1.0 / z;
  cplx acc = 0;
  for (auto it = b_.rbegin(); it != b_.rend(); ++it) acc = acc * w + *it;
  return acc;
}

cplx TransferFunction::denominator(cplx z) const {
  const cplx w = 1.0 / z;
  cplx acc = 0;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = acc * w - *it;
  return 1.0 + acc * w;
}

double rate_change_integral(const TransferFunction& tf, std::size_t grid) {
  if (grid < 1024) throw ValidationError("integration grid must have at least 1024 points");
  for (const cplx& z : tf.zeros()) {
    if (std::abs(std::abs(z) - 1.0) < kUnitCircleMargin) {
      std::ostringstream msg;
      msg << "zero " << z << " lies on the unit circle";
      throw SingularityError(msg.str());
    }
  }
  auto trapezoid = [&](std::size_t m) {
    double sum = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double w = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
      const cplx z = std::polar(1.0, w);
      sum += std::log(std::abs(tf.numerator(z))) - std::log(std::abs(tf.denominator(z)));
    }
    return sum / static_cast<double>(m);
  };
  constexpr std::size_t kMaxGrid = std::size_t{1} << 24;
  double prev = trapezoid(grid);
  for (std::size_t m = grid * 2; m <= kMaxGrid; m *= 2) {
    const double cur = trapezoid(m);
    if (std::abs(cur - prev) < 1e-8) return cur;
    prev = cur;
  }
  throw NumericError("trapezoid rule did not converge to 1e-8 by 2^24 points");
}

double rate_change_roots(const TransferFunction& tf) {
  double sum = std::log(std::abs(tf.b().front()));
  for (const cplx& z : tf.zeros()) {
    const double r = std::abs(z);
    if (r > 1.0) sum += std::log(r);
  }
  return sum;
}

bool is_minimum_phase(const TransferFunction& tf) {
  bool inside = true;
  for (const cplx& z : tf.zeros()) {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) < kUnitCircleMargin) {
      std::ostringstream msg;
      msg << "zero " << z << " is within " << kUnitCircleMargin << " of the unit circle";
      throw IndeterminateError(msg.str());
    }
    inside = inside && r < 1.0;
  }
  return inside;
}

}  // namespace infoloss
