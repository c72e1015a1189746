#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace infoloss {

using Rational = boost::multiprecision::cpp_rational;

/// Linear difference equation over the rationals, simulation only:
///   y[n] = sum_k b_k x[n-k] + sum_l a_l y[n-l].
/// The alphabet is countably infinite, so exact entropy analysis does not
/// apply; the partial inverse exists whenever b_0 != 0.
class RationalLinearFilter {
 public:
  RationalLinearFilter(std::vector<Rational> b, std::vector<Rational> a);

  const std::vector<Rational>& b() const noexcept { return b_; }
  const std::vector<Rational>& a() const noexcept { return a_; }

  /// Zero initial conditions.
  std::vector<Rational> simulate(std::span<const Rational> x) const;
  /// Recovers x from y under zero initial conditions:
  ///   x[n] = (y[n] - sum_{k>=1} b_k x[n-k] - sum_l a_l y[n-l]) / b_0.
  std::vector<Rational> invert(std::span<const Rational> y) const;

 private:
  std::vector<Rational> b_;
  std::vector<Rational> a_;
};

}  // namespace infoloss
