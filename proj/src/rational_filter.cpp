#include "infoloss/rational_filter.hpp"

#include "infoloss/errors.hpp"

namespace infoloss {

RationalLinearFilter::RationalLinearFilter(std::vector<Rational> b, std::vector<Rational> a)
    : b_(std::move(b)), a_(std::move(a)) {
  if (b_.empty()) throw ValidationError("rational filter needs at least b_0");
}

std::vector<Rational> RationalLinearFilter::simulate(std::span<const Rational> x) const {
  std::vector<Rational> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    Rational acc = 0;
    for (std::size_t k = 0; k < b_.size() && k <= n; ++k) acc += b_[k] * x[n - k];
    for (std::size_t l = 1; l <= a_.size() && l <= n; ++l) acc += a_[l - 1] * y[n - l];
    y[n] = acc;
  }
  return y;
}

std::vector<Rational> RationalLinearFilter::invert(std::span<const Rational> y) const {
  if (b_.front() == 0) throw DomainError("b_0 = 0: the filter has no partial inverse");
  std::vector<Rational> x(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    Rational acc = y[n];
    for (std::size_t k = 1; k < b_.size() && k <= n; ++k) acc -= b_[k] * x[n - k];
    for (std::size_t l = 1; l <= a_.size() && l <= n; ++l) acc -= a_[l - 1] * y[n - l];
    x[n] = acc / b_.front();
  }
  return x;
}

}  // namespace infoloss
