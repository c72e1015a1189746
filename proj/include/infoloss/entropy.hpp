#pragma once

#include <cmath>
#include <span>

namespace infoloss {

/// -p log2 p with the 0 log 0 = 0 convention.
inline double neg_plogp(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Shannon entropy in bits of a (not necessarily normalized) mass vector.
double entropy_bits(std::span<const double> masses) noexcept;

/// H2(p) in bits.
double binary_entropy(double p) noexcept;

}  // namespace infoloss
