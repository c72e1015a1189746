#include "infoloss/entropy.hpp"

namespace infoloss {

double entropy_bits(std::span<const double> masses) noexcept {
  CompensatedSum h;
  for (double p : masses) h.add(neg_plogp(p));
  return h.value();
}

double binary_entropy(double p) noexcept { return neg_plogp(p) + neg_plogp(1.0 - p); }

}  // namespace infoloss
