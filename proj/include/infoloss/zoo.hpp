#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infoloss/alphabet.hpp"
#include "infoloss/system.hpp"

namespace infoloss {

// Static maps (N = M = 0).

SystemSpec identity_system(const Alphabet& alphabet);
SystemSpec constant_system(const Alphabet& input, const Alphabet& output, Symbol value);
/// y = map[x].
SystemSpec static_system(const Alphabet& input, const Alphabet& output, std::vector<Symbol> map);
/// y = x^2 over integer-valued inputs; the output alphabet is the sorted set of squares.
SystemSpec squarer_system(std::span<const std::int64_t> values);
SystemSpec squarer_system();  // over {-1, 0, 1}

/// y[n] = x[n] xor x[n-1] over Z_2.
SystemSpec xor_filter();
/// y[n] = x[n] and x[n-1] over {0, 1}.
SystemSpec binary_and_system();

/// Coefficients of y[n] = sum_k b_k x[n-k] + sum_l a_l y[n-l] as ring elements.
struct FilterCoeffs {
  std::vector<Symbol> b;  // b_0..b_N
  std::vector<Symbol> a;  // a_1..a_M
};

/// Linear difference equation evaluated in the alphabet's ring.
SystemSpec ring_linear_filter(const Alphabet& ring, const FilterCoeffs& coeffs);

/// Fixed-point coefficients: value = mantissa / 2^frac_bits, frac_bits taken
/// from the quantizer.
struct FixedPointCoeffs {
  std::vector<std::int64_t> b;  // b_0..b_N
  std::vector<std::int64_t> a;  // a_1..a_M
};

/// Maps intermediate fixed-point values back onto Z_{2^k}.
///
/// Intermediate values are raw integers modulo 2^(k+F) standing for
/// raw / 2^F with wraparound modulo 2^k; the symbol x in Z_{2^k} embeds as
/// x * 2^F. Construction checks, for every a in the domain and x in Z_{2^k},
/// that a + x stays in the domain and Q(a + x) = Q(a) (+) x.
class Quantizer {
 public:
  /// Two's-complement truncation of the F fractional bits over all raw values.
  static Quantizer truncating(unsigned word_bits, unsigned frac_bits);
  /// `domain` lists raw values; `map[i]` is the image of `domain[i]`.
  Quantizer(unsigned word_bits, unsigned frac_bits, std::vector<std::uint64_t> domain, std::vector<Symbol> map);

  unsigned word_bits() const noexcept { return word_bits_; }
  unsigned frac_bits() const noexcept { return frac_bits_; }
  std::uint64_t raw_modulus() const noexcept { return std::uint64_t{1} << (word_bits_ + frac_bits_); }
  std::uint64_t embed(Symbol x) const noexcept { return std::uint64_t{x} << frac_bits_; }
  bool in_domain(std::uint64_t raw) const;
  /// Throws ValidationError for raw values outside the domain.
  Symbol operator()(std::uint64_t raw) const;
  const std::vector<std::uint64_t>& domain() const noexcept { return domain_; }

 private:
  unsigned word_bits_;
  unsigned frac_bits_;
  std::vector<std::uint64_t> domain_;   // sorted
  std::vector<Symbol> map_;
};

enum class QuantizerPlacement { kAfterMultiply, kAfterAccumulate };

/// Finite-precision linear filter over Z_{2^k}:
///   after-multiply:   y = (+)_k Q(b_k x[n-k]) (+) (+)_l Q(a_l y[n-l])
///   after-accumulate: y = Q(sum_k b_k x[n-k] + sum_l a_l y[n-l])
/// Samples enter products as two's-complement values. The intermediate set
/// (closure of the products under addition) must lie in the quantizer domain.
SystemSpec fixed_point_filter(const Alphabet& ring, const FixedPointCoeffs& coeffs, const Quantizer& quantizer,
                              QuantizerPlacement placement);

/// Closure of the filter's products and the embedded alphabet under addition
/// modulo 2^(k+F), sorted.
std::vector<std::uint64_t> fixed_point_intermediate_set(const FixedPointCoeffs& coeffs, const Quantizer& quantizer,
                                                        QuantizerPlacement placement);

/// y[n] = x[n] x[n-1] with exact integer products; the output alphabet is the
/// sorted set of products.
SystemSpec multiplier_system(std::span<const std::int64_t> values);
/// y[n] = x[n] x[n-1] using the alphabet's ring multiplication.
SystemSpec multiplier_system(const Alphabet& ring);

/// Static nonlinearity g followed by a filter over g's output alphabet.
SystemSpec hammerstein_system(const SystemSpec& g, const SystemSpec& filter);
/// max_x log2 |g^{-1}[g(x)]| for a static map g.
double static_preimage_bound(const SystemSpec& g);

}  // namespace infoloss
