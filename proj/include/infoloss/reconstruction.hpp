#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "infoloss/rational_filter.hpp"
#include "infoloss/system.hpp"

namespace infoloss {

/// max(M, N): the number of leading inputs the output cannot pin down.
std::size_t seed_length(const SystemSpec& system);

/// Recovers the input of a partially invertible system from its output.
///
/// `seed` supplies the first min(seed_length, |y|) inputs; every later input
/// is x[n] = f_inv(theta[n], y[n]) where theta[n] is rebuilt from earlier
/// reconstructed inputs and observed outputs. Throws InconsistentObservation
/// when a seed symbol or an observed output cannot come from this system.
SymbolSequence reconstruct(const PartialInverse& inverse, std::span<const Symbol> y, std::span<const Symbol> seed,
                           const SystemState& init);
SymbolSequence reconstruct(const PartialInverse& inverse, std::span<const Symbol> y, std::span<const Symbol> seed);

struct ReconstructionCandidate {
  std::uint64_t initial_theta;
  SymbolSequence input;
};

/// Every initial state together with the unique input it implies, for the
/// initial states under which `y` is producible at all.
std::vector<ReconstructionCandidate> reconstruction_candidates(const PartialInverse& inverse,
                                                               std::span<const Symbol> y);

struct RoundTrip {
  bool passed = false;
  std::optional<std::size_t> first_mismatch;
};

/// simulate, then reconstruct with the true seed; compares against `x`.
RoundTrip round_trip(const PartialInverse& inverse, std::span<const Symbol> x, const SystemState& init);

/// Closed-form inverse of y[n] = x[n] x[n-1] over nonzero values given x[1]:
///   x[n] = x[1] prod_{k=1}^{(n-1)/2} y[2k+1] / y[2k]           (n odd)
///   x[n] = (y[n] / x[1]) prod_{k=1}^{n/2-1} y[2k] / y[2k+1]    (n even)
/// (1-based). y[1] is not used. Throws DomainError on a zero symbol.
std::vector<Rational> multiplier_closed_form(std::span<const std::int64_t> y, std::int64_t x1);

}  // namespace infoloss
