#include "infoloss/reconstruction.hpp"

#include <algorithm>

#include "infoloss/errors.hpp"

namespace infoloss {

std::size_t seed_length(const SystemSpec& system) {
  return std::max(system.input_memory(), system.output_memory());
}

SymbolSequence reconstruct(const PartialInverse& inverse, std::span<const Symbol> y, std::span<const Symbol> seed,
                           const SystemState& init) {
  const SystemSpec& system = inverse.system();
  require_symbols(system.output_alphabet(), y, "reconstruct output");
  require_symbols(system.input_alphabet(), seed, "reconstruct seed");
  system.validate_state(init);
  const std::size_t want = std::min(seed_length(system), y.size());
  if (seed.size() != want) {
    throw ValidationError("reconstruct expects a seed of " + std::to_string(want) + " inputs, got " +
                          std::to_string(seed.size()));
  }
  SystemState state = init;
  SymbolSequence x;
  x.reserve(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    Symbol xn;
    if (n < seed.size()) {
      xn = seed[n];
      SystemState probe = state;
      if (system.step(probe, xn) != y[n]) throw InconsistentObservation("seed disagrees with the observed output", n);
    } else {
      xn = inverse.invert(system.encode(state), y[n]);
      if (xn == PartialInverse::kNoPreimage) throw InconsistentObservation("output not producible from this state", n);
    }
    system.step(state, xn);
    x.push_back(xn);
  }
  return x;
}

SymbolSequence reconstruct(const PartialInverse& inverse, std::span<const Symbol> y, std::span<const Symbol> seed) {
  return reconstruct(inverse, y, seed, inverse.system().zero_state());
}

std::vector<ReconstructionCandidate> reconstruction_candidates(const PartialInverse& inverse,
                                                               std::span<const Symbol> y) {
  const SystemSpec& system = inverse.system();
  require_symbols(system.output_alphabet(), y, "reconstruct output");
  std::vector<ReconstructionCandidate> out;
  const std::uint64_t count = system.theta_count();
  for (std::uint64_t theta = 0; theta < count; ++theta) {
    SystemState state = system.decode(theta);
    SymbolSequence x;
    bool ok = true;
    for (std::size_t n = 0; n < y.size() && ok; ++n) {
      const Symbol xn = inverse.invert(system.encode(state), y[n]);
      ok = xn != PartialInverse::kNoPreimage;
      if (ok) {
        system.step(state, xn);
        x.push_back(xn);
      }
    }
    if (ok) out.push_back({theta, std::move(x)});
  }
  return out;
}

RoundTrip round_trip(const PartialInverse& inverse, std::span<const Symbol> x, const SystemState& init) {
  const SystemSpec& system = inverse.system();
  const SymbolSequence y = simulate(system, x, init);
  const std::size_t s = std::min(seed_length(system), x.size());
  RoundTrip result;
  SymbolSequence back;
  try {
    back = reconstruct(inverse, y, x.first(s), init);
  } catch (const InconsistentObservation& e) {
    result.first_mismatch = e.index();
    return result;
  }
  const auto mismatch = std::mismatch(back.begin(), back.end(), x.begin(), x.end());
  if (mismatch.first != back.end() || mismatch.second != x.end()) {
    result.first_mismatch = static_cast<std::size_t>(mismatch.first - back.begin());
    return result;
  }
  result.passed = true;
  return result;
}

std::vector<Rational> multiplier_closed_form(std::span<const std::int64_t> y, std::int64_t x1) {
  if (x1 == 0) throw DomainError("multiplier closed form needs a nonzero x1");
  for (auto v : y) {
    if (v == 0) throw DomainError("multiplier closed form needs nonzero outputs");
  }
  std::vector<Rational> x;
  if (y.empty()) return x;
  x.reserve(y.size());
  x.emplace_back(x1);
  // odd_ratio = prod_{k=1}^{j} y[2k+1] / y[2k] after processing n = 2j + 1.
  Rational odd_ratio = 1;
  for (std::size_t n = 2; n <= y.size(); ++n) {
    auto Y = [&](std::size_t i) { return Rational(y[i - 1]); };
    if (n % 2 == 1) {
      odd_ratio *= Y(n) / Y(n - 1);
      x.push_back(Rational(x1) * odd_ratio);
    } else {
      x.push_back(Y(n) / Rational(x1) / odd_ratio);
    }
  }
  return x;
}

}  // namespace infoloss
