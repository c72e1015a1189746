#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "infoloss/alphabet.hpp"
#include "infoloss/filter_analysis.hpp"
#include "infoloss/markov_source.hpp"
#include "infoloss/system.hpp"
#include "infoloss/zoo.hpp"

namespace infoloss {

/// Generator used by every randomized routine. Draws go through the helpers
/// below rather than <random> distributions so results do not depend on the
/// standard library implementation.
using Rng = std::mt19937_64;

/// Independent stream for instance `index` of a run seeded with `seed`.
Rng instance_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform integer in [0, n), n > 0, by rejection.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);
/// Uniform integer in [lo, hi].
std::int64_t uniform_between(Rng& rng, std::int64_t lo, std::int64_t hi);
double uniform_real(Rng& rng, double lo, double hi);

/// Uniform point of the probability simplex (Dirichlet(1)).
std::vector<double> dirichlet_row(Rng& rng, std::size_t size);

/// Markov source with Dirichlet(1) rows, redrawn until regular.
MarkovSource random_markov_source(const Alphabet& alphabet, Rng& rng);

/// Update table drawn uniformly over all maps X^(N+1) x Y^M -> Y.
SystemSpec random_table_system(const Alphabet& input, const Alphabet& output, std::size_t N, std::size_t M, Rng& rng);

/// Every f_theta is a uniformly drawn injection X -> Y; needs |Y| >= |X|.
SystemSpec random_invertible_system(const Alphabet& input, const Alphabet& output, std::size_t N, std::size_t M,
                                    Rng& rng);

struct FixedPointInstance {
  unsigned word_bits = 0;
  unsigned frac_bits = 0;
  FixedPointCoeffs coeffs;
  QuantizerPlacement placement = QuantizerPlacement::kAfterAccumulate;
  SystemSpec system;
};

/// Z_{2^k} filter with b_0 = 1, random remaining mantissas and a truncating
/// quantizer; k in [1, max_word_bits], F in [0, max_frac_bits], orders in
/// [0, max_order].
FixedPointInstance random_fixed_point_filter(Rng& rng, QuantizerPlacement placement, unsigned max_word_bits = 3,
                                             unsigned max_frac_bits = 2, std::size_t max_order = 2);

/// Real-coefficient transfer function of numerator and denominator degree at
/// most `max_degree` whose zeros and poles stay at least `margin` away from
/// the unit circle (poles inside it, zeros on either side).
TransferFunction random_stable_filter(Rng& rng, std::size_t max_degree = 6, double margin = 0.05);

}  // namespace infoloss
