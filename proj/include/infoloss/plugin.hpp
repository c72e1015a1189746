#pragma once

#include <cstddef>
#include <span>

#include "infoloss/alphabet.hpp"

namespace infoloss {

/// Plug-in (empirical n-gram) block entropy estimates from two equal-length
/// paths. Biased low; meant for exploration on long simulated paths.
struct PluginEstimate {
  double hx = 0.0;    // H(X_1^block) / block, bits per sample
  double hy = 0.0;    // H(Y_1^block) / block
  double loss = 0.0;  // hx - hy
  /// Path shorter than 100 |alphabet|^block for either alphabet.
  bool coverage_warning = false;
};

/// Alphabet sizes default to the largest symbol seen plus one.
PluginEstimate plugin_estimate(std::span<const Symbol> x_path, std::span<const Symbol> y_path, std::size_t block,
                               std::size_t x_alphabet = 0, std::size_t y_alphabet = 0);

/// Empirical H(Z_1^block) in bits from overlapping windows of `path`.
double plugin_block_entropy(std::span<const Symbol> path, std::size_t block, std::size_t alphabet);

}  // namespace infoloss
