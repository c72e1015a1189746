#include "infoloss/plugin.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"

namespace infoloss {

double plugin_block_entropy(std::span<const Symbol> path, std::size_t block, std::size_t alphabet) {
  if (block == 0) throw ValidationError("block must be at least 1");
  if (path.size() < block) throw ValidationError("path shorter than the block");
  if (alphabet == 0) throw ValidationError("empty alphabet");
  const double bits = static_cast<double>(block) * std::log2(static_cast<double>(alphabet));
  if (bits > 63.0) throw ValidationError("block too long to index n-grams in 64 bits");

  std::uint64_t modulus = 1;
  for (std::size_t i = 0; i < block; ++i) modulus *= alphabet;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= alphabet) throw ValidationError("symbol outside declared alphabet");
    key = (key * alphabet + path[i]) % modulus;
    if (i + 1 >= block) ++counts[key];
  }
  const auto windows = static_cast<double>(path.size() - block + 1);
  std::vector<std::uint64_t> sorted;
  sorted.reserve(counts.size());
  for (const auto& [k, c] : counts) sorted.push_back(c);
  // Fixed summation order, independent of hash iteration order.
  std::sort(sorted.begin(), sorted.end());
  double h = 0.0;
  for (auto c : sorted) h += neg_plogp(static_cast<double>(c) / windows);
  return h;
}

PluginEstimate plugin_estimate(std::span<const Symbol> x_path, std::span<const Symbol> y_path, std::size_t block,
                               std::size_t x_alphabet, std::size_t y_alphabet) {
  if (x_path.size() != y_path.size()) throw ValidationError("plug-in paths must have equal length");
  if (x_path.empty()) throw ValidationError("plug-in paths are empty");
  auto infer = [](std::span<const Symbol> p) { return std::size_t{*std::max_element(p.begin(), p.end())} + 1; };
  if (x_alphabet == 0) x_alphabet = infer(x_path);
  if (y_alphabet == 0) y_alphabet = infer(y_path);

  PluginEstimate e;
  const auto b = static_cast<double>(block);
  e.hx = plugin_block_entropy(x_path, block, x_alphabet) / b;
  e.hy = plugin_block_entropy(y_path, block, y_alphabet) / b;
  e.loss = e.hx - e.hy;
  const auto needed = [&](std::size_t a) { return 100.0 * std::pow(static_cast<double>(a), b); };
  const auto len = static_cast<double>(x_path.size());
  e.coverage_warning = len < needed(x_alphabet) || len < needed(y_alphabet);
  return e;
}

}  // namespace infoloss
