#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infoloss/alphabet.hpp"

namespace infoloss {

/// Stationary first-order Markov input process over a finite alphabet.
/// An iid source is the special case of identical transition rows.
///
/// Construction validates row-stochasticity (1e-12), checks regularity of the
/// transition graph (a single closed communicating class, aperiodic) and
/// computes the stationary vector by power iteration. Symbols outside the
/// closed class are allowed but reported by `transient_symbols()`.
class MarkovSource {
 public:
  MarkovSource(Alphabet alphabet, std::vector<double> transition);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return alphabet_.size(); }
  double transition(Symbol from, Symbol to) const { return transition_[std::size_t{from} * size() + to]; }
  std::span<const double> row(Symbol from) const {
    return {transition_.data() + std::size_t{from} * size(), size()};
  }
  const std::vector<double>& transition_matrix() const noexcept { return transition_; }
  const std::vector<double>& stationary() const noexcept { return stationary_; }
  bool is_iid() const noexcept { return iid_; }
  /// Symbols with zero stationary probability.
  const std::vector<Symbol>& transient_symbols() const noexcept { return transient_; }

 private:
  Alphabet alphabet_;
  std::vector<double> transition_;
  std::vector<double> stationary_;
  std::vector<Symbol> transient_;
  bool iid_ = false;
};

MarkovSource make_iid(const Alphabet& alphabet, std::span<const double> pmf);

/// Closed form -sum_i pi_i sum_j P_ij log2 P_ij.
double source_entropy_rate(const MarkovSource& source);

/// Either a fixed first symbol or a draw from the stationary vector.
struct InitialSymbol {
  static InitialSymbol stationary() { return InitialSymbol{}; }
  static InitialSymbol fixed(Symbol s) { return InitialSymbol{true, s}; }
  bool is_fixed = false;
  Symbol symbol = 0;
};

/// Deterministic given (seed, length, init); uses a portable generator so
/// paths agree across standard libraries.
SymbolSequence sample_path(const MarkovSource& source, std::size_t length, std::uint64_t seed,
                           InitialSymbol init = InitialSymbol::stationary());

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Engine>
double unit_uniform(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace infoloss
