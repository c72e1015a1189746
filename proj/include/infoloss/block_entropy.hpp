#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infoloss/joint_chain.hpp"

namespace infoloss {

/// What is observed of one sample when computing block entropies.
enum class Observe : std::uint8_t { kNothing, kInput, kOutput, kJoint };

/// Marginal selector for exact_block_entropy.
enum class Which : std::uint8_t { kX, kY, kXY };

inline constexpr double kPruneThreshold = 1e-300;

/// Exact forward enumeration of the joint chain started from its stationary
/// law. Paths are aggregated by the observation sequence seen so far (paths
/// with identical observations share a node holding their distribution over
/// chain states), so after each step the entropy of the observation prefix
/// is available exactly.
class BlockEnumerator {
 public:
  struct Options {
    /// Cap on live (observation prefix, state) entries.
    std::uint64_t path_cap = kDefaultPathCap;
    /// Stage whose output counts as "output" (defaults to the last stage).
    std::size_t output_stage = SIZE_MAX;
    /// Observe the initial chain state S_1 as well.
    bool observe_initial_state = false;
  };

  explicit BlockEnumerator(const JointChain& chain) : BlockEnumerator(chain, Options{}) {}
  BlockEnumerator(const JointChain& chain, Options options);

  /// Consumes one more sample. Throws ResourceError past the path cap, in
  /// which case the enumerator is left unchanged.
  void advance(Observe what);

  /// Entropy in bits of everything observed so far (including S_1 when
  /// observe_initial_state is set).
  double entropy() const noexcept { return entropy_; }
  std::size_t length() const noexcept { return length_; }
  std::uint64_t live_entries() const noexcept { return entries_.size(); }
  std::uint64_t live_prefixes() const noexcept { return node_end_.size(); }
  std::uint64_t peak_entries() const noexcept { return peak_entries_; }
  /// Probability mass dropped for falling below kPruneThreshold.
  double pruned_mass() const noexcept { return pruned_mass_; }

 private:
  struct Entry {
    std::uint32_t state;
    double p;
  };

  const JointChain* chain_;
  Options options_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> node_end_;
  double entropy_ = 0.0;
  std::size_t length_ = 0;
  std::uint64_t peak_entries_ = 0;
  double pruned_mass_ = 0.0;
};

/// Entropies after each step of `schedule` (index t holds the entropy of the
/// first t + 1 observations).
std::vector<double> block_entropy_profile(const JointChain& chain, std::span<const Observe> schedule,
                                          BlockEnumerator::Options options = {});

/// H(X_1^n), H(Y_1^n) or H(X_1^n, Y_1^n) in bits under stationary start.
double exact_block_entropy(const JointChain& chain, std::size_t n, Which which,
                           std::uint64_t path_cap = kDefaultPathCap);

/// Entropy of the stationary law of the chain states, H(S_1).
double initial_state_entropy(const JointChain& chain);

}  // namespace infoloss
