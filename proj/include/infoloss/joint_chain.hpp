#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "infoloss/markov_source.hpp"
#include "infoloss/system.hpp"

namespace infoloss {

inline constexpr std::uint64_t kDefaultStateCap = 1'000'000;
inline constexpr std::uint64_t kDefaultPathCap = std::uint64_t{1} << 24;

/// One transition of the joint chain: consuming input x emits the system
/// output y and moves to state `next`.
struct JointArc {
  Symbol x;
  Symbol y;
  std::uint32_t next;
  double probability;
};

/// Markov chain over (previous input, system state theta) pairs under which
/// every input and output sample is a deterministic emission of a transition.
/// Only states in the recurrent classes reached from a stationary input
/// history with all-zero output buffers are kept; `stationary()` is the
/// stationary law of the chain restricted to them.
class JointChain {
 public:
  struct StateLabel {
    Symbol previous_input;
    std::uint64_t theta;
  };

  const MarkovSource& source() const noexcept { return source_; }
  const SystemSpec& system() const noexcept { return system_; }
  std::size_t state_count() const noexcept { return labels_.size(); }
  std::size_t stage_count() const noexcept { return stages_; }
  std::span<const JointArc> arcs(std::uint32_t state) const {
    return {arcs_.data() + offsets_[state], offsets_[state + 1] - offsets_[state]};
  }
  std::size_t arc_index(std::uint32_t state) const { return offsets_[state]; }
  /// Output of stage `stage` on the global arc `arc` (see arc_index).
  Symbol stage_output(std::size_t arc, std::size_t stage) const {
    return stages_ == 1 ? arcs_[arc].y : stage_outputs_[arc * stages_ + stage];
  }
  const std::vector<double>& stationary() const noexcept { return stationary_; }
  StateLabel label(std::uint32_t state) const { return labels_[state]; }
  /// Number of closed communicating classes retained.
  std::size_t recurrent_classes() const noexcept { return classes_; }

 private:
  friend JointChain build_joint_chain(const MarkovSource&, const SystemSpec&, std::uint64_t);
  JointChain(MarkovSource source, SystemSpec system) : source_(std::move(source)), system_(std::move(system)) {}

  MarkovSource source_;
  SystemSpec system_;
  std::size_t stages_ = 1;
  std::size_t classes_ = 0;
  std::vector<StateLabel> labels_;
  std::vector<std::size_t> offsets_;
  std::vector<JointArc> arcs_;
  std::vector<Symbol> stage_outputs_;
  std::vector<double> stationary_;
};

/// Throws ResourceError when |X| * theta_count exceeds `state_cap`.
JointChain build_joint_chain(const MarkovSource& source, const SystemSpec& system,
                             std::uint64_t state_cap = kDefaultStateCap);

}  // namespace infoloss
