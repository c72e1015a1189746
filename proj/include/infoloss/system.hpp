#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "infoloss/alphabet.hpp"

namespace infoloss {

/// Update map of a finite-memory system. `inputs` holds x[n-N..n] and
/// `outputs` holds y[n-M..n-1], both oldest first.
using UpdateFunction = std::function<Symbol(std::span<const Symbol> inputs, std::span<const Symbol> outputs)>;

/// One recursion y[n] = f(x[n-N..n], y[n-M..n-1]).
///
/// In table mode the update is a dense array indexed in mixed radix by the
/// digits x[n-N], ..., x[n], y[n-M], ..., y[n-1] (most significant first,
/// input digits in base |X|, output digits in base |Y|).
struct Stage {
  Alphabet input;
  Alphabet output;
  std::size_t input_memory = 0;   // N
  std::size_t output_memory = 0;  // M
  std::vector<Symbol> table;      // empty in opaque mode
  UpdateFunction function;        // set in opaque mode

  bool tabulated() const noexcept { return !function; }
  std::uint64_t table_index(std::span<const Symbol> inputs, std::span<const Symbol> outputs) const;
  Symbol apply(std::span<const Symbol> inputs, std::span<const Symbol> outputs) const;
};

/// Buffered history of a system: the last N inputs and last M outputs, oldest
/// first. For a cascade that cannot be flattened into a single recursion,
/// `recent_outputs` is the concatenation of every stage's output buffer (see
/// SystemSpec::stage_buffer_lengths).
struct SystemState {
  std::vector<Symbol> recent_inputs;
  std::vector<Symbol> recent_outputs;
  friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// A deterministic finite-memory input-output system.
///
/// Usually a single recursion. `cascade` produces a single recursion when the
/// composition has one (every stage but the last without output feedback) and
/// otherwise keeps an ordered list of stages that share one expanded state.
///
/// The state value theta used by the exact analyses is the concatenation of
/// the input buffer and every stage buffer, encoded in mixed radix (most
/// significant first). For a single recursion theta ranges over X^N x Y^M.
class SystemSpec {
 public:
  static SystemSpec from_table(Alphabet input, Alphabet output, std::size_t N, std::size_t M,
                               std::vector<Symbol> table);
  /// Evaluates `f` on every history and stores the result as a table.
  static SystemSpec tabulate(Alphabet input, Alphabet output, std::size_t N, std::size_t M,
                             const UpdateFunction& f);
  /// Simulation-only system; exact analyses throw UnsupportedAnalysis.
  static SystemSpec opaque(Alphabet input, Alphabet output, std::size_t N, std::size_t M, UpdateFunction f);
  static SystemSpec from_stages(std::vector<Stage> stages);

  const Alphabet& input_alphabet() const { return stages_->front().input; }
  const Alphabet& output_alphabet() const { return stages_->back().output; }
  /// N; for a composite, the summed input memory of all stages.
  std::size_t input_memory() const;
  /// M; for a composite, the output memory of the last stage.
  std::size_t output_memory() const { return stages_->back().output_memory; }
  bool is_table() const;
  bool is_composite() const { return stages_->size() > 1; }
  const std::vector<Stage>& stages() const { return *stages_; }
  /// Table of a single-recursion, table-mode system.
  const std::vector<Symbol>& table() const;

  /// Length of the input buffer (N of the first stage).
  std::size_t input_buffer_length() const { return stages_->front().input_memory; }
  /// Per-stage output buffer lengths: max(M_i, N_{i+1}) and M for the last.
  std::vector<std::size_t> stage_buffer_lengths() const;
  SystemState zero_state() const;
  void validate_state(const SystemState& state) const;

  /// One sample: returns the final output, writes every stage's output into
  /// `stage_outputs` when non-empty, and advances `state`.
  Symbol step(SystemState& state, Symbol x, std::span<Symbol> stage_outputs = {}) const;

  /// Number of theta values (|X|^N |Y|^M for a single recursion). Throws
  /// UnsupportedAnalysis for opaque systems and ResourceError past 2^62.
  std::uint64_t theta_count() const;
  std::uint64_t encode(const SystemState& state) const;
  SystemState decode(std::uint64_t theta) const;
  /// f_theta(x).
  Symbol respond(std::uint64_t theta, Symbol x) const;

 private:
  explicit SystemSpec(std::shared_ptr<const std::vector<Stage>> stages) : stages_(std::move(stages)) {}
  void require_exact(const char* what) const;

  std::shared_ptr<const std::vector<Stage>> stages_;
};

/// The update map with its history frozen: x -> f_theta(x).
class ParamView {
 public:
  ParamView(SystemSpec parent, std::uint64_t theta);
  ParamView(SystemSpec parent, const SystemState& theta);
  Symbol operator()(Symbol x) const;
  std::uint64_t theta() const noexcept { return theta_; }
  const SystemSpec& parent() const noexcept { return parent_; }
  /// f_theta^{-1}[y].
  std::vector<Symbol> preimage(Symbol y) const;

 private:
  SystemSpec parent_;
  std::uint64_t theta_;
};

SymbolSequence simulate(const SystemSpec& system, std::span<const Symbol> input);
SymbolSequence simulate(const SystemSpec& system, std::span<const Symbol> input, SystemState init);

/// max over (x, theta) of log2 |f_theta^{-1}[f_theta(x)]|, in bits.
double preimage_bound(const SystemSpec& system);

/// Largest preimage cardinality behind `preimage_bound`.
std::size_t max_preimage_size(const SystemSpec& system);

/// Inverse table (theta, y) -> x of a partially invertible system.
class PartialInverse {
 public:
  static constexpr Symbol kNoPreimage = UINT32_MAX;

  PartialInverse(SystemSpec system, std::vector<Symbol> table);
  const SystemSpec& system() const noexcept { return system_; }
  /// kNoPreimage when y is not in the range of f_theta.
  Symbol invert(std::uint64_t theta, Symbol y) const {
    return table_[theta * system_.output_alphabet().size() + y];
  }

 private:
  SystemSpec system_;
  std::vector<Symbol> table_;
};

struct Collision {
  std::uint64_t theta;
  Symbol x;
  Symbol x_other;
  friend bool operator==(const Collision&, const Collision&) = default;
};

struct InvertibilityVerdict {
  bool invertible = false;
  /// Lexicographically smallest (theta, x, x') with f_theta(x) = f_theta(x').
  std::optional<Collision> witness;
  std::shared_ptr<const PartialInverse> inverse;
};

InvertibilityVerdict check_partial_invertibility(const SystemSpec& system);

/// System equivalent to running `first` and feeding its output to `second`.
SystemSpec cascade(const SystemSpec& first, const SystemSpec& second);

}  // namespace infoloss
