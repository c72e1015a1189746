#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "infoloss/block_entropy.hpp"
#include "infoloss/joint_chain.hpp"

namespace infoloss {

inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kBracketTolerance = 1e-3;

struct AnalysisCaps {
  std::uint64_t states = kDefaultStateCap;
  std::uint64_t paths = kDefaultPathCap;
};

/// Certified interval for the entropy rate of the output process:
///   lower = H(Y_n | Y_1^{n-1}, S_1) <= rate <= H(Y_n | Y_1^{n-1}) = upper.
struct RateBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t block_length = 0;
  bool converged = false;
  /// Bounds at block lengths 1..block_length, before any running min/max.
  std::vector<double> upper_by_length;
  std::vector<double> lower_by_length;
  /// The path cap stopped the enumeration before max_n or convergence.
  bool truncated = false;
  std::uint64_t peak_entries = 0;
  double pruned_mass = 0.0;

  double width() const noexcept { return upper - lower; }
};

/// Walks block lengths 1, 2, ... up to max_n and stops early once
/// upper - lower <= tolerance. Hitting the path cap ends the walk with the
/// bracket reached so far and converged = false.
RateBracket output_rate_bracket(const JointChain& chain, std::size_t max_n, double tolerance = kBracketTolerance,
                                std::uint64_t path_cap = kDefaultPathCap, std::size_t output_stage = SIZE_MAX);

inline constexpr double kPrunedMassLimit = 1e-12;

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Failed while pruned mass was at or above kPrunedMassLimit; not asserted.
  bool skipped = false;
};

struct LossReport {
  double input_rate = 0.0;
  RateBracket output_bracket;
  double loss_lower = 0.0;  // input_rate - output_bracket.upper
  double loss_upper = 0.0;  // input_rate - output_bracket.lower
  double preimage_bound = 0.0;
  bool invertible = false;
  std::uint64_t chain_states = 0;
  std::vector<InvariantCheck> checks;

  bool all_checks_passed() const;
  bool contains(double loss, double slack = 0.0) const {
    return loss_lower - slack <= loss && loss <= loss_upper + slack;
  }
};

struct LossOptions {
  std::size_t max_n = 16;
  double tolerance = kBracketTolerance;
  AnalysisCaps caps;
};

LossReport loss_rate_report(const MarkovSource& source, const SystemSpec& system, LossOptions options = {});

struct FiniteLengthLoss {
  double lhs = 0.0;  // H(X_1^K | Y_1^K)
  double rhs = 0.0;  // H(X_1^m | Y_1^K), m = max(M, N)
  std::size_t memory = 0;
  std::size_t K = 0;
};

/// Exact finite-length losses. Requires a single-recursion system and
/// K > max(M, N).
FiniteLengthLoss finite_length_loss(const MarkovSource& source, const SystemSpec& system, std::size_t K,
                                    AnalysisCaps caps = {});
/// The same for every K in (max(M, N), max_K], sharing one enumeration.
std::vector<FiniteLengthLoss> finite_length_losses(const MarkovSource& source, const SystemSpec& system,
                                                   std::size_t max_K, AnalysisCaps caps = {});

}  // namespace infoloss
