#include "infoloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

constexpr double kMonotoneSlack = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

RateBracket output_rate_bracket(const JointChain& chain, std::size_t max_n, double tolerance,
                                std::uint64_t path_cap, std::size_t output_stage) {
  if (max_n < 2) throw ValidationError("output_rate_bracket needs max_n >= 2");
  BlockEnumerator::Options plain{path_cap, output_stage, false};
  BlockEnumerator::Options anchored{path_cap, output_stage, true};
  BlockEnumerator ys(chain, plain);
  BlockEnumerator sys(chain, anchored);

  RateBracket b;
  const std::size_t stage = output_stage == SIZE_MAX ? chain.stage_count() - 1 : output_stage;
  b.lower = 0.0;
  b.upper = std::log2(static_cast<double>(chain.system().stages()[stage].output.size()));
  double prev_plain = 0.0;
  double prev_anchored = sys.entropy();
  for (std::size_t n = 1; n <= max_n; ++n) {
    try {
      ys.advance(Observe::kOutput);
      sys.advance(Observe::kOutput);
    } catch (const ResourceError&) {
      b.truncated = true;
      break;
    }
    const double up = ys.entropy() - prev_plain;
    const double lo = sys.entropy() - prev_anchored;
    prev_plain = ys.entropy();
    prev_anchored = sys.entropy();
    b.upper_by_length.push_back(up);
    b.lower_by_length.push_back(lo);
    b.upper = n == 1 ? up : std::min(b.upper, up);
    b.lower = n == 1 ? lo : std::max(b.lower, lo);
    if (b.lower > b.upper && b.lower - b.upper < 1e-12) b.lower = b.upper;
    b.block_length = n;
    b.peak_entries = std::max(ys.peak_entries(), sys.peak_entries());
    b.pruned_mass = ys.pruned_mass() + sys.pruned_mass();
    if (b.upper - b.lower <= tolerance) {
      b.converged = true;
      break;
    }
  }
  return b;
}

bool LossReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed || c.skipped; });
}

LossReport loss_rate_report(const MarkovSource& source, const SystemSpec& system, LossOptions options) {
  const JointChain chain = build_joint_chain(source, system, options.caps.states);
  LossReport r;
  r.chain_states = chain.state_count();
  r.input_rate = source_entropy_rate(source);
  r.output_bracket = output_rate_bracket(chain, options.max_n, options.tolerance, options.caps.paths);
  r.loss_lower = r.input_rate - r.output_bracket.upper;
  r.loss_upper = r.input_rate - r.output_bracket.lower;
  r.preimage_bound = preimage_bound(system);
  r.invertible = check_partial_invertibility(system).invertible;

  const double tol = kIdentityTolerance;
  const auto& b = r.output_bracket;
  auto check = [&](std::string name, bool ok, std::string detail) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  check("dpi", b.lower <= r.input_rate + tol,
        "output lower " + fmt(b.lower) + " <= input rate " + fmt(r.input_rate));
  check("loss-nonnegative", r.loss_lower >= -(b.width() + tol),
        "loss lower " + fmt(r.loss_lower) + " >= -(bracket width " + fmt(b.width()) + ")");
  check("preimage-bound", r.loss_lower <= r.preimage_bound + tol && r.loss_upper <= r.preimage_bound + tol,
        "loss bracket [" + fmt(r.loss_lower) + ", " + fmt(r.loss_upper) + "] <= bound " + fmt(r.preimage_bound));
  check("bound-zero-iff-invertible", (r.preimage_bound == 0.0) == r.invertible,
        "bound " + fmt(r.preimage_bound) + ", invertible " + (r.invertible ? "true" : "false"));
  if (r.invertible) {
    check("lossless-when-invertible", r.loss_lower <= tol && r.loss_upper >= -tol,
          "0 in [" + fmt(r.loss_lower) + ", " + fmt(r.loss_upper) + "]");
  }
  bool monotone = true;
  for (std::size_t i = 1; i < b.upper_by_length.size(); ++i) {
    monotone = monotone && b.upper_by_length[i] <= b.upper_by_length[i - 1] + kMonotoneSlack &&
               b.lower_by_length[i] >= b.lower_by_length[i - 1] - kMonotoneSlack;
  }
  check("bracket-monotone", monotone, "over " + std::to_string(b.upper_by_length.size()) + " block lengths");
  if (b.pruned_mass >= kPrunedMassLimit) {
    for (auto& c : r.checks) {
      if (c.passed) continue;
      c.skipped = true;
      c.detail += " (not asserted: pruned mass " + fmt(b.pruned_mass) + ")";
    }
  }
  return r;
}

std::vector<FiniteLengthLoss> finite_length_losses(const MarkovSource& source, const SystemSpec& system,
                                                   std::size_t max_K, AnalysisCaps caps) {
  if (system.is_composite()) throw UnsupportedAnalysis("finite-length losses need a single-recursion system");
  const std::size_t m = std::max(system.input_memory(), system.output_memory());
  if (max_K <= m) throw ValidationError("finite-length losses need K > max(M, N)");
  const JointChain chain = build_joint_chain(source, system, caps.states);
  BlockEnumerator::Options opt;
  opt.path_cap = caps.paths;
  const std::vector<Observe> ys(max_K, Observe::kOutput);
  const std::vector<Observe> xys(max_K, Observe::kJoint);
  std::vector<Observe> mixed(max_K, Observe::kOutput);
  std::fill_n(mixed.begin(), m, Observe::kJoint);
  const auto hy = block_entropy_profile(chain, ys, opt);
  const auto hxy = block_entropy_profile(chain, xys, opt);
  const auto hmix = block_entropy_profile(chain, mixed, opt);
  std::vector<FiniteLengthLoss> out;
  for (std::size_t K = m + 1; K <= max_K; ++K) {
    out.push_back({hxy[K - 1] - hy[K - 1], hmix[K - 1] - hy[K - 1], m, K});
  }
  return out;
}

FiniteLengthLoss finite_length_loss(const MarkovSource& source, const SystemSpec& system, std::size_t K,
                                    AnalysisCaps caps) {
  return finite_length_losses(source, system, K, caps).back();
}

}  // namespace infoloss
