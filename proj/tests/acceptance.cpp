// Acceptance runner: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "infoloss/block_entropy.hpp"
#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"
#include "infoloss/filter_analysis.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/plugin.hpp"
#include "infoloss/random_instances.hpp"
#include "infoloss/reconstruction.hpp"
#include "infoloss/suites.hpp"
#include "infoloss/zoo.hpp"

using namespace infoloss;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Verdict {
  bool passed = false;
  std::string summary;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

MarkovSource uniform(const Alphabet& a) {
  const std::vector<double> pmf(a.size(), 1.0 / static_cast<double>(a.size()));
  return make_iid(a, pmf);
}

SuiteOptions suite_options(std::size_t instances) {
  SuiteOptions o;
  o.seed = kSeed;
  o.instances = instances;
  o.max_n = 12;
  return o;
}

std::string first_failure(const SuiteReport& r) {
  for (const auto& c : r.cases) {
    if (!c.passed) return "; first failure #" + std::to_string(c.index) + " " + c.instance + ": " + c.detail;
  }
  return "";
}

Verdict from_suite(const std::string& name, std::size_t instances) {
  const SuiteReport r = run_suite(name, suite_options(instances));
  return {r.all_passed(), std::to_string(r.passed()) + "/" + std::to_string(r.cases.size()) + " instances" +
                              first_failure(r)};
}

Verdict criterion1() { return from_suite("thm1-identity", 200); }
Verdict criterion2() { return from_suite("dpi", 200); }

Verdict criterion3() {
  const SuiteReport r = run_suite("thm2-bound", suite_options(200));
  std::size_t invertible = 0;
  for (const auto& c : r.cases) invertible += c.detail.find("invertible yes") != std::string::npos ? 1 : 0;
  return {r.all_passed(), std::to_string(r.passed()) + "/200 instances, " + std::to_string(invertible) +
                              " partially invertible" + first_failure(r)};
}

Verdict criterion4() {
  constexpr std::size_t kPerPlacement = 30;
  std::size_t ok = 0, total = 0, markov_ok = 0;
  double widest = 0;
  std::size_t longest = 0;
  std::string failure;
  for (auto placement : {QuantizerPlacement::kAfterAccumulate, QuantizerPlacement::kAfterMultiply}) {
    for (std::size_t i = 0; i < kPerPlacement; ++i, ++total) {
      Rng rng = instance_rng(kSeed + static_cast<std::uint64_t>(placement), i);
      const FixedPointInstance inst = random_fixed_point_filter(rng, placement);
      const auto verdict = check_partial_invertibility(inst.system);
      LossOptions lo;
      lo.max_n = 16;
      const LossReport r = loss_rate_report(uniform(inst.system.input_alphabet()), inst.system, lo);
      const bool pass = verdict.invertible && r.contains(0.0, kIdentityTolerance) &&
                        r.output_bracket.width() <= kBracketTolerance && r.output_bracket.block_length <= 16;
      widest = std::max(widest, r.output_bracket.width());
      longest = std::max(longest, r.output_bracket.block_length);
      // Same filter under a Dirichlet Markov source: 0 must stay inside the
      // (wider) certified bracket.
      LossOptions markov_lo;
      markov_lo.max_n = 8;
      markov_lo.caps.paths = std::uint64_t{1} << 20;
      const LossReport rm = loss_rate_report(random_markov_source(inst.system.input_alphabet(), rng), inst.system,
                                             markov_lo);
      const bool markov_pass = rm.contains(0.0, kIdentityTolerance);
      markov_ok += markov_pass ? 1 : 0;
      if (pass && markov_pass) {
        ++ok;
      } else if (failure.empty()) {
        failure = "; first failure k=" + std::to_string(inst.word_bits) + " F=" + std::to_string(inst.frac_bits) +
                  " bracket [" + fmt(r.loss_lower) + ", " + fmt(r.loss_upper) + "], Markov bracket [" +
                  fmt(rm.loss_lower) + ", " + fmt(rm.loss_upper) + "]";
      }
    }
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " filters, widest bracket " + fmt(widest) +
                           " bits, longest block " + std::to_string(longest) + "; Markov-source brackets containing 0: " +
                           std::to_string(markov_ok) + "/" + std::to_string(total) + failure};
}

Verdict criterion5() { return from_suite("thm3-additivity", 50); }

Verdict criterion6() {
  const SuiteReport r = run_suite("thm4-finite", suite_options(100));
  std::string detail = std::to_string(r.passed()) + "/100 invertible systems" + first_failure(r);

  const std::vector<std::int64_t> values{1, 2};
  const SystemSpec mul = multiplier_system(values);
  const JointChain chain = build_joint_chain(uniform(mul.input_alphabet()), mul);
  const std::vector<Observe> ys(8, Observe::kOutput), xys(8, Observe::kJoint);
  const auto hy = block_entropy_profile(chain, ys);
  const auto hxy = block_entropy_profile(chain, xys);
  bool multiplier_ok = true;
  detail += "; multiplier on {1,2}: H(X^K|Y^K) for K=1..8 =";
  for (std::size_t k = 0; k < 8; ++k) {
    const double h = hxy[k] - hy[k];
    multiplier_ok = multiplier_ok && std::abs(h - 1.0) <= kIdentityTolerance;
    detail += " " + fmt(h);
  }
  detail += multiplier_ok ? " (expected 1.0)" : " (criterion expects 1.0 for every K)";
  return {r.all_passed() && multiplier_ok, detail};
}

Verdict criterion7() {
  const SystemSpec sq = squarer_system();
  const LossReport r = loss_rate_report(uniform(sq.input_alphabet()), sq);
  const bool ok = r.contains(2.0 / 3.0, 1e-6) && r.preimage_bound == 1.0;
  return {ok, "loss bracket [" + fmt(r.loss_lower) + ", " + fmt(r.loss_upper) + "], bound " + fmt(r.preimage_bound)};
}

Verdict criterion8() {
  double worst = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng = instance_rng(kSeed, i);
    const TransferFunction tf = random_stable_filter(rng);
    worst = std::max(worst, std::abs(rate_change_integral(tf) - rate_change_roots(tf)));
  }
  const TransferFunction g({1.0, -2.0}, {});
  const double by_integral = rate_change_integral(g), by_roots = rate_change_roots(g);
  const double ln2 = std::numbers::ln2;
  const bool ok = worst <= 1e-6 && std::abs(by_integral - ln2) <= 1e-6 && std::abs(by_roots - ln2) <= 1e-6;
  return {ok, "max disagreement " + fmt(worst) + " nats over 100 filters; 1 - 2/z: " + fmt(by_integral) + " / " +
                  fmt(by_roots)};
}

Verdict criterion9() {
  constexpr std::size_t kSequences = 1000, kLength = 200;
  const Alphabet z4 = Alphabet::modular(4), z8 = Alphabet::modular(8);
  const std::vector<std::int64_t> pos{1, 2}, sign{-1, 1};
  const Quantizer q = Quantizer::truncating(3, 2);
  const std::vector<std::pair<std::string, SystemSpec>> systems{
      {"identity", identity_system(Alphabet::modular(3))},
      {"xor", xor_filter()},
      {"multiplier-1-2", multiplier_system(pos)},
      {"multiplier-sign", multiplier_system(sign)},
      {"ring-z4", ring_linear_filter(z4, {{1, 3}, {2}})},
      {"fixed-point-accumulate", fixed_point_filter(z8, {{4, -3}, {2}}, q, QuantizerPlacement::kAfterAccumulate)},
      {"fixed-point-multiply", fixed_point_filter(z8, {{4, 5}, {-7}}, q, QuantizerPlacement::kAfterMultiply)}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, system] : systems) {
    const auto verdict = check_partial_invertibility(system);
    if (!verdict.invertible) {
      ok = false;
      detail += name + " not invertible; ";
      continue;
    }
    const MarkovSource src = uniform(system.input_alphabet());
    Rng rng = instance_rng(kSeed, 9);
    std::size_t good = 0;
    for (std::size_t i = 0; i < kSequences; ++i) {
      const SystemState init = system.decode(uniform_below(rng, system.theta_count()));
      const auto x = sample_path(src, kLength, kSeed + i);
      good += round_trip(*verdict.inverse, x, init).passed ? 1 : 0;
    }
    ok = ok && good == kSequences;
    detail += name + " " + std::to_string(good) + "/" + std::to_string(kSequences) + "; ";
  }

  const SystemSpec mul = multiplier_system(pos);
  const auto inverse = check_partial_invertibility(mul).inverse;
  const MarkovSource src = uniform(mul.input_alphabet());
  const auto in_values = mul.input_alphabet().integer_values();
  const auto out_values = mul.output_alphabet().integer_values();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < kSequences; ++i) {
    const auto path = sample_path(src, kLength + 1, kSeed + 7 * i);
    const SystemState init{{path[0]}, {}};
    const std::vector<Symbol> x(path.begin() + 1, path.end());
    const auto y = simulate(mul, x, init);
    const auto generic = reconstruct(*inverse, y, std::span<const Symbol>(x).first(1), init);
    std::vector<std::int64_t> yv;
    for (Symbol s : y) yv.push_back(out_values[s]);
    const auto closed = multiplier_closed_form(yv, in_values[x[0]]);
    bool same = closed.size() == generic.size();
    for (std::size_t n = 0; same && n < closed.size(); ++n) same = closed[n] == Rational(in_values[generic[n]]);
    agree += same ? 1 : 0;
  }
  ok = ok && agree == kSequences;
  detail += "closed form agrees on " + std::to_string(agree) + "/" + std::to_string(kSequences);
  return {ok, detail};
}

Verdict criterion10() {
  constexpr std::size_t kLength = 1'000'000, kBlock = 8;
  const SystemSpec xr = xor_filter();
  const auto x2 = sample_path(uniform(xr.input_alphabet()), kLength, kSeed);
  const PluginEstimate ex = plugin_estimate(x2, simulate(xr, x2), kBlock, 2, 2);
  const SystemSpec id = identity_system(Alphabet::modular(2));
  const auto xi = sample_path(uniform(id.input_alphabet()), kLength, kSeed + 1);
  const PluginEstimate ei = plugin_estimate(xi, simulate(id, xi), kBlock, 2, 2);
  const bool ok = std::abs(ex.loss) <= 0.02 && std::abs(ei.loss) <= 0.01;
  return {ok, "xor loss estimate " + fmt(ex.loss) + ", identity " + fmt(ei.loss)};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> list{
      {"block identity H(X^n,Y^n) = H(X^n,Y^m)", criterion1},
      {"output rate never exceeds input rate", criterion2},
      {"loss bounded by the preimage bound", criterion3},
      {"fixed-point filters are lossless", criterion4},
      {"cascade losses add", criterion5},
      {"finite-length loss concentrates in the first max(M,N) inputs", criterion6},
      {"static squarer loses 2/3 bit", criterion7},
      {"rate change: integral vs zeros", criterion8},
      {"bit-exact reconstruction", criterion9},
      {"plug-in estimator sanity", criterion10}};
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-10); default runs all")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (std::size_t i = 0; i < criteria().size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria()[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu: %s  %s (%.1fs)  %s\n", i + 1, v.passed ? "PASS" : "FAIL", criteria()[i].first.c_str(),
                secs, v.summary.c_str());
    std::fflush(stdout);
    all = all && v.passed;
  }
  return all ? 0 : 1;
}
