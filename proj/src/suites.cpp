#include "infoloss/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "infoloss/block_entropy.hpp"
#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"
#include "infoloss/reconstruction.hpp"
#include "infoloss/zoo.hpp"

namespace infoloss {
namespace {

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

Alphabet sized(std::size_t k) { return Alphabet::modular(static_cast<std::uint32_t>(k)); }

struct Outcome {
  bool passed = false;
  std::string detail;
};

}  // namespace

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return c.passed; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dpi",         "thm1-identity", "thm2-bound", "thm3-additivity",
                                              "thm4-finite", "cor2-lossless", "zoo-all"};
  return names;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::string describe(const SystemSpec& system) {
  std::ostringstream s;
  s << "|X|=" << system.input_alphabet().size() << " |Y|=" << system.output_alphabet().size()
    << " N=" << system.input_memory() << " M=" << system.output_memory();
  if (system.is_composite()) s << " stages=" << system.stages().size();
  return s.str();
}

std::string dump(const MarkovSource& source, const SystemSpec& system) {
  std::ostringstream s;
  s << std::setprecision(17) << "P=[";
  const auto& p = source.transition_matrix();
  for (std::size_t i = 0; i < p.size(); ++i) s << (i ? " " : "") << p[i];
  s << "]";
  for (std::size_t k = 0; k < system.stages().size(); ++k) {
    const Stage& st = system.stages()[k];
    s << " stage" << k << "{X=" << st.input.size() << " Y=" << st.output.size() << " N=" << st.input_memory
      << " M=" << st.output_memory << " table=[";
    for (std::size_t i = 0; i < st.table.size(); ++i) s << (i ? " " : "") << st.table[i];
    s << "]}";
  }
  return s.str();
}

RandomInstance general_instance(std::uint64_t seed, std::size_t index) {
  Rng rng = instance_rng(seed, index);
  const std::size_t kx = static_cast<std::size_t>(uniform_between(rng, 2, 3));
  const bool invertible = uniform_below(rng, 4) == 0;
  const std::size_t ky = invertible ? static_cast<std::size_t>(uniform_between(rng, static_cast<std::int64_t>(kx), 3))
                                    : static_cast<std::size_t>(uniform_between(rng, 2, 3));
  const auto N = static_cast<std::size_t>(uniform_between(rng, 0, 2));
  const auto M = static_cast<std::size_t>(uniform_between(rng, 0, 2));
  MarkovSource source = random_markov_source(sized(kx), rng);
  SystemSpec system = invertible ? random_invertible_system(sized(kx), sized(ky), N, M, rng)
                                 : random_table_system(sized(kx), sized(ky), N, M, rng);
  return {std::move(source), std::move(system)};
}

RandomInstance invertible_instance(std::uint64_t seed, std::size_t index) {
  Rng rng = instance_rng(seed, index);
  const std::size_t kx = static_cast<std::size_t>(uniform_between(rng, 2, 3));
  const std::size_t ky = static_cast<std::size_t>(uniform_between(rng, static_cast<std::int64_t>(kx), 3));
  const auto N = static_cast<std::size_t>(uniform_between(rng, 0, 2));
  const auto M = static_cast<std::size_t>(uniform_between(rng, 0, 2));
  MarkovSource source = random_markov_source(sized(kx), rng);
  SystemSpec system = random_invertible_system(sized(kx), sized(ky), N, M, rng);
  return {std::move(source), std::move(system)};
}

namespace {

LossOptions loss_options(const SuiteOptions& o) {
  LossOptions l;
  l.max_n = o.max_n;
  l.caps = o.caps;
  return l;
}

Outcome check_dpi(const RandomInstance& inst, const SuiteOptions& o) {
  const LossReport r = loss_rate_report(inst.source, inst.system, loss_options(o));
  const double margin = r.input_rate - r.output_bracket.lower;
  return {margin >= -kIdentityTolerance,
          "input rate " + num(r.input_rate) + ", output bracket [" + num(r.output_bracket.lower) + ", " +
              num(r.output_bracket.upper) + "] at n=" + std::to_string(r.output_bracket.block_length)};
}

Outcome check_thm1(const RandomInstance& inst, const SuiteOptions& o) {
  constexpr std::size_t kLongest = 10;
  const std::size_t m = std::max(inst.system.input_memory(), inst.system.output_memory());
  const JointChain chain = build_joint_chain(inst.source, inst.system, o.caps.states);
  BlockEnumerator::Options opt;
  opt.path_cap = o.caps.paths;
  const std::vector<Observe> joint(kLongest, Observe::kJoint);
  std::vector<Observe> head(kLongest, Observe::kInput);
  std::fill_n(head.begin(), m, Observe::kJoint);
  const auto full = block_entropy_profile(chain, joint, opt);
  const auto part = block_entropy_profile(chain, head, opt);
  double worst = 0;
  std::size_t at = 0;
  for (std::size_t n = m + 1; n <= kLongest; ++n) {
    const double gap = std::abs(full[n - 1] - part[n - 1]);
    if (gap >= worst) {
      worst = gap;
      at = n;
    }
  }
  return {worst <= kIdentityTolerance, "max |H(X^n,Y^n) - H(X^n,Y^m)| = " + num(worst) + " at n=" + std::to_string(at)};
}

Outcome check_thm2(const RandomInstance& inst, const SuiteOptions& o) {
  const LossReport r = loss_rate_report(inst.source, inst.system, loss_options(o));
  const bool below = r.loss_lower <= r.preimage_bound + kIdentityTolerance;
  const bool zero_if_invertible = !r.invertible || r.preimage_bound == 0.0;
  return {below && zero_if_invertible, "loss bracket [" + num(r.loss_lower) + ", " + num(r.loss_upper) + "], bound " +
                                           num(r.preimage_bound) + ", invertible " + (r.invertible ? "yes" : "no")};
}

Outcome check_cor2(const RandomInstance& inst, const SuiteOptions& o) {
  const LossReport r = loss_rate_report(inst.source, inst.system, loss_options(o));
  const bool ok = r.invertible && r.preimage_bound == 0.0 && r.contains(0.0, kIdentityTolerance);
  return {ok, "loss bracket [" + num(r.loss_lower) + ", " + num(r.loss_upper) + "], width " +
                  num(r.output_bracket.width()) + ", invertible " + (r.invertible ? "yes" : "no")};
}

Outcome check_thm4(const RandomInstance& inst, const SuiteOptions& o) {
  constexpr std::size_t kLongest = 8;
  const auto losses = finite_length_losses(inst.source, inst.system, kLongest, o.caps);
  double worst = 0;
  std::string values;
  for (const auto& l : losses) {
    worst = std::max(worst, std::abs(l.lhs - l.rhs));
    values += " K=" + std::to_string(l.K) + ":" + num(l.lhs);
  }
  return {worst <= kIdentityTolerance, "max |lhs - rhs| = " + num(worst) + ";" + values};
}

struct CascadeInstance {
  MarkovSource source;
  SystemSpec first;
  SystemSpec second;
};

CascadeInstance cascade_instance(std::uint64_t seed, std::size_t index) {
  Rng rng = instance_rng(seed, index);
  const auto kx = static_cast<std::size_t>(uniform_between(rng, 2, 3));
  const auto kz = static_cast<std::size_t>(uniform_between(rng, 2, 3));
  const auto ky = static_cast<std::size_t>(uniform_between(rng, 2, 3));
  auto order = [&] { return static_cast<std::size_t>(uniform_between(rng, 0, 1)); };
  const std::size_t n1 = order(), m1 = order(), n2 = order(), m2 = order();
  MarkovSource source = random_markov_source(sized(kx), rng);
  SystemSpec first = random_table_system(sized(kx), sized(kz), n1, m1, rng);
  SystemSpec second = random_table_system(sized(kz), sized(ky), n2, m2, rng);
  return {std::move(source), std::move(first), std::move(second)};
}

Outcome check_thm3(const CascadeInstance& inst, const SuiteOptions& o) {
  const double hx = source_entropy_rate(inst.source);
  const SystemSpec pipeline = SystemSpec::from_stages({inst.first.stages()[0], inst.second.stages()[0]});
  const JointChain staged = build_joint_chain(inst.source, pipeline, o.caps.states);
  const RateBracket z = output_rate_bracket(staged, o.max_n, kBracketTolerance, o.caps.paths, 0);
  const RateBracket y = output_rate_bracket(staged, o.max_n, kBracketTolerance, o.caps.paths, 1);
  const SystemSpec combined = cascade(inst.first, inst.second);
  const JointChain chain = build_joint_chain(inst.source, combined, o.caps.states);
  const RateBracket c = output_rate_bracket(chain, o.max_n, kBracketTolerance, o.caps.paths);

  // Stage losses: H(X) - H(Z) and H(Z) - H(Y).
  const double s1_lo = hx - z.upper, s1_hi = hx - z.lower;
  const double s2_lo = z.lower - y.upper, s2_hi = z.upper - y.lower;
  const double sum_lo = s1_lo + s2_lo, sum_hi = s1_hi + s2_hi;
  const double c_lo = hx - c.upper, c_hi = hx - c.lower;
  const double tol = (s1_hi - s1_lo) + (s2_hi - s2_lo) + (c_hi - c_lo) + kIdentityTolerance;
  const double gap = std::max(c_lo - sum_hi, sum_lo - c_hi);
  return {gap <= tol, "cascade [" + num(c_lo) + ", " + num(c_hi) + "], stage sum [" + num(sum_lo) + ", " +
                          num(sum_hi) + "], gap " + num(gap) + ", tolerance " + num(tol) +
                          (combined.is_composite() ? ", composite" : ", flattened")};
}

struct ZooCase {
  std::string name;
  MarkovSource source;
  SystemSpec system;
  std::optional<double> loss;  // closed-form loss rate
  double loss_slack = kIdentityTolerance;
  std::optional<double> bound;
};

MarkovSource uniform(const Alphabet& a) {
  const std::vector<double> pmf(a.size(), 1.0 / static_cast<double>(a.size()));
  return make_iid(a, pmf);
}

std::vector<ZooCase> zoo_cases() {
  std::vector<ZooCase> cases;
  const Alphabet z2 = Alphabet::modular(2), z4 = Alphabet::modular(4), z8 = Alphabet::modular(8);
  cases.push_back({"identity", uniform(Alphabet::modular(3)), identity_system(Alphabet::modular(3)), 0.0,
                   kIdentityTolerance, 0.0});
  cases.push_back({"xor", uniform(z2), xor_filter(), 0.0, kIdentityTolerance, 0.0});
  // H(Y) of the AND of successive fair bits, from a long exact enumeration.
  cases.push_back({"and", uniform(z2), binary_and_system(), 1.0 - 0.6992432033876, 1e-3, 1.0});
  const SystemSpec sq = squarer_system();
  cases.push_back({"squarer", uniform(sq.input_alphabet()), sq, 2.0 / 3.0, kIdentityTolerance, 1.0});
  const std::vector<std::int64_t> pos{1, 2}, sign{-1, 1};
  const SystemSpec mul12 = multiplier_system(pos);
  cases.push_back({"multiplier-1-2", uniform(mul12.input_alphabet()), mul12, 0.0, kIdentityTolerance, 0.0});
  const SystemSpec mulpm = multiplier_system(sign);
  cases.push_back({"multiplier-sign", uniform(mulpm.input_alphabet()), mulpm, 0.0, kIdentityTolerance, 0.0});
  cases.push_back({"ring-z4-2x", uniform(z4), ring_linear_filter(z4, {{2, 0}, {}}), 1.0, kIdentityTolerance, 1.0});
  cases.push_back({"ring-z4-iir", uniform(z4), ring_linear_filter(z4, {{1, 3}, {2}}), 0.0, kIdentityTolerance, 0.0});
  const Quantizer q = Quantizer::truncating(3, 2);
  cases.push_back({"fixed-point-accumulate", uniform(z8),
                   fixed_point_filter(z8, {{4, -3}, {2}}, q, QuantizerPlacement::kAfterAccumulate), 0.0,
                   kIdentityTolerance, 0.0});
  cases.push_back({"fixed-point-multiply", uniform(z8),
                   fixed_point_filter(z8, {{4, 5}, {-7}}, q, QuantizerPlacement::kAfterMultiply), 0.0,
                   kIdentityTolerance, 0.0});
  cases.push_back({"hammerstein", uniform(sq.input_alphabet()), hammerstein_system(sq, xor_filter()), 2.0 / 3.0,
                   kIdentityTolerance, std::nullopt});
  return cases;
}

Outcome check_zoo(const ZooCase& zc, const SuiteOptions& o, std::size_t roundtrips, std::uint64_t seed) {
  LossOptions lo = loss_options(o);
  lo.max_n = std::max<std::size_t>(lo.max_n, 16);
  const LossReport r = loss_rate_report(zc.source, zc.system, lo);
  bool ok = r.all_checks_passed();
  std::string detail = "loss [" + num(r.loss_lower) + ", " + num(r.loss_upper) + "], bound " + num(r.preimage_bound);
  for (const auto& c : r.checks) {
    if (!c.passed) detail += "; failed " + c.name + ": " + c.detail;
  }
  if (zc.loss) {
    const bool hit = r.contains(*zc.loss, zc.loss_slack);
    ok = ok && hit;
    if (!hit) detail += "; expected loss " + num(*zc.loss);
  }
  if (zc.bound) {
    const bool hit = std::abs(r.preimage_bound - *zc.bound) <= kIdentityTolerance;
    ok = ok && hit;
    if (!hit) detail += "; expected bound " + num(*zc.bound);
  }
  if (r.invertible && zc.system.is_table()) {
    const auto verdict = check_partial_invertibility(zc.system);
    std::size_t failures = 0;
    for (std::size_t i = 0; i < roundtrips; ++i) {
      const auto x = sample_path(zc.source, 64, seed + i);
      failures += round_trip(*verdict.inverse, x, zc.system.zero_state()).passed ? 0 : 1;
    }
    ok = ok && failures == 0;
    detail += "; round trips " + std::to_string(roundtrips - failures) + "/" + std::to_string(roundtrips);
  }
  return {ok, detail};
}

template <class Make, class Check, class Describe>
SuiteReport run_cases(const std::string& name, const SuiteOptions& o, std::size_t count, Make make, Check check,
                      Describe describe_case) {
  SuiteReport report{name, o.seed, std::vector<SuiteCase>(count)};
  parallel_for(count, o.threads, [&](std::size_t i) {
    SuiteCase& c = report.cases[i];
    c.index = i;
    try {
      auto inst = make(i);
      c.instance = describe_case(inst);
      Outcome out = check(inst);
      c.passed = out.passed;
      c.detail = std::move(out.detail);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
  });
  return report;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
  auto general = [&](std::size_t i) { return general_instance(o.seed, i); };
  auto invertible = [&](std::size_t i) { return invertible_instance(o.seed, i); };
  auto describe_random = [](const RandomInstance& inst) { return describe(inst.system); };
  auto with_dump = [](auto check) {
    return [check](const RandomInstance& inst) {
      Outcome out = check(inst);
      if (!out.passed) out.detail += "; instance " + dump(inst.source, inst.system);
      return out;
    };
  };

  if (name == "dpi") {
    return run_cases(name, o, o.instances, general, with_dump([&](const RandomInstance& r) { return check_dpi(r, o); }),
                     describe_random);
  }
  if (name == "thm1-identity") {
    return run_cases(name, o, o.instances, general,
                     with_dump([&](const RandomInstance& r) { return check_thm1(r, o); }), describe_random);
  }
  if (name == "thm2-bound") {
    return run_cases(name, o, o.instances, general,
                     with_dump([&](const RandomInstance& r) { return check_thm2(r, o); }), describe_random);
  }
  if (name == "thm4-finite") {
    return run_cases(name, o, o.instances, invertible,
                     with_dump([&](const RandomInstance& r) { return check_thm4(r, o); }), describe_random);
  }
  if (name == "cor2-lossless") {
    return run_cases(name, o, o.instances, invertible,
                     with_dump([&](const RandomInstance& r) { return check_cor2(r, o); }), describe_random);
  }
  if (name == "thm3-additivity") {
    return run_cases(
        name, o, o.instances, [&](std::size_t i) { return cascade_instance(o.seed, i); },
        [&](const CascadeInstance& inst) {
          Outcome out = check_thm3(inst, o);
          if (!out.passed) {
            out.detail += "; first " + dump(inst.source, inst.first) + "; second " + dump(inst.source, inst.second);
          }
          return out;
        },
        [](const CascadeInstance& inst) { return describe(inst.first) + " -> " + describe(inst.second); });
  }
  if (name == "zoo-all") {
    const auto cases = zoo_cases();
    return run_cases(
        name, o, cases.size(), [&](std::size_t i) { return i; },
        [&](std::size_t i) { return check_zoo(cases[i], o, o.instances, o.seed); },
        [&](std::size_t i) { return cases[i].name + " " + describe(cases[i].system); });
  }
  throw ValidationError("unknown suite '" + name + "'");
}

}  // namespace infoloss
