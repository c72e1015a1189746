#include <doctest.h>

#include <cmath>
#include <map>

#include "infoloss/block_entropy.hpp"
#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"
#include "infoloss/joint_chain.hpp"
#include "infoloss/loss.hpp"
#include "infoloss/plugin.hpp"
#include "infoloss/random_instances.hpp"
#include "infoloss/suites.hpp"
#include "infoloss/zoo.hpp"

using namespace infoloss;

namespace {

MarkovSource uniform(const Alphabet& a) {
  const std::vector<double> pmf(a.size(), 1.0 / static_cast<double>(a.size()));
  return make_iid(a, pmf);
}

double entropy_of(const std::map<SymbolSequence, double>& m) {
  CompensatedSum h;
  for (const auto& [k, p] : m) h.add(neg_plogp(p));
  return h.value();
}

// Brute-force reference. The law of (previous input, state) is the limit of
// the lazy chain started from a stationary input history and zero output
// buffers; block laws come from enumerating every input path from every
// starting state.
struct Oracle {
  std::map<SymbolSequence, double> x, y, xy;
};

std::vector<double> lazy_limit(const MarkovSource& src, const SystemSpec& sys) {
  const std::size_t k = src.size(), t = sys.theta_count();
  std::vector<double> mu(k * t, 0.0);
  const std::size_t hist = std::max<std::size_t>(sys.input_buffer_length(), 1);
  std::vector<Symbol> h(hist, 0);
  for (std::uint64_t code = 0;; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < hist; ++i) {
      h[hist - 1 - i] = static_cast<Symbol>(c % k);
      c /= k;
    }
    if (c) break;
    double p = src.stationary()[h[0]];
    for (std::size_t i = 1; i < hist; ++i) p *= src.transition(h[i - 1], h[i]);
    SystemState st = sys.zero_state();
    std::copy(h.end() - static_cast<std::ptrdiff_t>(sys.input_buffer_length()), h.end(), st.recent_inputs.begin());
    mu[h.back() * t + sys.encode(st)] += p;
  }
  for (int it = 0; it < 4000; ++it) {
    std::vector<double> next(mu.size(), 0.0);
    for (std::size_t s = 0; s < mu.size(); ++s) {
      if (mu[s] == 0.0) continue;
      next[s] += 0.5 * mu[s];
      const Symbol a = static_cast<Symbol>(s / t);
      for (Symbol xn = 0; xn < k; ++xn) {
        SystemState st = sys.decode(s % t);
        sys.step(st, xn);
        next[xn * t + sys.encode(st)] += 0.5 * mu[s] * src.transition(a, xn);
      }
    }
    mu.swap(next);
  }
  return mu;
}

Oracle brute_force(const MarkovSource& src, const SystemSpec& sys, std::size_t n) {
  const auto mu = lazy_limit(src, sys);
  const std::size_t k = src.size(), t = sys.theta_count();
  Oracle o;
  SymbolSequence x(n);
  for (std::size_t s = 0; s < mu.size(); ++s) {
    if (mu[s] < 1e-300) continue;
    std::uint64_t paths = 1;
    for (std::size_t i = 0; i < n; ++i) paths *= k;
    for (std::uint64_t code = 0; code < paths; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < n; ++i) {
        x[n - 1 - i] = static_cast<Symbol>(c % k);
        c /= k;
      }
      double p = mu[s];
      Symbol prev = static_cast<Symbol>(s / t);
      for (Symbol xi : x) {
        p *= src.transition(prev, xi);
        prev = xi;
      }
      if (p == 0.0) continue;
      const auto y = simulate(sys, x, sys.decode(s % t));
      SymbolSequence joint;
      for (std::size_t i = 0; i < n; ++i) {
        joint.push_back(x[i]);
        joint.push_back(y[i]);
      }
      o.x[x] += p;
      o.y[y] += p;
      o.xy[joint] += p;
    }
  }
  return o;
}

}  // namespace

TEST_CASE("joint chain examples") {
  const std::vector<double> pmf{0.2, 0.3, 0.5};
  const MarkovSource src = make_iid(Alphabet::modular(3), pmf);
  const JointChain stat = build_joint_chain(src, static_system(Alphabet::modular(3), Alphabet::modular(2), {0, 1, 1}));
  CHECK(stat.state_count() == 3);
  for (std::uint32_t s = 0; s < 3; ++s) {
    for (const auto& arc : stat.arcs(s)) CHECK(arc.probability == doctest::Approx(pmf[arc.x]));
  }

  const JointChain x = build_joint_chain(uniform(Alphabet::modular(2)), xor_filter());
  CHECK(x.state_count() == 2);
  CHECK(x.stationary()[0] == doctest::Approx(0.5));
  CHECK(x.stationary()[1] == doctest::Approx(0.5));

  const JointChain a = build_joint_chain(uniform(Alphabet::modular(2)), binary_and_system());
  CHECK(a.state_count() == 2);
  CHECK(a.stationary()[0] == doctest::Approx(0.5));
  CHECK(a.stationary()[1] == doctest::Approx(0.5));
}

TEST_CASE("joint chain invariants") {
  for (std::size_t i = 0; i < 100; ++i) {
    const RandomInstance inst = general_instance(5, i);
    const JointChain c = build_joint_chain(inst.source, inst.system);
    std::vector<double> next(c.state_count(), 0.0);
    for (std::uint32_t s = 0; s < c.state_count(); ++s) {
      double row = 0;
      const auto label = c.label(s);
      for (const auto& arc : c.arcs(s)) {
        row += arc.probability;
        next[arc.next] += c.stationary()[s] * arc.probability;
        CHECK(arc.y == inst.system.respond(label.theta, arc.x));
        CHECK(arc.probability == doctest::Approx(inst.source.transition(label.previous_input, arc.x)));
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
    }
    for (std::uint32_t s = 0; s < c.state_count(); ++s) CHECK(std::abs(next[s] - c.stationary()[s]) <= 1e-10);
  }
}

TEST_CASE("caps raise resource errors") {
  const Alphabet a = Alphabet::modular(3);
  Rng rng = instance_rng(1, 1);
  const SystemSpec s = random_table_system(a, a, 2, 2, rng);
  CHECK_THROWS_AS(build_joint_chain(uniform(a), s, 100), ResourceError);
  const JointChain c = build_joint_chain(uniform(a), s);
  CHECK_THROWS_AS(exact_block_entropy(c, 8, Which::kXY, 1000), ResourceError);
  try {
    build_joint_chain(uniform(a), s, 100);
  } catch (const ResourceError& e) {
    CHECK(e.requested() == 243);
    CHECK(e.cap() == 100);
  }
}

TEST_CASE("exact block entropy examples") {
  const MarkovSource u2 = uniform(Alphabet::modular(2));
  const JointChain id = build_joint_chain(u2, identity_system(Alphabet::modular(2)));
  CHECK(exact_block_entropy(id, 8, Which::kX) == doctest::Approx(8.0).epsilon(1e-14));
  const JointChain x = build_joint_chain(u2, xor_filter());
  CHECK(exact_block_entropy(x, 8, Which::kXY) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(exact_block_entropy(x, 8, Which::kY) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK_THROWS_AS(exact_block_entropy(x, 0, Which::kY), ValidationError);

  // H(Y_1) from the stationary emission law.
  for (std::size_t i = 0; i < 30; ++i) {
    const RandomInstance inst = general_instance(8, i);
    const JointChain c = build_joint_chain(inst.source, inst.system);
    std::vector<double> py(inst.system.output_alphabet().size(), 0.0);
    for (std::uint32_t s = 0; s < c.state_count(); ++s) {
      for (const auto& arc : c.arcs(s)) py[arc.y] += c.stationary()[s] * arc.probability;
    }
    CHECK(exact_block_entropy(c, 1, Which::kY) == doctest::Approx(entropy_bits(py)).epsilon(1e-12));
  }
}

TEST_CASE("block entropies agree with brute-force enumeration") {
  for (std::size_t i = 0; i < 40; ++i) {
    Rng rng = instance_rng(21, i);
    const auto kx = static_cast<std::uint32_t>(uniform_between(rng, 2, 3));
    const auto ky = static_cast<std::uint32_t>(uniform_between(rng, 1, 3));
    const auto N = static_cast<std::size_t>(uniform_between(rng, 0, 1));
    const auto M = static_cast<std::size_t>(uniform_between(rng, 0, 2));
    const MarkovSource src = random_markov_source(Alphabet::modular(kx), rng);
    const SystemSpec sys = random_table_system(Alphabet::modular(kx), Alphabet::modular(ky), N, M, rng);
    const JointChain c = build_joint_chain(src, sys);
    const std::size_t n = 5;
    const Oracle o = brute_force(src, sys, n);
    INFO("instance " << i << " " << describe(sys));
    CHECK(exact_block_entropy(c, n, Which::kX) == doctest::Approx(entropy_of(o.x)).epsilon(1e-9));
    CHECK(exact_block_entropy(c, n, Which::kY) == doctest::Approx(entropy_of(o.y)).epsilon(1e-9));
    CHECK(exact_block_entropy(c, n, Which::kXY) == doctest::Approx(entropy_of(o.xy)).epsilon(1e-9));
  }
}

TEST_CASE("block identity H(X^n,Y^n) = H(X^n,Y^m)") {
  for (std::size_t i = 0; i < 60; ++i) {
    const RandomInstance inst = general_instance(31, i);
    const std::size_t m = std::max(inst.system.input_memory(), inst.system.output_memory());
    const JointChain c = build_joint_chain(inst.source, inst.system);
    const std::vector<Observe> joint(9, Observe::kJoint);
    std::vector<Observe> head(9, Observe::kInput);
    std::fill_n(head.begin(), m, Observe::kJoint);
    const auto full = block_entropy_profile(c, joint);
    const auto part = block_entropy_profile(c, head);
    for (std::size_t n = m + 1; n <= 9; ++n) CHECK(std::abs(full[n - 1] - part[n - 1]) <= kIdentityTolerance);
  }
}

TEST_CASE("H(X^n|Y^M) <= H(X^n) <= H(X^n, Y^M)") {
  for (std::size_t i = 0; i < 25; ++i) {
    const RandomInstance inst = general_instance(41, i);
    const std::size_t m = std::max<std::size_t>(inst.system.output_memory(), 1);
    const JointChain c = build_joint_chain(inst.source, inst.system);
    for (std::size_t n = m; n <= 10; n += 3) {
      std::vector<Observe> mixed(n, Observe::kInput), ys(n, Observe::kNothing);
      std::fill_n(mixed.begin(), m, Observe::kJoint);
      std::fill_n(ys.begin(), m, Observe::kOutput);
      const double hxy = block_entropy_profile(c, mixed).back();
      const double hy = block_entropy_profile(c, ys).back();
      const double hx = exact_block_entropy(c, n, Which::kX);
      CHECK(hxy - hy <= hx + 1e-9);
      CHECK(hx <= hxy + 1e-9);
    }
  }
}

TEST_CASE("output rate bracket examples") {
  const MarkovSource u2 = uniform(Alphabet::modular(2));
  const std::vector<double> pmf{0.1, 0.6, 0.3};
  const MarkovSource skew = make_iid(Alphabet::modular(3), pmf);
  const RateBracket id = output_rate_bracket(build_joint_chain(skew, identity_system(Alphabet::modular(3))), 2);
  CHECK(id.block_length <= 2);
  CHECK(std::abs(id.upper - source_entropy_rate(skew)) <= 1e-12);
  CHECK(std::abs(id.lower - source_entropy_rate(skew)) <= 1e-12);

  const RateBracket x = output_rate_bracket(build_joint_chain(u2, xor_filter()), 8);
  CHECK(x.lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x.upper == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x.converged);

  // Regression values from an independent exhaustive enumeration.
  const RateBracket a = output_rate_bracket(build_joint_chain(u2, binary_and_system()), 16, 0.0);
  REQUIRE(a.upper_by_length.size() == 16);
  CHECK(a.upper_by_length[1] == doctest::Approx(0.7375168162362656).epsilon(1e-12));
  CHECK(a.upper_by_length[2] == doctest::Approx(0.7012050593046015).epsilon(1e-12));
  CHECK(a.upper == doctest::Approx(0.6992432033876295).epsilon(1e-12));
  CHECK(a.lower <= a.upper);
  CHECK(a.upper - a.lower < 1e-3);
  CHECK_THROWS_AS(output_rate_bracket(build_joint_chain(u2, xor_filter()), 1), ValidationError);
}

TEST_CASE("bracket monotonicity and ordering") {
  for (std::size_t i = 0; i < 60; ++i) {
    const RandomInstance inst = general_instance(51, i);
    const RateBracket b = output_rate_bracket(build_joint_chain(inst.source, inst.system), 10, 0.0,
                                              std::uint64_t{1} << 20);
    CHECK(b.lower <= b.upper);
    for (std::size_t n = 1; n < b.upper_by_length.size(); ++n) {
      CHECK(b.upper_by_length[n] <= b.upper_by_length[n - 1] + 1e-12);
      CHECK(b.lower_by_length[n] >= b.lower_by_length[n - 1] - 1e-12);
    }
    CHECK(b.pruned_mass == 0.0);
  }
}

TEST_CASE("truncation by the path cap keeps the bracket reached so far") {
  Rng rng = instance_rng(61, 0);
  const Alphabet a = Alphabet::modular(3);
  const SystemSpec s = random_table_system(a, a, 1, 1, rng);
  const RateBracket b = output_rate_bracket(build_joint_chain(random_markov_source(a, rng), s), 16, 0.0, 2000);
  CHECK(b.truncated);
  CHECK_FALSE(b.converged);
  CHECK(b.block_length >= 1);
  CHECK(b.block_length < 16);
}

TEST_CASE("loss report examples") {
  const std::vector<double> pmf{0.3, 0.7};
  const LossReport id = loss_rate_report(make_iid(Alphabet::modular(2), pmf), identity_system(Alphabet::modular(2)));
  CHECK(id.contains(0.0));
  CHECK(id.output_bracket.width() < 1e-9);
  CHECK(id.all_checks_passed());

  const MarkovSource u2 = uniform(Alphabet::modular(2));
  const LossReport c = loss_rate_report(u2, constant_system(Alphabet::modular(2), Alphabet::modular(1), 0));
  CHECK(c.loss_lower == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.loss_upper == doctest::Approx(1.0).epsilon(1e-14));

  const SystemSpec sq = squarer_system();
  const LossReport r = loss_rate_report(uniform(sq.input_alphabet()), sq);
  CHECK(r.contains(2.0 / 3.0, 1e-12));
  CHECK(r.preimage_bound == 1.0);
  CHECK_FALSE(r.invertible);
  CHECK(r.all_checks_passed());
}

TEST_CASE("loss report invariants on random instances") {
  for (std::size_t i = 0; i < 60; ++i) {
    const RandomInstance inst = general_instance(71, i);
    LossOptions o;
    o.max_n = 10;
    o.caps.paths = std::uint64_t{1} << 20;
    const LossReport r = loss_rate_report(inst.source, inst.system, o);
    INFO(describe(inst.system));
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    CHECK(r.output_bracket.lower <= r.input_rate + 1e-9);
    CHECK(r.loss_lower <= r.preimage_bound + 1e-9);
    CHECK(r.loss_upper <= r.preimage_bound + 1e-9);
    if (r.invertible) CHECK(r.contains(0.0, 1e-9));
  }
}

TEST_CASE("finite-length loss examples") {
  const MarkovSource u2 = uniform(Alphabet::modular(2));
  const FiniteLengthLoss x = finite_length_loss(u2, xor_filter(), 6);
  CHECK(x.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x.rhs == doctest::Approx(1.0).epsilon(1e-12));

  const FiniteLengthLoss id = finite_length_loss(u2, identity_system(Alphabet::modular(2)), 6);
  CHECK(std::abs(id.lhs) < 1e-12);
  CHECK(std::abs(id.rhs) < 1e-12);

  // Enumeration gives 2^-K: only the alternating input is ambiguous.
  const std::vector<std::int64_t> pos{1, 2};
  const SystemSpec mul = multiplier_system(pos);
  const FiniteLengthLoss m = finite_length_loss(uniform(mul.input_alphabet()), mul, 5);
  CHECK(m.lhs == doctest::Approx(1.0 / 32).epsilon(1e-12));
  CHECK(m.rhs == doctest::Approx(m.lhs).epsilon(1e-12));

  const std::vector<std::int64_t> sign{-1, 1};
  const SystemSpec mul_sign = multiplier_system(sign);
  const FiniteLengthLoss ms = finite_length_loss(uniform(mul_sign.input_alphabet()), mul_sign, 5);
  CHECK(ms.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ms.rhs == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(finite_length_loss(u2, xor_filter(), 1), ValidationError);
  const SystemSpec twice = SystemSpec::from_stages({xor_filter().stages()[0], xor_filter().stages()[0]});
  CHECK_THROWS_AS(finite_length_loss(u2, twice, 4), UnsupportedAnalysis);
}

TEST_CASE("finite-length identity for random partially invertible systems") {
  for (std::size_t i = 0; i < 40; ++i) {
    const RandomInstance inst = invertible_instance(81, i);
    for (const auto& l : finite_length_losses(inst.source, inst.system, 7)) {
      CHECK(std::abs(l.lhs - l.rhs) <= kIdentityTolerance);
    }
  }
}

TEST_CASE("plug-in estimator") {
  const MarkovSource u2 = uniform(Alphabet::modular(2));
  const auto x = sample_path(u2, 200'000, 4);
  const PluginEstimate id = plugin_estimate(x, x, 6);
  CHECK(id.loss == 0.0);
  CHECK_FALSE(id.coverage_warning);

  const SymbolSequence zeros(x.size(), 0);
  const PluginEstimate c = plugin_estimate(x, zeros, 4, 2, 2);
  CHECK(c.hy == 0.0);
  CHECK(c.hx == doctest::Approx(1.0).epsilon(0.01));

  const auto y = simulate(xor_filter(), x);
  CHECK(std::abs(plugin_estimate(x, y, 6).loss) < 0.02);

  const auto head = std::span<const Symbol>(x).first(1000);
  CHECK(plugin_estimate(head, head, 8).coverage_warning);
  CHECK(plugin_block_entropy(SymbolSequence{0, 1, 0, 1, 0}, 1, 2) == doctest::Approx(binary_entropy(0.4)));
  CHECK_THROWS_AS(plugin_estimate(x, head, 2), ValidationError);
}

TEST_CASE("suites pass on small runs") {
  for (const auto& name : suite_names()) {
    SuiteOptions o;
    o.seed = 17;
    o.instances = 8;
    o.max_n = 8;
    const SuiteReport r = run_suite(name, o);
    CHECK_MESSAGE(r.all_passed(), name);
    for (std::size_t i = 0; i < r.cases.size(); ++i) CHECK(r.cases[i].index == i);
  }
  CHECK_THROWS_AS(run_suite("nope", SuiteOptions{}), ValidationError);
}
