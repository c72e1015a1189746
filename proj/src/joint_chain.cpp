#include "infoloss/joint_chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "graph.hpp"
#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

constexpr double kPowerTolerance = 1e-14;
constexpr double kFixedPointTolerance = 1e-10;
constexpr std::size_t kIterationCap = 20'000;

// Solves pi (P - I) = 0 with one balance equation replaced by sum(pi) = 1.
std::vector<double> class_stationary_direct(const std::vector<std::size_t>& offsets, const std::vector<JointArc>& arcs,
                                            const std::vector<std::uint32_t>& members) {
  const auto m = static_cast<Eigen::Index>(members.size());
  std::unordered_map<std::uint32_t, Eigen::Index> local;
  for (Eigen::Index i = 0; i < m; ++i) local.emplace(members[static_cast<std::size_t>(i)], i);
  std::vector<Eigen::Triplet<double>> entries;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto s = members[static_cast<std::size_t>(i)];
    if (i + 1 < m) entries.emplace_back(i, i, -1.0);
    for (std::size_t a = offsets[s]; a < offsets[s + 1]; ++a) {
      const Eigen::Index j = local.at(arcs[a].next);
      if (j + 1 < m) entries.emplace_back(j, i, arcs[a].probability);
    }
    entries.emplace_back(m - 1, i, 1.0);
  }
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericError("joint chain stationary solve failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  rhs[m - 1] = 1.0;
  const Eigen::VectorXd x = lu.solve(rhs);
  std::vector<double> pi(offsets.size() - 1, 0.0);
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) total += std::max(x[i], 0.0);
  for (Eigen::Index i = 0; i < m; ++i) pi[members[static_cast<std::size_t>(i)]] = std::max(x[i], 0.0) / total;
  return pi;
}

// Stationary law of one closed class by power iteration (lazy when periodic).
std::vector<double> class_stationary(const std::vector<std::size_t>& offsets, const std::vector<JointArc>& arcs,
                                     const std::vector<std::uint32_t>& members, bool lazy) {
  const std::size_t n = offsets.size() - 1;
  std::vector<double> pi(n, 0.0), next(n, 0.0);
  for (auto s : members) pi[s] = 1.0 / static_cast<double>(members.size());
  const double keep = lazy ? 0.5 : 0.0;
  for (std::size_t it = 0; it < kIterationCap; ++it) {
    for (auto s : members) next[s] = keep * pi[s];
    for (auto s : members) {
      const double mass = (1.0 - keep) * pi[s];
      for (std::size_t a = offsets[s]; a < offsets[s + 1]; ++a) next[arcs[a].next] += mass * arcs[a].probability;
    }
    double delta = 0.0;
    for (auto s : members) delta = std::max(delta, std::abs(next[s] - pi[s]));
    pi.swap(next);
    if (delta < kPowerTolerance) return pi;
  }
  return class_stationary_direct(offsets, arcs, members);
}

}  // namespace

JointChain build_joint_chain(const MarkovSource& source, const SystemSpec& system, std::uint64_t state_cap) {
  if (!(source.alphabet() == system.input_alphabet())) {
    throw ValidationError("source alphabet differs from the system input alphabet");
  }
  if (!system.is_table()) throw UnsupportedAnalysis("joint chain requires a table-mode system");
  const std::uint64_t thetas = system.theta_count();
  const std::uint64_t nx = source.size();
  if (thetas > state_cap / nx) {
    const double bound = static_cast<double>(thetas) * static_cast<double>(nx);
    throw ResourceError("joint chain state count exceeds cap",
                        bound >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(bound), state_cap);
  }

  JointChain chain(source, system);
  chain.stages_ = system.stages().size();
  const std::size_t stages = chain.stages_;

  // Initial support: stationary input history, zero output buffers.
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  std::vector<std::uint64_t> keys;
  std::vector<double> initial;
  auto intern = [&](std::uint64_t key) {
    auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(keys.size()));
    if (inserted) {
      if (keys.size() >= state_cap) throw ResourceError("joint chain state count exceeds cap", keys.size() + 1, state_cap);
      keys.push_back(key);
      initial.push_back(0.0);
    }
    return it->second;
  };
  const std::size_t hist = system.input_buffer_length();
  SystemState zero = system.zero_state();
  if (hist == 0) {
    for (Symbol x = 0; x < nx; ++x) {
      const double p = source.stationary()[x];
      if (p > 0.0) initial[intern(std::uint64_t{x} * thetas + system.encode(zero))] += p;
    }
  } else {
    std::vector<Symbol> digits(hist, 0);
    std::vector<std::size_t> radices(hist, nx);
    while (true) {
      double p = source.stationary()[digits[0]];
      for (std::size_t j = 1; j < hist && p > 0.0; ++j) p *= source.transition(digits[j - 1], digits[j]);
      if (p > 0.0) {
        SystemState s = zero;
        s.recent_inputs = digits;
        initial[intern(std::uint64_t{digits.back()} * thetas + system.encode(s))] += p;
      }
      std::size_t i = hist;
      bool done = true;
      while (i-- > 0) {
        if (++digits[i] < nx) {
          done = false;
          break;
        }
        digits[i] = 0;
      }
      if (done) break;
    }
  }

  // Reachable states and their transitions.
  std::vector<std::size_t> offsets{0};
  std::vector<JointArc> arcs;
  std::vector<Symbol> stage_out;
  std::vector<Symbol> produced(stages);
  for (std::size_t head = 0; head < keys.size(); ++head) {
    const auto prev = static_cast<Symbol>(keys[head] / thetas);
    const std::uint64_t theta = keys[head] % thetas;
    const SystemState state = system.decode(theta);
    for (Symbol x = 0; x < nx; ++x) {
      const double p = source.transition(prev, x);
      if (p <= 0.0) continue;
      SystemState s = state;
      const Symbol y = system.step(s, x, produced);
      const std::uint32_t next = intern(std::uint64_t{x} * thetas + system.encode(s));
      arcs.push_back(JointArc{x, y, next, p});
      if (stages > 1) stage_out.insert(stage_out.end(), produced.begin(), produced.end());
    }
    offsets.push_back(arcs.size());
  }

  // Recurrent classes.
  detail::Csr g;
  g.offsets.reserve(offsets.size());
  for (auto o : offsets) g.offsets.push_back(static_cast<std::uint32_t>(o));
  g.targets.reserve(arcs.size());
  for (const auto& a : arcs) g.targets.push_back(a.next);
  std::uint32_t ncomp = 0;
  const auto comp = detail::strongly_connected_components(g, ncomp);
  const auto closed = detail::closed_components(g, comp, ncomp);
  std::vector<std::vector<std::uint32_t>> members(ncomp);
  for (std::uint32_t s = 0; s < keys.size(); ++s) {
    if (closed[comp[s]]) members[comp[s]].push_back(s);
  }

  // Weight of each closed class: mass absorbed from the initial distribution.
  std::vector<double> weight(ncomp, 0.0);
  const auto n_closed = static_cast<std::size_t>(std::count(closed.begin(), closed.end(), true));
  if (n_closed == 1) {
    weight[static_cast<std::size_t>(std::find(closed.begin(), closed.end(), true) - closed.begin())] = 1.0;
  } else {
    std::vector<double> mass = initial, next(mass.size());
    for (std::size_t it = 0; it < kIterationCap; ++it) {
      double transient = 0.0;
      for (std::size_t s = 0; s < mass.size(); ++s) {
        if (!closed[comp[s]]) transient += mass[s];
      }
      if (transient < 1e-15) break;
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t s = 0; s < mass.size(); ++s) {
        if (mass[s] == 0.0) continue;
        for (std::size_t a = offsets[s]; a < offsets[s + 1]; ++a) next[arcs[a].next] += mass[s] * arcs[a].probability;
      }
      mass.swap(next);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < mass.size(); ++s) {
      if (closed[comp[s]]) {
        weight[comp[s]] += mass[s];
        total += mass[s];
      }
    }
    for (auto& w : weight) w /= total;
  }

  std::vector<double> pi(keys.size(), 0.0);
  for (std::uint32_t c = 0; c < ncomp; ++c) {
    if (!closed[c] || weight[c] <= 0.0) continue;
    const bool periodic = detail::component_period(g, comp, members[c].front()) != 1;
    const auto local = class_stationary(offsets, arcs, members[c], periodic);
    for (auto s : members[c]) pi[s] = weight[c] * local[s];
    ++chain.classes_;
  }

  // Keep the states carrying stationary mass and renumber.
  std::vector<std::uint32_t> remap(keys.size(), UINT32_MAX);
  std::uint32_t kept = 0;
  for (std::uint32_t s = 0; s < keys.size(); ++s) {
    if (closed[comp[s]] && weight[comp[s]] > 0.0) remap[s] = kept++;
  }
  chain.offsets_.assign(1, 0);
  for (std::uint32_t s = 0; s < keys.size(); ++s) {
    if (remap[s] == UINT32_MAX) continue;
    chain.labels_.push_back({static_cast<Symbol>(keys[s] / thetas), keys[s] % thetas});
    chain.stationary_.push_back(pi[s]);
    for (std::size_t a = offsets[s]; a < offsets[s + 1]; ++a) {
      JointArc arc = arcs[a];
      arc.next = remap[arc.next];
      chain.arcs_.push_back(arc);
      if (stages > 1) {
        chain.stage_outputs_.insert(chain.stage_outputs_.end(), stage_out.begin() + static_cast<std::ptrdiff_t>(a * stages),
                                    stage_out.begin() + static_cast<std::ptrdiff_t>((a + 1) * stages));
      }
    }
    chain.offsets_.push_back(chain.arcs_.size());
  }
  double total = 0.0;
  for (double v : chain.stationary_) total += v;
  for (double& v : chain.stationary_) v /= total;

  std::vector<double> image(chain.stationary_.size(), 0.0);
  for (std::uint32_t s = 0; s < chain.state_count(); ++s) {
    double row = 0.0;
    for (const auto& a : chain.arcs(s)) {
      image[a.next] += chain.stationary_[s] * a.probability;
      row += a.probability;
    }
    if (std::abs(row - 1.0) > 1e-12) throw InvariantViolation("joint chain row is not stochastic");
  }
  for (std::size_t s = 0; s < image.size(); ++s) {
    if (std::abs(image[s] - chain.stationary_[s]) > kFixedPointTolerance) {
      throw NumericError("joint chain stationary vector is not a fixed point (state " + std::to_string(s) + ")");
    }
  }
  return chain;
}

}  // namespace infoloss
