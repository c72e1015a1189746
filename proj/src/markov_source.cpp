#include "infoloss/markov_source.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "graph.hpp"
#include "infoloss/entropy.hpp"
#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kPowerTolerance = 1e-12;
constexpr double kFixedPointTolerance = 1e-10;
constexpr std::size_t kPowerIterationCap = 1'000'000;

detail::Csr support_graph(const std::vector<double>& p, std::size_t k) {
  detail::Csr g;
  g.offsets.reserve(k + 1);
  g.offsets.push_back(0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (p[i * k + j] > 0.0) g.targets.push_back(static_cast<std::uint32_t>(j));
    }
    g.offsets.push_back(static_cast<std::uint32_t>(g.targets.size()));
  }
  return g;
}

}  // namespace

MarkovSource::MarkovSource(Alphabet alphabet, std::vector<double> transition)
    : alphabet_(std::move(alphabet)), transition_(std::move(transition)) {
  const std::size_t k = alphabet_.size();
  if (transition_.size() != k * k) {
    throw ValidationError("transition matrix must have " + std::to_string(k * k) + " entries, got " +
                          std::to_string(transition_.size()));
  }
  for (std::size_t i = 0; i < k; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double v = transition_[i * k + j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("transition row " + std::to_string(i) + " has a negative or non-finite entry");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTolerance) {
      throw ValidationError("transition row " + std::to_string(i) + " sums to " + std::to_string(sum));
    }
  }

  const detail::Csr g = support_graph(transition_, k);
  std::uint32_t count = 0;
  const auto comp = detail::strongly_connected_components(g, count);
  const auto closed = detail::closed_components(g, comp, count);
  const auto n_closed = std::count(closed.begin(), closed.end(), true);
  if (n_closed != 1) {
    throw ValidationError("source is not regular: " + std::to_string(n_closed) +
                          " closed communicating classes");
  }
  const std::uint32_t cls = static_cast<std::uint32_t>(std::find(closed.begin(), closed.end(), true) - closed.begin());
  const auto first = static_cast<std::uint32_t>(std::find(comp.begin(), comp.end(), cls) - comp.begin());
  if (const auto period = detail::component_period(g, comp, first); period != 1) {
    throw ValidationError("source is not regular: period " + std::to_string(period));
  }

  std::vector<double> pi(k, 0.0), next(k);
  std::size_t members = 0;
  for (std::size_t i = 0; i < k; ++i) members += comp[i] == cls;
  for (std::size_t i = 0; i < k; ++i) pi[i] = comp[i] == cls ? 1.0 / static_cast<double>(members) : 0.0;
  bool converged = false;
  for (std::size_t it = 0; it < kPowerIterationCap && !converged; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      if (pi[i] == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) next[j] += pi[i] * transition_[i * k + j];
    }
    double delta = 0.0;
    for (std::size_t j = 0; j < k; ++j) delta = std::max(delta, std::abs(next[j] - pi[j]));
    pi.swap(next);
    converged = delta < kPowerTolerance;
  }
  if (!converged) throw NumericError("stationary power iteration did not converge");
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;
  for (std::size_t j = 0; j < k; ++j) {
    double image = 0.0;
    for (std::size_t i = 0; i < k; ++i) image += pi[i] * transition_[i * k + j];
    if (std::abs(image - pi[j]) > kFixedPointTolerance) {
      throw NumericError("stationary vector is not a fixed point at component " + std::to_string(j));
    }
  }
  stationary_ = std::move(pi);
  for (std::size_t i = 0; i < k; ++i) {
    if (comp[i] != cls) transient_.push_back(static_cast<Symbol>(i));
  }

  iid_ = true;
  for (std::size_t i = 1; i < k && iid_; ++i) {
    iid_ = std::equal(transition_.begin(), transition_.begin() + static_cast<std::ptrdiff_t>(k),
                      transition_.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
}

MarkovSource make_iid(const Alphabet& alphabet, std::span<const double> pmf) {
  const std::size_t k = alphabet.size();
  if (pmf.size() != k) {
    throw ValidationError("pmf has " + std::to_string(pmf.size()) + " entries for alphabet of size " +
                          std::to_string(k));
  }
  std::vector<double> p;
  p.reserve(k * k);
  for (std::size_t i = 0; i < k; ++i) p.insert(p.end(), pmf.begin(), pmf.end());
  return MarkovSource(alphabet, std::move(p));
}

double source_entropy_rate(const MarkovSource& source) {
  const std::size_t k = source.size();
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double w = source.stationary()[i];
    if (w == 0.0) continue;
    double row = 0.0;
    for (double p : source.row(static_cast<Symbol>(i))) row += neg_plogp(p);
    h += w * row;
  }
  return h;
}

namespace {

Symbol draw(std::span<const double> pmf, double u) {
  double acc = 0.0;
  Symbol last_positive = 0;
  for (std::size_t j = 0; j < pmf.size(); ++j) {
    if (pmf[j] <= 0.0) continue;
    last_positive = static_cast<Symbol>(j);
    acc += pmf[j];
    if (u < acc) return last_positive;
  }
  return last_positive;
}

}  // namespace

SymbolSequence sample_path(const MarkovSource& source, std::size_t length, std::uint64_t seed,
                           InitialSymbol init) {
  if (length == 0) throw ValidationError("sample_path length must be at least 1");
  if (init.is_fixed && !source.alphabet().contains(init.symbol)) {
    throw ValidationError("initial symbol outside alphabet");
  }
  std::mt19937_64 engine(seed);
  SymbolSequence path;
  path.reserve(length);
  path.push_back(init.is_fixed ? init.symbol : draw(source.stationary(), unit_uniform(engine)));
  while (path.size() < length) path.push_back(draw(source.row(path.back()), unit_uniform(engine)));
  return path;
}

}  // namespace infoloss
