#include "infoloss/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "infoloss/errors.hpp"

namespace infoloss {

Rng instance_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  if (n == 0) throw ValidationError("uniform_below needs n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

std::int64_t uniform_between(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

double uniform_real(Rng& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

std::vector<double> dirichlet_row(Rng& rng, std::size_t size) {
  std::vector<double> row(size);
  double total = 0;
  for (double& v : row) {
    v = -std::log1p(-unit_uniform(rng));
    total += v;
  }
  for (double& v : row) v /= total;
  return row;
}

MarkovSource random_markov_source(const Alphabet& alphabet, Rng& rng) {
  const std::size_t k = alphabet.size();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> p;
    p.reserve(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      auto row = dirichlet_row(rng, k);
      p.insert(p.end(), row.begin(), row.end());
    }
    try {
      return MarkovSource(alphabet, std::move(p));
    } catch (const ValidationError&) {
    }
  }
  throw NumericError("could not draw a regular Markov source");
}

namespace {

std::uint64_t table_size(const Alphabet& input, const Alphabet& output, std::size_t N, std::size_t M) {
  std::uint64_t size = 1;
  for (std::size_t i = 0; i <= N; ++i) size *= input.size();
  for (std::size_t i = 0; i < M; ++i) size *= output.size();
  return size;
}

}  // namespace

SystemSpec random_table_system(const Alphabet& input, const Alphabet& output, std::size_t N, std::size_t M, Rng& rng) {
  std::vector<Symbol> table(table_size(input, output, N, M));
  for (Symbol& y : table) y = static_cast<Symbol>(uniform_below(rng, output.size()));
  return SystemSpec::from_table(input, output, N, M, std::move(table));
}

SystemSpec random_invertible_system(const Alphabet& input, const Alphabet& output, std::size_t N, std::size_t M,
                                    Rng& rng) {
  if (output.size() < input.size()) throw ValidationError("an injection needs |Y| >= |X|");
  const std::size_t k = input.size();
  std::vector<Symbol> table(table_size(input, output, N, M));
  std::vector<Symbol> pool(output.size());
  const std::size_t thetas = table.size() / k;
  // images[theta * k + x] = f_theta(x).
  std::vector<Symbol> images(table.size());
  for (std::size_t t = 0; t < thetas; ++t) {
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<Symbol>(i);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      images[t * k + i] = pool[i];
    }
  }
  std::uint64_t out_block = 1;
  for (std::size_t i = 0; i < M; ++i) out_block *= output.size();
  // Table digits are x[n-N..n] then y[n-M..n-1].
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    const std::uint64_t yhist = idx % out_block;
    const std::uint64_t xdigits = idx / out_block;
    const std::uint64_t x = xdigits % k;
    const std::uint64_t xhist = xdigits / k;
    const std::uint64_t theta = xhist * out_block + yhist;
    table[idx] = images[theta * k + x];
  }
  return SystemSpec::from_table(input, output, N, M, std::move(table));
}

FixedPointInstance random_fixed_point_filter(Rng& rng, QuantizerPlacement placement, unsigned max_word_bits,
                                             unsigned max_frac_bits, std::size_t max_order) {
  const auto k = static_cast<unsigned>(uniform_between(rng, 1, max_word_bits));
  const auto f = static_cast<unsigned>(uniform_between(rng, 0, max_frac_bits));
  const std::int64_t half = std::int64_t{1} << (k + f - 1);
  const auto n = static_cast<std::size_t>(uniform_between(rng, 0, static_cast<std::int64_t>(max_order)));
  const auto m = static_cast<std::size_t>(uniform_between(rng, 0, static_cast<std::int64_t>(max_order)));
  FixedPointCoeffs coeffs;
  coeffs.b.push_back(std::int64_t{1} << f);
  for (std::size_t i = 0; i < n; ++i) coeffs.b.push_back(uniform_between(rng, -half, half - 1));
  for (std::size_t i = 0; i < m; ++i) coeffs.a.push_back(uniform_between(rng, -half, half - 1));
  const Quantizer q = Quantizer::truncating(k, f);
  SystemSpec system = fixed_point_filter(Alphabet::modular(1u << k), coeffs, q, placement);
  return FixedPointInstance{k, f, std::move(coeffs), placement, std::move(system)};
}

namespace {

using cplx = std::complex<double>;

double random_modulus(Rng& rng, double margin, bool inside) {
  return inside ? uniform_real(rng, 0.0, 1.0 - margin) : uniform_real(rng, 1.0 + margin, 2.5);
}

// Monic polynomial in z^-1 with the given number of roots (conjugate pairs
// where possible); coefficient 0 is 1.
std::vector<double> random_monic(Rng& rng, std::size_t degree, double margin, bool allow_outside) {
  std::vector<double> poly{1.0};
  auto multiply = [&](const std::vector<double>& factor) {
    std::vector<double> next(poly.size() + factor.size() - 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      for (std::size_t j = 0; j < factor.size(); ++j) next[i + j] += poly[i] * factor[j];
    }
    poly = std::move(next);
  };
  std::size_t left = degree;
  while (left > 0) {
    const bool inside = !allow_outside || uniform_below(rng, 2) == 0;
    const double r = random_modulus(rng, margin, inside);
    if (left >= 2 && uniform_below(rng, 2) == 0) {
      const double phase = uniform_real(rng, 0.0, std::numbers::pi);
      multiply({1.0, -2.0 * r * std::cos(phase), r * r});
      left -= 2;
    } else {
      multiply({1.0, uniform_below(rng, 2) == 0 ? -r : r});
      left -= 1;
    }
  }
  return poly;
}

}  // namespace

TransferFunction random_stable_filter(Rng& rng, std::size_t max_degree, double margin) {
  const auto nd = static_cast<std::size_t>(uniform_between(rng, 0, static_cast<std::int64_t>(max_degree)));
  const auto dd = static_cast<std::size_t>(uniform_between(rng, 0, static_cast<std::int64_t>(max_degree)));
  auto b = random_monic(rng, nd, margin, true);
  const double gain = uniform_real(rng, 0.5, 2.0) * (uniform_below(rng, 2) == 0 ? 1.0 : -1.0);
  for (double& v : b) v *= gain;
  const auto den = random_monic(rng, dd, margin, false);
  std::vector<double> a;
  for (std::size_t i = 1; i < den.size(); ++i) a.push_back(-den[i]);
  return TransferFunction(std::move(b), std::move(a));
}

}  // namespace infoloss
