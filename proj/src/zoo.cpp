#include "infoloss/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "infoloss/errors.hpp"

namespace infoloss {
namespace {

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Symbol position_of(const std::vector<std::int64_t>& sorted, std::int64_t v) {
  return static_cast<Symbol>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

std::uint64_t wrap(__int128 v, std::uint64_t modulus) {
  const auto m = static_cast<__int128>(modulus);
  return static_cast<std::uint64_t>(((v % m) + m) % m);
}

std::int64_t twos_complement(Symbol x, unsigned word_bits) {
  const std::int64_t half = std::int64_t{1} << (word_bits - 1);
  return x < half ? std::int64_t{x} : std::int64_t{x} - 2 * half;
}

void require_ring_element(const Alphabet& ring, Symbol c, const char* what) {
  if (!ring.contains(c)) throw ValidationError(std::string(what) + " coefficient outside the alphabet");
}

}  // namespace

SystemSpec identity_system(const Alphabet& alphabet) {
  std::vector<Symbol> map(alphabet.size());
  for (Symbol i = 0; i < map.size(); ++i) map[i] = i;
  return SystemSpec::from_table(alphabet, alphabet, 0, 0, std::move(map));
}

SystemSpec constant_system(const Alphabet& input, const Alphabet& output, Symbol value) {
  if (!output.contains(value)) throw ValidationError("constant outside the output alphabet");
  return SystemSpec::from_table(input, output, 0, 0, std::vector<Symbol>(input.size(), value));
}

SystemSpec static_system(const Alphabet& input, const Alphabet& output, std::vector<Symbol> map) {
  return SystemSpec::from_table(input, output, 0, 0, std::move(map));
}

SystemSpec squarer_system(std::span<const std::int64_t> values) {
  std::vector<std::int64_t> squares;
  for (auto v : values) squares.push_back(v * v);
  squares = sorted_unique(std::move(squares));
  std::vector<Symbol> map;
  for (auto v : values) map.push_back(position_of(squares, v * v));
  return static_system(Alphabet::integers(values), Alphabet::integers(squares), std::move(map));
}

SystemSpec squarer_system() {
  const std::int64_t values[] = {-1, 0, 1};
  return squarer_system(values);
}

SystemSpec xor_filter() { return ring_linear_filter(Alphabet::modular(2), FilterCoeffs{{1, 1}, {}}); }

SystemSpec binary_and_system() {
  const Alphabet bits = Alphabet::modular(2);
  return SystemSpec::from_table(bits, bits, 1, 0, {0, 0, 0, 1});
}

SystemSpec ring_linear_filter(const Alphabet& ring, const FilterCoeffs& coeffs) {
  if (!ring.has_ring()) throw ValidationError("ring_linear_filter needs an alphabet with ring structure");
  if (coeffs.b.empty()) throw ValidationError("ring_linear_filter needs at least b_0");
  for (auto c : coeffs.b) require_ring_element(ring, c, "feedforward");
  for (auto c : coeffs.a) require_ring_element(ring, c, "feedback");
  const std::size_t N = coeffs.b.size() - 1;
  const std::size_t M = coeffs.a.size();
  return SystemSpec::tabulate(ring, ring, N, M, [&](std::span<const Symbol> x, std::span<const Symbol> y) {
    Symbol acc = ring.zero();
    for (std::size_t k = 0; k <= N; ++k) acc = ring.add(acc, ring.mul(coeffs.b[k], x[N - k]));
    for (std::size_t l = 1; l <= M; ++l) acc = ring.add(acc, ring.mul(coeffs.a[l - 1], y[M - l]));
    return acc;
  });
}

Quantizer Quantizer::truncating(unsigned word_bits, unsigned frac_bits) {
  if (word_bits == 0 || word_bits + frac_bits > 24) throw ValidationError("unsupported fixed-point word size");
  const std::uint64_t m = std::uint64_t{1} << (word_bits + frac_bits);
  std::vector<std::uint64_t> domain(m);
  std::vector<Symbol> map(m);
  for (std::uint64_t raw = 0; raw < m; ++raw) {
    domain[raw] = raw;
    map[raw] = static_cast<Symbol>(raw >> frac_bits);
  }
  return Quantizer(word_bits, frac_bits, std::move(domain), std::move(map));
}

Quantizer::Quantizer(unsigned word_bits, unsigned frac_bits, std::vector<std::uint64_t> domain,
                     std::vector<Symbol> map)
    : word_bits_(word_bits), frac_bits_(frac_bits) {
  if (word_bits == 0 || word_bits + frac_bits > 24) throw ValidationError("unsupported fixed-point word size");
  if (domain.size() != map.size() || domain.empty()) throw ValidationError("quantizer domain and map sizes differ");
  const std::uint64_t m = raw_modulus();
  const std::uint64_t q = std::uint64_t{1} << word_bits;
  std::vector<std::size_t> order(domain.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return domain[i] < domain[j]; });
  for (auto i : order) {
    if (domain[i] >= m) throw ValidationError("quantizer domain value outside Z_2^(k+F)");
    if (map[i] >= q) throw ValidationError("quantizer image outside Z_2^k");
    if (!domain_.empty() && domain_.back() == domain[i]) throw ValidationError("duplicate quantizer domain value");
    domain_.push_back(domain[i]);
    map_.push_back(map[i]);
  }
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    for (Symbol x = 0; x < q; ++x) {
      const std::uint64_t shifted = (domain_[i] + embed(x)) % m;
      const Symbol want = static_cast<Symbol>((map_[i] + x) % q);
      if (!in_domain(shifted) || (*this)(shifted) != want) {
        throw ValidationError("quantizer violates Q(a + x) = Q(a) (+) x at a = " + std::to_string(domain_[i]) +
                              " (raw), x = " + std::to_string(x));
      }
    }
  }
}

bool Quantizer::in_domain(std::uint64_t raw) const {
  return std::binary_search(domain_.begin(), domain_.end(), raw);
}

Symbol Quantizer::operator()(std::uint64_t raw) const {
  const auto it = std::lower_bound(domain_.begin(), domain_.end(), raw);
  if (it == domain_.end() || *it != raw) throw ValidationError("value outside the quantizer domain");
  return map_[static_cast<std::size_t>(it - domain_.begin())];
}

std::vector<std::uint64_t> fixed_point_intermediate_set(const FixedPointCoeffs& coeffs, const Quantizer& quantizer,
                                                        QuantizerPlacement placement) {
  const unsigned k = quantizer.word_bits();
  const std::uint64_t m = quantizer.raw_modulus();
  const Symbol q = Symbol{1} << k;
  std::vector<std::uint64_t> generators;
  for (Symbol x = 0; x < q; ++x) {
    generators.push_back(quantizer.embed(x));
    for (auto c : coeffs.b) generators.push_back(wrap(static_cast<__int128>(c) * twos_complement(x, k), m));
    for (auto c : coeffs.a) generators.push_back(wrap(static_cast<__int128>(c) * twos_complement(x, k), m));
  }
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
  // After multiplication only single products meet the quantizer (plus the
  // embedded alphabet); after accumulation every partial sum can.
  if (placement == QuantizerPlacement::kAfterMultiply) return generators;
  std::vector<bool> seen(m, false);
  std::vector<std::uint64_t> frontier{0};
  seen[0] = true;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    for (auto g : generators) {
      const std::uint64_t v = (frontier[head] + g) % m;
      if (!seen[v]) {
        seen[v] = true;
        frontier.push_back(v);
      }
    }
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

SystemSpec fixed_point_filter(const Alphabet& ring, const FixedPointCoeffs& coeffs, const Quantizer& quantizer,
                              QuantizerPlacement placement) {
  const unsigned k = quantizer.word_bits();
  const Symbol q = Symbol{1} << k;
  if (!(ring == Alphabet::modular(q))) throw ValidationError("fixed_point_filter needs the Z_2^k alphabet of the quantizer");
  if (coeffs.b.empty()) throw ValidationError("fixed_point_filter needs at least b_0");
  const auto closure = fixed_point_intermediate_set(coeffs, quantizer, placement);
  for (auto v : closure) {
    if (!quantizer.in_domain(v)) {
      throw ValidationError("intermediate value " + std::to_string(v) + " (raw) outside the quantizer domain");
    }
  }
  const std::uint64_t m = quantizer.raw_modulus();
  const std::size_t N = coeffs.b.size() - 1;
  const std::size_t M = coeffs.a.size();
  return SystemSpec::tabulate(ring, ring, N, M, [&](std::span<const Symbol> x, std::span<const Symbol> y) {
    auto product = [&](std::int64_t c, Symbol s) { return wrap(static_cast<__int128>(c) * twos_complement(s, k), m); };
    if (placement == QuantizerPlacement::kAfterMultiply) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i <= N; ++i) acc += quantizer(product(coeffs.b[i], x[N - i]));
      for (std::size_t l = 1; l <= M; ++l) acc += quantizer(product(coeffs.a[l - 1], y[M - l]));
      return static_cast<Symbol>(acc % q);
    }
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i <= N; ++i) acc = (acc + product(coeffs.b[i], x[N - i])) % m;
    for (std::size_t l = 1; l <= M; ++l) acc = (acc + product(coeffs.a[l - 1], y[M - l])) % m;
    return quantizer(acc);
  });
}

SystemSpec multiplier_system(std::span<const std::int64_t> values) {
  if (values.empty()) throw ValidationError("multiplier needs a non-empty alphabet");
  std::vector<std::int64_t> products;
  for (auto a : values)
    for (auto b : values) products.push_back(a * b);
  products = sorted_unique(std::move(products));
  const std::vector<std::int64_t> vals(values.begin(), values.end());
  return SystemSpec::tabulate(Alphabet::integers(values), Alphabet::integers(products), 1, 0,
                              [&](std::span<const Symbol> x, std::span<const Symbol>) {
                                return position_of(products, vals[x[0]] * vals[x[1]]);
                              });
}

SystemSpec multiplier_system(const Alphabet& ring) {
  if (!ring.has_ring()) throw ValidationError("multiplier over a ring needs ring tables");
  return SystemSpec::tabulate(ring, ring, 1, 0, [&](std::span<const Symbol> x, std::span<const Symbol>) {
    return ring.mul(x[1], x[0]);
  });
}

SystemSpec hammerstein_system(const SystemSpec& g, const SystemSpec& filter) {
  if (g.is_composite() || g.input_memory() != 0 || g.output_memory() != 0) {
    throw ValidationError("hammerstein nonlinearity must be static");
  }
  return cascade(g, filter);
}

double static_preimage_bound(const SystemSpec& g) {
  if (g.is_composite() || g.input_memory() != 0 || g.output_memory() != 0) {
    throw ValidationError("static_preimage_bound needs a static map");
  }
  const auto& table = g.table();
  std::map<Symbol, std::size_t> hits;
  std::size_t best = 0;
  for (Symbol v : table) best = std::max(best, ++hits[v]);
  return std::log2(static_cast<double>(best));
}

}  // namespace infoloss
