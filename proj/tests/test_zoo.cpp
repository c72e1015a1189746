#include <doctest.h>

#include <cmath>
#include <set>

#include "infoloss/errors.hpp"
#include "infoloss/random_instances.hpp"
#include "infoloss/zoo.hpp"

using namespace infoloss;

namespace {

SymbolSequence random_input(Rng& rng, std::size_t k, std::size_t n) {
  SymbolSequence x(n);
  for (auto& s : x) s = static_cast<Symbol>(uniform_below(rng, k));
  return x;
}

std::int64_t signed_value(std::uint64_t v, unsigned k) {
  return v >= (std::uint64_t{1} << (k - 1)) ? static_cast<std::int64_t>(v) - (std::int64_t{1} << k)
                                             : static_cast<std::int64_t>(v);
}

// Truncation of a raw value to the word: floor(raw / 2^F) mod 2^k.
Symbol truncate_raw(std::int64_t raw, unsigned k, unsigned f) {
  const std::int64_t mod = std::int64_t{1} << (k + f);
  const std::int64_t r = ((raw % mod) + mod) % mod;
  return static_cast<Symbol>((r >> f) & ((std::int64_t{1} << k) - 1));
}

// Direct two's-complement evaluation of one output sample.
Symbol fixed_point_sample(const FixedPointCoeffs& c, unsigned k, unsigned f, QuantizerPlacement placement,
                          std::span<const Symbol> xs, std::span<const Symbol> ys) {
  // xs = x[n], x[n-1], ...; ys = y[n-1], y[n-2], ...
  if (placement == QuantizerPlacement::kAfterAccumulate) {
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < c.b.size(); ++i) acc += c.b[i] * signed_value(xs[i], k);
    for (std::size_t l = 0; l < c.a.size(); ++l) acc += c.a[l] * signed_value(ys[l], k);
    return truncate_raw(acc, k, f);
  }
  std::uint64_t y = 0;
  for (std::size_t i = 0; i < c.b.size(); ++i) y += truncate_raw(c.b[i] * signed_value(xs[i], k), k, f);
  for (std::size_t l = 0; l < c.a.size(); ++l) y += truncate_raw(c.a[l] * signed_value(ys[l], k), k, f);
  return static_cast<Symbol>(y & ((std::uint64_t{1} << k) - 1));
}

SymbolSequence fixed_point_reference(const FixedPointCoeffs& c, unsigned k, unsigned f, QuantizerPlacement placement,
                                     const SymbolSequence& x) {
  SymbolSequence y;
  std::vector<Symbol> xs(c.b.size()), ys(c.a.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = n >= i ? x[n - i] : 0;
    for (std::size_t l = 0; l < ys.size(); ++l) ys[l] = n >= l + 1 ? y[n - l - 1] : 0;
    y.push_back(fixed_point_sample(c, k, f, placement, xs, ys));
  }
  return y;
}

// Injectivity in x[n] for every history, by enumeration.
bool fixed_point_injective(const FixedPointCoeffs& c, unsigned k, unsigned f, QuantizerPlacement placement) {
  const std::size_t q = std::size_t{1} << k;
  const std::size_t hist = c.b.size() - 1 + c.a.size();
  std::size_t histories = 1;
  for (std::size_t i = 0; i < hist; ++i) histories *= q;
  std::vector<Symbol> xs(c.b.size()), ys(c.a.size());
  for (std::size_t h = 0; h < histories; ++h) {
    std::size_t code = h;
    for (std::size_t i = 1; i < xs.size(); ++i, code /= q) xs[i] = static_cast<Symbol>(code % q);
    for (auto& v : ys) {
      v = static_cast<Symbol>(code % q);
      code /= q;
    }
    std::set<Symbol> seen;
    for (Symbol x = 0; x < q; ++x) {
      xs[0] = x;
      if (!seen.insert(fixed_point_sample(c, k, f, placement, xs, ys)).second) return false;
    }
  }
  return true;
}

constexpr QuantizerPlacement kPlacements[] = {QuantizerPlacement::kAfterMultiply,
                                               QuantizerPlacement::kAfterAccumulate};

}  // namespace

TEST_CASE("ring filter examples") {
  const SystemSpec x2 = ring_linear_filter(Alphabet::modular(2), {{1, 1}, {}});
  Rng rng = instance_rng(101, 0);
  for (int i = 0; i < 50; ++i) {
    const auto x = random_input(rng, 2, 40);
    CHECK(simulate(x2, x) == simulate(xor_filter(), x));
  }
  CHECK(check_partial_invertibility(x2).invertible);

  const SystemSpec twice = ring_linear_filter(Alphabet::modular(4), {{2, 0}, {}});
  CHECK_FALSE(check_partial_invertibility(twice).invertible);
  CHECK(preimage_bound(twice) == 1.0);

  const SystemSpec acc = ring_linear_filter(Alphabet::modular(3), {{1}, {1}});
  CHECK(check_partial_invertibility(acc).invertible);
  CHECK(preimage_bound(acc) == 0.0);
  CHECK(simulate(acc, SymbolSequence{1, 1, 1, 2, 0}) == SymbolSequence{1, 2, 0, 2, 2});

  const SystemSpec gain = ring_linear_filter(Alphabet::modular(5), {{1}, {}});
  const auto x = random_input(rng, 5, 30);
  CHECK(simulate(gain, x) == x);

  CHECK_THROWS_AS(ring_linear_filter(Alphabet::modular(3), {{}, {}}), ValidationError);
  CHECK_THROWS_AS(ring_linear_filter(Alphabet::modular(3), {{5}, {}}), ValidationError);
  CHECK_THROWS_AS(ring_linear_filter(Alphabet(std::vector<std::string>{"a", "b"}), {{1}, {}}), ValidationError);
}

TEST_CASE("unit leading coefficient gives an invertible ring filter") {
  Rng rng = instance_rng(102, 0);
  for (int i = 0; i < 100; ++i) {
    const auto q = static_cast<std::uint32_t>(uniform_between(rng, 2, 9));
    const Alphabet r = Alphabet::modular(q);
    FilterCoeffs c;
    c.b.push_back(static_cast<Symbol>(uniform_below(rng, q)));
    for (auto n = uniform_below(rng, 3); n > 0; --n) c.b.push_back(static_cast<Symbol>(uniform_below(rng, q)));
    for (auto m = uniform_below(rng, 3); m > 0; --m) c.a.push_back(static_cast<Symbol>(uniform_below(rng, q)));
    CHECK(check_partial_invertibility(ring_linear_filter(r, c)).invertible == r.is_unit(c.b[0]));
  }
}

TEST_CASE("fixed-point filter matches two's-complement arithmetic") {
  Rng rng = instance_rng(103, 0);
  for (auto placement : kPlacements) {
    for (int i = 0; i < 60; ++i) {
      const FixedPointInstance inst = random_fixed_point_filter(rng, placement, 4, 2, 2);
      const unsigned k = inst.word_bits;
      const auto x = random_input(rng, std::size_t{1} << k, 40);
      CHECK(simulate(inst.system, x) ==
            fixed_point_reference(inst.coeffs, k, inst.frac_bits, placement, x));
    }
  }
}

TEST_CASE("fixed-point b0 = 1 is invertible for every small word") {
  Rng rng = instance_rng(104, 0);
  for (auto placement : kPlacements) {
    for (unsigned k = 1; k <= 4; ++k) {
      for (unsigned f = 0; f <= 2; ++f) {
        for (int i = 0; i < 5; ++i) {
          const std::int64_t span = std::int64_t{1} << (k + f);
          FixedPointCoeffs c{{std::int64_t{1} << f}, {}};
          for (auto n = uniform_below(rng, 3); n > 0; --n) c.b.push_back(uniform_between(rng, -span / 2, span / 2 - 1));
          for (auto m = uniform_below(rng, 3); m > 0; --m) c.a.push_back(uniform_between(rng, -span / 2, span / 2 - 1));
          const SystemSpec s =
              fixed_point_filter(Alphabet::modular(1u << k), c, Quantizer::truncating(k, f), placement);
          CHECK(check_partial_invertibility(s).invertible);
        }
      }
    }
  }
}

TEST_CASE("fixed-point invertibility agrees with enumeration") {
  Rng rng = instance_rng(105, 0);
  int invertible = 0, not_invertible = 0;
  for (auto placement : kPlacements) {
    for (int i = 0; i < 80; ++i) {
      const unsigned k = static_cast<unsigned>(uniform_between(rng, 1, 3));
      const unsigned f = static_cast<unsigned>(uniform_between(rng, 0, 2));
      const std::int64_t span = std::int64_t{1} << (k + f);
      FixedPointCoeffs c{{uniform_between(rng, 1, span - 1)}, {}};
      for (auto n = uniform_below(rng, 2); n > 0; --n) c.b.push_back(uniform_between(rng, -span / 2, span / 2 - 1));
      for (auto m = uniform_below(rng, 2); m > 0; --m) c.a.push_back(uniform_between(rng, -span / 2, span / 2 - 1));
      const SystemSpec s = fixed_point_filter(Alphabet::modular(1u << k), c, Quantizer::truncating(k, f), placement);
      const bool expected = fixed_point_injective(c, k, f, placement);
      CHECK(check_partial_invertibility(s).invertible == expected);
      (expected ? invertible : not_invertible) += 1;
    }
  }
  CHECK(invertible > 10);
  CHECK(not_invertible > 10);
}

TEST_CASE("fixed-point with no fractional bits is the ring filter") {
  Rng rng = instance_rng(106, 0);
  for (int i = 0; i < 40; ++i) {
    const unsigned k = static_cast<unsigned>(uniform_between(rng, 1, 4));
    const std::uint32_t q = 1u << k;
    FixedPointCoeffs c{{uniform_between(rng, 0, q - 1)}, {}};
    for (auto n = uniform_below(rng, 3); n > 0; --n) c.b.push_back(uniform_between(rng, 0, q - 1));
    for (auto m = uniform_below(rng, 3); m > 0; --m) c.a.push_back(uniform_between(rng, 0, q - 1));
    FilterCoeffs rc;
    for (auto v : c.b) rc.b.push_back(static_cast<Symbol>(v));
    for (auto v : c.a) rc.a.push_back(static_cast<Symbol>(v));
    const SystemSpec ring = ring_linear_filter(Alphabet::modular(q), rc);
    for (auto placement : kPlacements) {
      const SystemSpec fp = fixed_point_filter(Alphabet::modular(q), c, Quantizer::truncating(k, 0), placement);
      const auto x = random_input(rng, q, 30);
      CHECK(simulate(fp, x) == simulate(ring, x));
    }
  }
}

TEST_CASE("quantizer construction") {
  const Quantizer t = Quantizer::truncating(3, 2);
  CHECK(t.raw_modulus() == 32);
  CHECK(t.embed(3) == 12);
  CHECK(t(13) == 3);
  CHECK(t(31) == 7);
  CHECK(t.domain().size() == 32);

  std::vector<std::uint64_t> domain;
  std::vector<Symbol> map;
  for (std::uint64_t r = 0; r < 8; ++r) {
    domain.push_back(r);
    map.push_back(static_cast<Symbol>(r == 1 ? 1 : r >> 1));
  }
  CHECK_THROWS_AS(Quantizer(2, 1, domain, map), ValidationError);

  // A partial quantizer that misses an intermediate value.
  const Quantizer even(2, 1, {0, 2, 4, 6}, {0, 1, 2, 3});
  CHECK(even.in_domain(4));
  CHECK_FALSE(even.in_domain(3));
  CHECK_THROWS_AS(fixed_point_filter(Alphabet::modular(4), {{2, 1}, {}}, even, QuantizerPlacement::kAfterMultiply),
                  ValidationError);
  CHECK_NOTHROW(fixed_point_filter(Alphabet::modular(4), {{2, 4}, {}}, even, QuantizerPlacement::kAfterMultiply));
  CHECK_THROWS_AS(fixed_point_filter(Alphabet::modular(3), {{1}, {}}, Quantizer::truncating(2, 0),
                                     QuantizerPlacement::kAfterMultiply),
                  ValidationError);
}

TEST_CASE("multiplier examples") {
  const std::vector<std::int64_t> pos{1, 2};
  const SystemSpec m = multiplier_system(pos);
  CHECK(m.output_alphabet().size() == 3);
  CHECK(check_partial_invertibility(m).invertible);
  CHECK(simulate(m, SymbolSequence{1, 0, 1, 1}, SystemState{{1}, {}}) == SymbolSequence{2, 1, 1, 2});

  const std::vector<std::int64_t> sign{-1, 1};
  CHECK(check_partial_invertibility(multiplier_system(sign)).invertible);

  const std::vector<std::int64_t> bits{0, 1};
  const InvertibilityVerdict v = check_partial_invertibility(multiplier_system(bits));
  CHECK_FALSE(v.invertible);
  REQUIRE(v.witness);
  CHECK(*v.witness == Collision{0, 0, 1});
  CHECK(preimage_bound(multiplier_system(bits)) == 1.0);

  const SystemSpec z5 = multiplier_system(Alphabet::modular(5));
  CHECK_FALSE(check_partial_invertibility(z5).invertible);
  CHECK(preimage_bound(z5) == doctest::Approx(std::log2(5.0)));
  CHECK_THROWS_AS(multiplier_system(std::vector<std::int64_t>{}), ValidationError);
}

TEST_CASE("hammerstein systems") {
  const std::vector<std::int64_t> vals{-1, 0, 1};
  const Alphabet in = Alphabet::integers(vals);
  const SystemSpec neg = static_system(in, in, {2, 1, 0});
  const SystemSpec h = hammerstein_system(neg, identity_system(in));
  CHECK(check_partial_invertibility(h).invertible);
  CHECK(static_preimage_bound(neg) == 0.0);

  const SystemSpec sq = squarer_system();
  CHECK(static_preimage_bound(sq) == 1.0);
  const SystemSpec sx = hammerstein_system(sq, xor_filter());
  CHECK(preimage_bound(sx) == 1.0);
  CHECK_FALSE(check_partial_invertibility(sx).invertible);

  const SystemSpec c = constant_system(in, Alphabet::modular(2), 0);
  CHECK(static_preimage_bound(c) == doctest::Approx(std::log2(3.0)));
  CHECK(preimage_bound(hammerstein_system(c, xor_filter())) == doctest::Approx(std::log2(3.0)));

  CHECK_THROWS_AS(hammerstein_system(xor_filter(), xor_filter()), ValidationError);
  CHECK_THROWS_AS(hammerstein_system(sq, identity_system(in)), ValidationError);
}

TEST_CASE("static systems") {
  const SystemSpec s = static_system(Alphabet::modular(4), Alphabet::modular(2), {0, 1, 1, 1});
  CHECK(preimage_bound(s) == doctest::Approx(std::log2(3.0)));
  CHECK(max_preimage_size(s) == 3);
  CHECK(simulate(s, SymbolSequence{3, 0, 2}) == SymbolSequence{1, 0, 1});
  CHECK_THROWS_AS(static_system(Alphabet::modular(4), Alphabet::modular(2), {0, 1}), ValidationError);
  CHECK_THROWS_AS(static_system(Alphabet::modular(2), Alphabet::modular(2), {0, 2}), ValidationError);
  CHECK_THROWS_AS(constant_system(Alphabet::modular(2), Alphabet::modular(2), 2), ValidationError);
}
