#include "infoloss/alphabet.hpp"

#include <charconv>
#include <unordered_set>

#include "infoloss/errors.hpp"

namespace infoloss {

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet must contain at least one symbol");
  std::unordered_set<std::string> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s).second) throw ValidationError("duplicate symbol '" + s + "' in alphabet");
  }
}

Alphabet::Alphabet(std::vector<std::string> symbols, RingTables ring)
    : Alphabet(std::move(symbols)) {
  ring_ = std::move(ring);
  validate_ring();
}

Alphabet Alphabet::modular(std::uint32_t q) {
  if (q == 0) throw ValidationError("modulus must be positive");
  std::vector<std::string> labels;
  labels.reserve(q);
  for (std::uint32_t i = 0; i < q; ++i) labels.push_back(std::to_string(i));
  RingTables ring;
  ring.add.resize(std::size_t{q} * q);
  ring.mul.resize(std::size_t{q} * q);
  for (std::uint64_t a = 0; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      ring.add[a * q + b] = static_cast<Symbol>((a + b) % q);
      ring.mul[a * q + b] = static_cast<Symbol>((a * b) % q);
    }
  }
  ring.zero = 0;
  ring.one = q == 1 ? 0 : 1;
  return Alphabet(std::move(labels), std::move(ring));
}

Alphabet Alphabet::integers(std::span<const std::int64_t> values) {
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (auto v : values) labels.push_back(std::to_string(v));
  return Alphabet(std::move(labels));
}

std::optional<Symbol> Alphabet::find(std::string_view label) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == label) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

Symbol Alphabet::index_of(std::string_view label) const {
  if (auto s = find(label)) return *s;
  throw ValidationError("symbol '" + std::string(label) + "' not in alphabet");
}

std::vector<std::int64_t> Alphabet::integer_values() const {
  std::vector<std::int64_t> out;
  out.reserve(symbols_.size());
  for (const auto& s : symbols_) {
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      throw ValidationError("symbol '" + s + "' is not an integer");
    }
    out.push_back(v);
  }
  return out;
}

const RingTables& Alphabet::ring() const {
  if (!ring_) throw ValidationError("alphabet has no ring structure");
  return *ring_;
}

Symbol Alphabet::add(Symbol a, Symbol b) const { return ring().add[std::size_t{a} * size() + b]; }
Symbol Alphabet::mul(Symbol a, Symbol b) const { return ring().mul[std::size_t{a} * size() + b]; }

Symbol Alphabet::neg(Symbol a) const {
  const auto& r = ring();
  for (Symbol b = 0; b < size(); ++b) {
    if (r.add[std::size_t{a} * size() + b] == r.zero) return b;
  }
  throw InvariantViolation("ring element without additive inverse");
}

bool Alphabet::is_unit(Symbol a) const {
  const auto& r = ring();
  for (Symbol b = 0; b < size(); ++b) {
    if (r.mul[std::size_t{a} * size() + b] == r.one) return true;
  }
  return false;
}

void Alphabet::validate_ring() const {
  const auto& r = *ring_;
  const std::size_t k = size();
  if (r.add.size() != k * k || r.mul.size() != k * k) {
    throw ValidationError("ring tables must be |X| x |X|");
  }
  if (r.zero >= k || r.one >= k) throw ValidationError("ring zero/one out of range");
  for (std::size_t i = 0; i < k * k; ++i) {
    if (r.add[i] >= k || r.mul[i] >= k) throw ValidationError("ring table entry outside alphabet");
  }
  for (std::size_t a = 0; a < k; ++a) {
    if (r.add[a * k + r.zero] != a) throw ValidationError("zero is not an additive identity");
    if (r.mul[a * k + r.one] != a || r.mul[r.one * k + a] != a) {
      throw ValidationError("one is not a multiplicative identity");
    }
    bool has_inverse = false;
    for (std::size_t b = 0; b < k; ++b) {
      if (r.add[a * k + b] != r.add[b * k + a]) throw ValidationError("addition is not commutative");
      if (r.add[a * k + b] == r.zero) has_inverse = true;
    }
    if (!has_inverse) {
      throw ValidationError("symbol '" + symbols_[a] + "' has no additive inverse");
    }
  }
  // O(k^3), so only checked for small alphabets.
  if (k <= 64) {
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t c = 0; c < k; ++c)
          if (r.add[r.add[a * k + b] * k + c] != r.add[a * k + r.add[b * k + c]]) {
            throw ValidationError("addition is not associative");
          }
  }
}

void require_symbols(const Alphabet& alphabet, std::span<const Symbol> seq, std::string_view what) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!alphabet.contains(seq[i])) {
      throw ValidationError(std::string(what) + ": symbol index " + std::to_string(seq[i]) +
                            " at position " + std::to_string(i) + " outside alphabet of size " +
                            std::to_string(alphabet.size()));
    }
  }
}

}  // namespace infoloss
