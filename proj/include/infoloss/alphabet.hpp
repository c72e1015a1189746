#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace infoloss {

/// Symbols are referred to by their index into an Alphabet.
using Symbol = std::uint32_t;
using SymbolSequence = std::vector<Symbol>;

/// Operation tables of a finite commutative ring-like structure over symbol
/// indices. Addition must form a commutative group; multiplication must be
/// closed with identity `one`.
struct RingTables {
  std::vector<Symbol> add;  // row-major |X| x |X|
  std::vector<Symbol> mul;  // row-major |X| x |X|
  Symbol zero = 0;
  Symbol one = 0;
};

/// A finite, ordered set of distinct symbol labels with optional ring
/// structure (used by the modular arithmetic of finite-precision filters).
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols);
  Alphabet(std::vector<std::string> symbols, RingTables ring);

  /// Z_q with labels "0".."q-1" and modular add/multiply.
  static Alphabet modular(std::uint32_t q);
  /// Integer-valued symbols, labelled by their decimal representation.
  static Alphabet integers(std::span<const std::int64_t> values);

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& label(Symbol s) const { return symbols_.at(s); }
  const std::vector<std::string>& labels() const noexcept { return symbols_; }
  std::optional<Symbol> find(std::string_view label) const;
  /// Throws ValidationError naming the label when absent.
  Symbol index_of(std::string_view label) const;
  bool contains(Symbol s) const noexcept { return s < symbols_.size(); }

  /// Parses every label as a base-10 integer; throws ValidationError otherwise.
  std::vector<std::int64_t> integer_values() const;

  bool has_ring() const noexcept { return ring_.has_value(); }
  const RingTables& ring() const;
  Symbol add(Symbol a, Symbol b) const;
  Symbol mul(Symbol a, Symbol b) const;
  Symbol neg(Symbol a) const;
  Symbol zero() const { return ring().zero; }
  Symbol one() const { return ring().one; }
  /// True when `a` has a multiplicative inverse in the ring.
  bool is_unit(Symbol a) const;

  /// Alphabets compare equal when their labels match; ring tables are ignored.
  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  void validate_ring() const;

  std::vector<std::string> symbols_;
  std::optional<RingTables> ring_;
};

/// Throws ValidationError unless every symbol of `seq` lies in `alphabet`.
void require_symbols(const Alphabet& alphabet, std::span<const Symbol> seq, std::string_view what);

}  // namespace infoloss
