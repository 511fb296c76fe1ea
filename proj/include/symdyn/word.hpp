#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "symdyn/error.hpp"

namespace symdyn {

using Symbol = std::uint32_t;

// Finite alphabet {0, ..., size-1}.
class Alphabet {
 public:
  explicit Alphabet(std::uint32_t size) : size_(size) {
    require(size >= 1, Errc::invalid_argument, "alphabet size must be >= 1");
  }
  std::uint32_t size() const noexcept { return size_; }
  bool contains(Symbol s) const noexcept { return s < size_; }

  // Bits needed to store one symbol in a packed block key (at least 1).
  unsigned bits_per_symbol() const noexcept {
    unsigned b = 1;
    while ((std::uint64_t{1} << b) < size_) ++b;
    return b;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::uint32_t size_;
};

// A finite string over an Alphabet. Immutable once built.
class Word {
 public:
  Word() : alphabet_(2) {}
  Word(Alphabet alphabet, std::vector<Symbol> symbols);

  // Parses digits, e.g. Word::from_digits("0101", 2). Test and CLI helper.
  static Word from_digits(std::string_view digits, std::uint32_t alphabet_size);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const noexcept { return symbols_[i]; }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  const std::vector<Symbol>& vec() const noexcept { return symbols_; }

  Word prefix(std::size_t n) const;
  Word slice(std::size_t begin, std::size_t end) const;

  // Digit rendering; only meaningful for alphabets of size <= 10.
  std::string to_digits() const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  Alphabet alphabet_;
  std::vector<Symbol> symbols_;
};

}  // namespace symdyn
