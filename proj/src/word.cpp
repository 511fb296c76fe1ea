#include "symdyn/word.hpp"

#include <string>

namespace symdyn {

Word::Word(Alphabet alphabet, std::vector<Symbol> symbols)
    : alphabet_(alphabet), symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!alphabet_.contains(symbols_[i])) {
      fail(Errc::invalid_argument, "symbol " + std::to_string(symbols_[i]) + " at index " +
                                       std::to_string(i) + " outside alphabet of size " +
                                       std::to_string(alphabet_.size()));
    }
  }
}

Word Word::from_digits(std::string_view digits, std::uint32_t alphabet_size) {
  std::vector<Symbol> s;
  s.reserve(digits.size());
  for (char c : digits) {
    require(c >= '0' && c <= '9', Errc::invalid_argument, "not a digit word");
    s.push_back(static_cast<Symbol>(c - '0'));
  }
  return Word(Alphabet(alphabet_size), std::move(s));
}

Word Word::prefix(std::size_t n) const {
  require(n <= size(), Errc::invalid_argument, "prefix longer than word");
  return slice(0, n);
}

Word Word::slice(std::size_t begin, std::size_t end) const {
  require(begin <= end && end <= size(), Errc::invalid_argument, "bad slice bounds");
  Word out;
  out.alphabet_ = alphabet_;
  out.symbols_.assign(symbols_.begin() + static_cast<std::ptrdiff_t>(begin),
                      symbols_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

std::string Word::to_digits() const {
  std::string s;
  s.reserve(size());
  for (Symbol x : symbols_) s.push_back(static_cast<char>('0' + x));
  return s;
}

}  // namespace symdyn
