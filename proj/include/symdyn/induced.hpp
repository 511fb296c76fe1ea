#pragma once

#include <map>
#include <span>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

// E as a union of 1-cylinders: positions j with w[j] in the marked symbol set.
class MarkedSet {
 public:
  MarkedSet(Alphabet alphabet, std::span<const Symbol> marked);
  // Every nonzero symbol, i.e. E = {w_0 != 0}.
  static MarkedSet nonzero(Alphabet alphabet);

  bool contains(Symbol s) const noexcept { return s < mask_.size() && mask_[s]; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  bool is_everything() const noexcept;
  std::vector<Symbol> symbols() const;

 private:
  Alphabet alphabet_;
  std::vector<bool> mask_;
};

// Entries of w into E, the gaps between consecutive entries and the
// return words w(pos_{k-1}, pos_k].
class InducedName {
 public:
  InducedName(Word base, std::vector<std::size_t> entries);

  const Word& base() const noexcept { return base_; }
  std::size_t base_length() const noexcept { return base_.size(); }
  const std::vector<std::size_t>& entry_positions() const noexcept { return entries_; }
  const std::vector<std::size_t>& return_times() const noexcept { return return_times_; }
  std::size_t return_count() const noexcept { return return_times_.size(); }
  // k-th return word, k in [0, return_count()).
  std::span<const Symbol> return_word(std::size_t k) const;

 private:
  Word base_;
  std::vector<std::size_t> entries_;
  std::vector<std::size_t> return_times_;
};

// Throws Errc::not_enough_entries when w visits E fewer than twice.
InducedName induce(const Word& w, const MarkedSet& e);

struct ReturnTimeCensus {
  std::map<std::size_t, std::uint64_t> counts;
  std::uint64_t returns = 0;

  double mass(std::size_t r) const;
};

ReturnTimeCensus return_time_census(const InducedName& name);

// Fraction of positions of w lying in E.
double marked_density(const Word& w, const MarkedSet& e);

struct KacResult {
  double mean_return = 0.0;
  double residual = 0.0;  // |mean_return - 1/muE|
};

KacResult kac_check(const ReturnTimeCensus& rtc, double muE_hat);

// Return-word dictionary of an adapted name; id 0 is reserved for "no entry".
class ReturnWordDictionary {
 public:
  Symbol intern(std::span<const Symbol> word);
  const std::vector<Symbol>& word(Symbol id) const;
  bool has(Symbol id) const noexcept { return id >= 1 && id <= words_.size(); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::vector<std::vector<Symbol>> words_;
  std::map<std::vector<Symbol>, Symbol> ids_;
};

struct AdaptedName {
  Word symbols;  // over {0} ∪ dictionary ids
  ReturnWordDictionary dictionary;
  std::uint32_t source_alphabet = 0;
};

// Places id(return word) at each entry position and 0 elsewhere. The first
// return word runs from index 0 to the first entry; symbols after the last
// entry are not encoded.
AdaptedName encode_adapted_name(const Word& name, const MarkedSet& e);

// Inverse of encode; every zero-run must be exactly |word| - 1 long.
Word decode_adapted_name(const AdaptedName& adapted);

struct AbramovOptions {
  std::size_t r_max = 32;
  double dirac_threshold = 0.5;     // excise a non-E run longer than this fraction of n
  double overflow_flag_mass = 0.01;
};

struct AbramovResult {
  double h_base = 0.0;
  double h_induced = 0.0;
  double muE_hat = 0.0;
  double residual = 0.0;
  std::size_t m = 0;
  std::size_t m_induced = 0;
  std::size_t induced_length = 0;
  std::size_t induced_alphabet = 0;
  double overflow_mass = 0.0;
  double alpha_hat = 0.0;          // excised Dirac fraction
  std::size_t max_return = 0;
  bool flagged = false;
};

// Induced process over return words; words longer than r_max collapse into a
// single overflow symbol.
Word induced_word(const InducedName& name, std::size_t r_max, std::size_t* overflow_count = nullptr,
                  std::size_t* alphabet_used = nullptr);

AbramovResult abramov_check(const Word& w, const MarkedSet& e, std::size_t m,
                            const AbramovOptions& opts = {});

}  // namespace symdyn
