#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

double shannon_h(double t);

// Sliding-window counts of all length-m blocks. Blocks are packed into
// 64-bit keys, bits_per_symbol bits per symbol, first symbol most significant.
class BlockCensus {
 public:
  BlockCensus(const Word& w, std::size_t m);

  std::size_t block_length() const noexcept { return m_; }
  std::uint64_t total() const noexcept { return total_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  unsigned bits_per_symbol() const noexcept { return bits_; }

  // Sorted by key.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& counts() const noexcept {
    return counts_;
  }
  std::uint64_t count(std::span<const Symbol> block) const;
  std::uint64_t pack(std::span<const Symbol> block) const;
  std::vector<Symbol> unpack(std::uint64_t key) const;

 private:
  std::size_t m_;
  Alphabet alphabet_;
  unsigned bits_;
  std::uint64_t total_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts_;
};

inline BlockCensus block_census(const Word& w, std::size_t m) { return BlockCensus(w, m); }

// Plug-in block entropy H_m in nats.
double empirical_entropy(const BlockCensus& census);

struct EntropyEstimate {
  std::size_t m = 0;
  double block_entropy = 0.0;  // H_m
  double ratio = 0.0;          // H_m / m
  double slope = 0.0;          // H_m - H_{m-1}, clamped at 0
  std::size_t n = 0;
  bool undersampled = false;   // m > log n / (2 log l)
};

// Largest block length the undersampling guard allows for n samples over an
// alphabet of `alphabet_size` symbols.
double undersampling_limit(std::size_t n, double alphabet_size);

EntropyEstimate estimate_entropy_rate(const Word& w, std::size_t m);

struct ConditionalEntropy {
  double value = 0.0;
  bool consistent = true;  // marginal masses agree with the joint up to one window
};

// sum_c P(c) H(next | c) over the (m-1)-contexts c of the joint census.
ConditionalEntropy conditional_entropy(const BlockCensus& joint, const BlockCensus& marginal);

// Maximum entropy of a distribution on {1,2,...} with mean 1/p.
double max_entropy_geometric(double p);

inline double nats_to_bits(double nats) { return nats / 0.69314718055994530942; }

}  // namespace symdyn
