#include "symdyn/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symdyn {

namespace {

// Key spaces up to 2^20 are counted in a dense table; larger ones by sorting.
constexpr unsigned kDenseBits = 20;

std::uint64_t key_mask(unsigned key_bits) {
  return key_bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << key_bits) - 1;
}

}  // namespace

double shannon_h(double t) {
  require(t >= 0.0 && t <= 1.0, Errc::invalid_argument,
          "shannon_h: argument " + std::to_string(t) + " outside [0,1]");
  return t > 0.0 ? -t * std::log(t) : 0.0;
}

BlockCensus::BlockCensus(const Word& w, std::size_t m)
    : m_(m), alphabet_(w.alphabet()), bits_(w.alphabet().bits_per_symbol()), total_(0) {
  require(m >= 1, Errc::invalid_argument, "block_census: m must be >= 1");
  require(m <= w.size(), Errc::invalid_argument,
          "block_census: m = " + std::to_string(m) + " exceeds word length " +
              std::to_string(w.size()));
  require(m * bits_ <= 64, Errc::invalid_argument,
          "block_census: m * bits_per_symbol exceeds 64-bit key");
  total_ = w.size() - m + 1;

  const unsigned key_bits = static_cast<unsigned>(m * bits_);
  const std::uint64_t mask = key_mask(key_bits);
  const auto s = w.symbols();

  std::uint64_t key = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) key = (key << bits_) | s[i];

  if (key_bits <= kDenseBits) {
    std::vector<std::uint64_t> table(std::size_t{1} << key_bits, 0);
    for (std::size_t i = m - 1; i < s.size(); ++i) {
      key = ((key << bits_) | s[i]) & mask;
      ++table[key];
    }
    for (std::size_t k = 0; k < table.size(); ++k)
      if (table[k] != 0) counts_.emplace_back(k, table[k]);
  } else {
    std::vector<std::uint64_t> keys;
    keys.reserve(total_);
    for (std::size_t i = m - 1; i < s.size(); ++i) {
      key = ((key << bits_) | s[i]) & mask;
      keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      counts_.emplace_back(keys[i], j - i);
      i = j;
    }
  }
}

std::uint64_t BlockCensus::pack(std::span<const Symbol> block) const {
  require(block.size() == m_, Errc::invalid_argument, "block has wrong length");
  std::uint64_t key = 0;
  for (Symbol x : block) {
    require(alphabet_.contains(x), Errc::invalid_argument, "block symbol outside alphabet");
    key = (key << bits_) | x;
  }
  return key;
}

std::vector<Symbol> BlockCensus::unpack(std::uint64_t key) const {
  std::vector<Symbol> block(m_);
  const std::uint64_t sym_mask = key_mask(bits_);
  for (std::size_t i = m_; i-- > 0;) {
    block[i] = static_cast<Symbol>(key & sym_mask);
    key >>= bits_;
  }
  return block;
}

std::uint64_t BlockCensus::count(std::span<const Symbol> block) const {
  const std::uint64_t key = pack(block);
  auto it = std::lower_bound(counts_.begin(), counts_.end(), std::make_pair(key, std::uint64_t{0}));
  return (it != counts_.end() && it->first == key) ? it->second : 0;
}

double empirical_entropy(const BlockCensus& census) {
  const double total = static_cast<double>(census.total());
  double h = 0.0;
  for (const auto& [key, c] : census.counts()) h += shannon_h(static_cast<double>(c) / total);
  return h;
}

double undersampling_limit(std::size_t n, double alphabet_size) {
  if (alphabet_size < 2.0 || n < 2) return INFINITY;
  return std::log(static_cast<double>(n)) / (2.0 * std::log(alphabet_size));
}

EntropyEstimate estimate_entropy_rate(const Word& w, std::size_t m) {
  require(m >= 1, Errc::invalid_argument, "estimate_entropy_rate: m must be >= 1");
  require(m + 1 <= w.size(), Errc::invalid_argument,
          "estimate_entropy_rate: word shorter than m + 1");
  EntropyEstimate e;
  e.m = m;
  e.n = w.size();
  e.block_entropy = empirical_entropy(BlockCensus(w, m));
  const double prev = m > 1 ? empirical_entropy(BlockCensus(w, m - 1)) : 0.0;
  e.ratio = e.block_entropy / static_cast<double>(m);
  // The two censuses differ by one window, which can push the raw
  // difference below zero by O(log n / n).
  e.slope = std::max(0.0, e.block_entropy - prev);
  e.undersampled = static_cast<double>(m) > undersampling_limit(w.size(), w.alphabet().size());
  return e;
}

ConditionalEntropy conditional_entropy(const BlockCensus& joint, const BlockCensus& marginal) {
  require(joint.block_length() >= 2, Errc::invalid_argument,
          "conditional_entropy: joint block length must be >= 2");
  require(marginal.block_length() + 1 == joint.block_length(), Errc::invalid_argument,
          "conditional_entropy: marginal must have block length m - 1");
  require(joint.alphabet() == marginal.alphabet(), Errc::invalid_argument,
          "conditional_entropy: censuses over different alphabets");

  const unsigned b = joint.bits_per_symbol();
  const double total = static_cast<double>(joint.total());
  const auto& jc = joint.counts();

  ConditionalEntropy out;
  std::uint64_t mismatch = 0;
  const auto& mc = marginal.counts();
  std::size_t mi = 0;

  for (std::size_t i = 0; i < jc.size();) {
    const std::uint64_t ctx = jc[i].first >> b;
    std::size_t j = i;
    std::uint64_t ctx_count = 0;
    while (j < jc.size() && (jc[j].first >> b) == ctx) ctx_count += jc[j++].second;

    double h_next = 0.0;
    for (std::size_t k = i; k < j; ++k)
      h_next += shannon_h(static_cast<double>(jc[k].second) / static_cast<double>(ctx_count));
    out.value += static_cast<double>(ctx_count) / total * h_next;

    // Joint prefixes and marginal keys are both sorted; walk them together.
    while (mi < mc.size() && mc[mi].first < ctx) mismatch += mc[mi++].second;
    if (mi < mc.size() && mc[mi].first == ctx) {
      const auto mcount = mc[mi++].second;
      mismatch += mcount > ctx_count ? mcount - ctx_count : ctx_count - mcount;
    } else {
      mismatch += ctx_count;
    }
    i = j;
  }
  while (mi < mc.size()) mismatch += mc[mi++].second;
  out.consistent = mismatch <= 1;
  return out;
}

double max_entropy_geometric(double p) {
  require(p > 0.0 && p <= 1.0, Errc::invalid_argument, "max_entropy_geometric: p outside (0,1]");
  return (shannon_h(p) + shannon_h(1.0 - p)) / p;
}

}  // namespace symdyn
