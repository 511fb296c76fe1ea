#include "symdyn/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace symdyn {

namespace {

void require_comparable(const Word& u, const Word& w, const char* op) {
  require(u.size() == w.size(), Errc::length_mismatch,
          std::string(op) + ": words have lengths " + std::to_string(u.size()) + " and " +
              std::to_string(w.size()));
  require(!u.empty(), Errc::empty_input, std::string(op) + ": empty words");
}

// Bit-parallel LCS row (Allison-Dix / Hyyro). Bit i of the state vector is
// 0 where the DP row steps up at row i of `a`; after k columns of `b` the
// number of zero bits in [0, i) equals LCS(a[0,i), b[0,k)).
class BitParallelLcs {
 public:
  explicit BitParallelLcs(std::span<const Symbol> a) : len_(a.size()), words_((a.size() + 63) / 64) {
    Symbol top = 0;
    for (Symbol s : a) top = std::max(top, s);
    slot_.assign(std::size_t{top} + 1, kAbsent);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto& slot = slot_[a[i]];
      if (slot == kAbsent) {
        slot = static_cast<std::uint32_t>(masks_.size() / std::max<std::size_t>(words_, 1));
        masks_.resize(masks_.size() + words_, 0);
      }
      masks_[slot * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
    state_.assign(words_, ~std::uint64_t{0});
  }

  void step(Symbol c) {
    if (c >= slot_.size() || slot_[c] == kAbsent) return;  // no matches: row unchanged
    const std::uint64_t* m = &masks_[slot_[c] * words_];
    std::uint64_t carry = 0;
    for (std::size_t k = 0; k < words_; ++k) {
      const std::uint64_t v = state_[k];
      const std::uint64_t u = v & m[k];
      const std::uint64_t sum = v + u;
      const std::uint64_t sum2 = sum + carry;
      carry = static_cast<std::uint64_t>(sum < v) | static_cast<std::uint64_t>(sum2 < sum);
      state_[k] = sum2 | (v - u);
    }
  }

  // Zero bits among the first `bits` positions.
  std::size_t zeros(std::size_t bits) const {
    std::size_t z = 0;
    const std::size_t full = bits / 64;
    for (std::size_t k = 0; k < full; ++k) z += static_cast<std::size_t>(std::popcount(~state_[k]));
    if (const std::size_t rem = bits % 64; rem != 0) {
      const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
      z += static_cast<std::size_t>(std::popcount(~state_[full] & mask));
    }
    return z;
  }

  std::size_t lcs() const { return zeros(len_); }

 private:
  static constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
  std::size_t len_;
  std::size_t words_;
  std::vector<std::uint32_t> slot_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> state_;
};

// row[k] = LCS(a, b[0,k)) for k = 0..|b|.
std::vector<std::size_t> lcs_last_row(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  if (a.empty()) return row;
  BitParallelLcs bp(a);
  for (std::size_t k = 0; k < b.size(); ++k) {
    bp.step(b[k]);
    row[k + 1] = bp.lcs();
  }
  return row;
}

constexpr std::size_t kFullTableCells = std::size_t{1} << 20;

// Quadratic table on suffixes, traced forward from (0,0): take a match when
// the symbols agree, otherwise advance in u while that keeps the optimum.
void lcs_table_trace(std::span<const Symbol> u, std::size_t u_off, std::span<const Symbol> w,
                     std::size_t w_off, MatchCertificate& cert) {
  const std::size_t nu = u.size(), nw = w.size();
  const std::size_t stride = nw + 1;
  std::vector<std::uint32_t> s((nu + 1) * stride, 0);
  for (std::size_t i = nu; i-- > 0;) {
    for (std::size_t j = nw; j-- > 0;) {
      s[i * stride + j] = u[i] == w[j] ? s[(i + 1) * stride + j + 1] + 1
                                       : std::max(s[(i + 1) * stride + j], s[i * stride + j + 1]);
    }
  }
  std::size_t i = 0, j = 0;
  while (i < nu && j < nw) {
    if (u[i] == w[j]) {
      cert.left.push_back(u_off + i);
      cert.right.push_back(w_off + j);
      ++i;
      ++j;
    } else if (s[(i + 1) * stride + j] >= s[i * stride + j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
}

void hirschberg(std::span<const Symbol> u, std::size_t u_off, std::span<const Symbol> w,
                std::size_t w_off, MatchCertificate& cert) {
  if (u.empty() || w.empty()) return;
  if (u.size() == 1 || (u.size() + 1) * (w.size() + 1) <= kFullTableCells) {
    lcs_table_trace(u, u_off, w, w_off, cert);
    return;
  }
  const std::size_t mid = u.size() / 2;
  const auto upper = u.first(mid);
  const auto lower = u.subspan(mid);

  const auto forward = lcs_last_row(upper, w);
  std::vector<Symbol> lower_rev(lower.rbegin(), lower.rend());
  std::vector<Symbol> w_rev(w.rbegin(), w.rend());
  const auto backward = lcs_last_row(lower_rev, w_rev);

  std::size_t best_k = 0, best = 0;
  for (std::size_t k = 0; k <= w.size(); ++k) {
    const std::size_t v = forward[k] + backward[w.size() - k];
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  hirschberg(upper, u_off, w.first(best_k), w_off, cert);
  hirschberg(lower, u_off + mid, w.subspan(best_k), w_off + best_k, cert);
}

}  // namespace

double hamming_dn(const Word& u, const Word& w) {
  require_comparable(u, w, "hamming_dn");
  std::size_t diff = 0;
  for (std::size_t j = 0; j < u.size(); ++j) diff += u[j] != w[j];
  return static_cast<double>(diff) / static_cast<double>(u.size());
}

std::size_t lcs_length_bitparallel(std::span<const Symbol> u, std::span<const Symbol> w) {
  if (u.empty() || w.empty()) return 0;
  BitParallelLcs bp(u);
  for (Symbol c : w) bp.step(c);
  return bp.lcs();
}

std::vector<std::size_t> lcs_prefix_lengths(std::span<const Symbol> u, std::span<const Symbol> w,
                                            std::span<const std::size_t> prefix_lengths) {
  std::vector<std::size_t> out;
  out.reserve(prefix_lengths.size());
  if (prefix_lengths.empty()) return out;
  const std::size_t top = prefix_lengths.back();
  require(top <= u.size() && top <= w.size(), Errc::invalid_argument,
          "lcs_prefix_lengths: prefix beyond word end");
  BitParallelLcs bp(u.first(top));
  std::size_t done = 0;
  for (std::size_t n : prefix_lengths) {
    require(n >= done, Errc::invalid_argument, "lcs_prefix_lengths: lengths must be increasing");
    for (; done < n; ++done) bp.step(w[done]);
    out.push_back(bp.zeros(n));
  }
  return out;
}

EditDistance edit_fn(const Word& u, const Word& w) {
  require_comparable(u, w, "edit_fn");
  EditDistance out;
  hirschberg(u.symbols(), 0, w.symbols(), 0, out.cert);
  out.lcs = out.cert.size();
  out.value = 1.0 - static_cast<double>(out.lcs) / static_cast<double>(u.size());
  return out;
}

double edit_fn_fast(const Word& u, const Word& w) {
  require_comparable(u, w, "edit_fn_fast");
  const std::size_t k = lcs_length_bitparallel(u.symbols(), w.symbols());
  return 1.0 - static_cast<double>(k) / static_cast<double>(u.size());
}

DistanceProfile distance_profile(const Word& u, const Word& w,
                                 std::span<const std::size_t> checkpoints, ProfileMetric metric) {
  require(!checkpoints.empty(), Errc::invalid_argument, "distance_profile: no checkpoints");
  const std::size_t limit = std::min(u.size(), w.size());
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    require(checkpoints[i] >= 1 && checkpoints[i] <= limit, Errc::invalid_argument,
            "distance_profile: checkpoint " + std::to_string(checkpoints[i]) +
                " outside [1, " + std::to_string(limit) + "]");
    require(i == 0 || checkpoints[i] > checkpoints[i - 1], Errc::invalid_argument,
            "distance_profile: checkpoints must be strictly increasing");
  }

  DistanceProfile p;
  p.checkpoints.resize(checkpoints.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (metric != ProfileMetric::fbar) {
    std::size_t diff = 0, j = 0;
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      for (; j < checkpoints[c]; ++j) diff += u[j] != w[j];
      p.checkpoints[c].dbar = static_cast<double>(diff) / static_cast<double>(checkpoints[c]);
    }
  }
  if (metric != ProfileMetric::dbar) {
    const auto lcs = lcs_prefix_lengths(u.symbols(), w.symbols(), checkpoints);
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      p.checkpoints[c].fbar = 1.0 - static_cast<double>(lcs[c]) / static_cast<double>(checkpoints[c]);
  }
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    p.checkpoints[c].n = checkpoints[c];
    if (metric == ProfileMetric::fbar) p.checkpoints[c].dbar = nan;
    if (metric == ProfileMetric::dbar) p.checkpoints[c].fbar = nan;
  }

  const std::size_t tail = (checkpoints.size() + 2) / 3;
  p.limsup_dbar = p.limsup_fbar = 0.0;
  for (std::size_t c = checkpoints.size() - tail; c < checkpoints.size(); ++c) {
    p.limsup_dbar = std::max(p.limsup_dbar, p.checkpoints[c].dbar);
    p.limsup_fbar = std::max(p.limsup_fbar, p.checkpoints[c].fbar);
  }
  if (metric == ProfileMetric::fbar) p.limsup_dbar = nan;
  if (metric == ProfileMetric::dbar) p.limsup_fbar = nan;
  return p;
}

void check_certificate_shape(const MatchCertificate& cert, std::size_t left_len,
                             std::size_t right_len) {
  require(cert.left.size() == cert.right.size(), Errc::malformed_certificate,
          "certificate: index lists differ in length");
  for (std::size_t s = 0; s < cert.size(); ++s) {
    require(cert.left[s] < left_len && cert.right[s] < right_len, Errc::malformed_certificate,
            "certificate: index out of bounds at pair " + std::to_string(s));
    require(s == 0 || (cert.left[s] > cert.left[s - 1] && cert.right[s] > cert.right[s - 1]),
            Errc::malformed_certificate,
            "certificate: indices not strictly increasing at pair " + std::to_string(s));
  }
}

bool verify_hat_f_certificate(const Word& u, const Word& w, const MatchCertificate& cert, double eps,
                              std::optional<std::vector<std::size_t>> checkpoints) {
  check_certificate_shape(cert, u.size(), w.size());
  for (std::size_t s = 0; s < cert.size(); ++s)
    if (u[cert.left[s]] != w[cert.right[s]]) return false;

  const std::vector<std::size_t> points = checkpoints ? *checkpoints : std::vector{u.size()};
  constexpr double kRoundoff = 1e-12;
  for (std::size_t n : points) {
    require(n >= 1, Errc::invalid_argument, "verify_hat_f_certificate: checkpoint must be >= 1");
    const auto below = [n](const std::vector<std::size_t>& idx) {
      return static_cast<double>(std::lower_bound(idx.begin(), idx.end(), n) - idx.begin()) /
             static_cast<double>(n);
    };
    if (below(cert.left) < 1.0 - eps - kRoundoff) return false;
    if (below(cert.right) < 1.0 - eps - kRoundoff) return false;
  }
  return true;
}

}  // namespace symdyn
