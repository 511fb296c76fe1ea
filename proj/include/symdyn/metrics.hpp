#pragma once

#include <optional>
#include <vector>

#include "symdyn/word.hpp"

namespace symdyn {

// Index lists I into u and I' into w with u[I[s]] == w[I'[s]].
struct MatchCertificate {
  std::vector<std::size_t> left;
  std::vector<std::size_t> right;

  std::size_t size() const noexcept { return left.size(); }
  friend bool operator==(const MatchCertificate&, const MatchCertificate&) = default;
};

struct EditDistance {
  double value = 0.0;
  std::size_t lcs = 0;
  MatchCertificate cert;
};

struct Checkpoint {
  std::size_t n = 0;
  double dbar = 0.0;
  double fbar = 0.0;
};

struct DistanceProfile {
  std::vector<Checkpoint> checkpoints;
  double limsup_dbar = 0.0;
  double limsup_fbar = 0.0;
};

// Per-letter Hamming distance of equal-length, non-empty words.
double hamming_dn(const Word& u, const Word& w);

// 1 - LCS(u, w) / n with an optimal common subsequence as witness.
// Linear space (Hirschberg) for large inputs; ties resolve toward the
// leftmost split so the certificate is deterministic.
EditDistance edit_fn(const Word& u, const Word& w);

// Value-only path: bit-parallel LCS, 64 columns per machine word.
double edit_fn_fast(const Word& u, const Word& w);

// LCS length only (exposed for tests and the profile).
std::size_t lcs_length_bitparallel(std::span<const Symbol> u, std::span<const Symbol> w);

// LCS(u[0,n), w[0,n)) for every n in `prefix_lengths` (increasing) in a single
// bit-parallel sweep.
std::vector<std::size_t> lcs_prefix_lengths(std::span<const Symbol> u, std::span<const Symbol> w,
                                            std::span<const std::size_t> prefix_lengths);

enum class ProfileMetric { dbar, fbar, both };

// limsup is estimated as the maximum over the final ceil(k/3) checkpoints.
DistanceProfile distance_profile(const Word& u, const Word& w,
                                 std::span<const std::size_t> checkpoints,
                                 ProfileMetric metric = ProfileMetric::both);

// True iff every matched pair agrees and the densities |I ∩ [0,n)|/n and
// |I' ∩ [0,n)|/n are >= 1 - eps at every checkpoint n (default: n = |u|).
// A structurally broken certificate throws Errc::malformed_certificate.
bool verify_hat_f_certificate(const Word& u, const Word& w, const MatchCertificate& cert,
                              double eps,
                              std::optional<std::vector<std::size_t>> checkpoints = std::nullopt);

// Throws Errc::malformed_certificate unless indices are strictly increasing,
// of equal count, and inside the given bounds.
void check_certificate_shape(const MatchCertificate& cert, std::size_t left_len,
                             std::size_t right_len);

}  // namespace symdyn
