#pragma once

#include <vector>

#include "symdyn/metrics.hpp"
#include "symdyn/rng.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

enum class ChannelKind { substitution, indel };

struct Substituted {
  Word y;
  std::vector<std::size_t> changed;
};

// Each position is resampled uniformly over the other symbols with
// probability eps.
Substituted substitute_channel(const Word& x, double eps, Seed seed);

struct IndelResult {
  Word y;
  MatchCertificate cert;
};

// Before each input symbol a uniform symbol is inserted with probability
// eps/2; the input symbol is then deleted with probability eps/2. Output is
// truncated or padded (uniform symbols) to |x|.
IndelResult indel_channel(const Word& x, double eps, Seed seed);

struct ProofTriple {
  Word y;     // indicator of A, binary
  Word z;     // x on A, 0 elsewhere
  Word zbar;  // x off A, 0 elsewhere
};

// x must use labels 1..l (no 0). `matched` are the positions of A,
// strictly increasing.
ProofTriple build_proof_triple(const Word& x, std::span<const std::size_t> matched);

// Symbolwise merge (take the nonzero entry) of z and zbar.
Word merge_triple(const ProofTriple& t);

// Sum of the explicit O(eps) entropy terms, doubled (one copy per sequence).
double budget(double eps, std::uint32_t alphabet_size);

}  // namespace symdyn
