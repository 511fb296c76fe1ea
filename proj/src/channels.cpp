#include "symdyn/channels.hpp"

#include <cmath>
#include <string>

#include "symdyn/entropy.hpp"

namespace symdyn {

namespace {

void require_rate(double eps, bool allow_one) {
  require(eps >= 0.0 && (allow_one ? eps <= 1.0 : eps < 1.0), Errc::invalid_argument,
          "channel rate " + std::to_string(eps) + " out of range");
}

}  // namespace

Substituted substitute_channel(const Word& x, double eps, Seed seed) {
  require_rate(eps, true);
  const std::uint32_t l = x.alphabet().size();
  require(l >= 2 || eps == 0.0, Errc::invalid_argument,
          "substitute_channel: nothing to substitute over a one-symbol alphabet");
  Philox4x32 rng(seed, streams::kSubstitution);
  std::vector<Symbol> y(x.vec());
  Substituted out;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (rng.uniform() < eps) {
      // Uniform over the l - 1 other symbols.
      auto r = static_cast<Symbol>(rng.below(l - 1));
      y[j] = r >= x[j] ? r + 1 : r;
      out.changed.push_back(j);
    }
  }
  out.y = Word(x.alphabet(), std::move(y));
  return out;
}

IndelResult indel_channel(const Word& x, double eps, Seed seed) {
  require_rate(eps, false);
  const std::uint32_t l = x.alphabet().size();
  const std::size_t n = x.size();
  Philox4x32 rng(seed, streams::kIndel);
  const double half = eps / 2.0;

  std::vector<Symbol> y;
  y.reserve(n + n / 8 + 1);
  IndelResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < half) y.push_back(static_cast<Symbol>(rng.below(l)));
    if (rng.uniform() < half) continue;
    out.cert.left.push_back(i);
    out.cert.right.push_back(y.size());
    y.push_back(x[i]);
  }
  if (y.size() > n) {
    y.resize(n);
    while (!out.cert.right.empty() && out.cert.right.back() >= n) {
      out.cert.right.pop_back();
      out.cert.left.pop_back();
    }
  }
  while (y.size() < n) y.push_back(static_cast<Symbol>(rng.below(l)));
  out.y = Word(x.alphabet(), std::move(y));
  return out;
}

ProofTriple build_proof_triple(const Word& x, std::span<const std::size_t> matched) {
  for (Symbol s : x.symbols())
    require(s != 0, Errc::invalid_argument, "build_proof_triple: alphabet must not contain 0");
  const std::size_t n = x.size();
  std::vector<Symbol> y(n, 0), z(n, 0), zbar(x.vec());
  for (std::size_t s = 0; s < matched.size(); ++s) {
    const std::size_t j = matched[s];
    require(j < n && (s == 0 || j > matched[s - 1]), Errc::malformed_certificate,
            "build_proof_triple: matched positions must be increasing and in range");
    y[j] = 1;
    z[j] = x[j];
    zbar[j] = 0;
  }
  return {Word(Alphabet(2), std::move(y)), Word(x.alphabet(), std::move(z)),
          Word(x.alphabet(), std::move(zbar))};
}

Word merge_triple(const ProofTriple& t) {
  std::vector<Symbol> x(t.z.size());
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = t.z[j] != 0 ? t.z[j] : t.zbar[j];
  return Word(t.z.alphabet(), std::move(x));
}

double budget(double eps, std::uint32_t l) {
  require(eps > 0.0 && eps < 1.0, Errc::invalid_argument, "budget: eps outside (0,1)");
  require(l >= 2, Errc::invalid_argument, "budget: alphabet size must be >= 2");
  const double pair = shannon_h(eps) + shannon_h(1.0 - eps);
  const double eps_log_l = eps * std::log(static_cast<double>(l));
  const double joining = pair;                      // entropy of the indicator y
  const double zero_heavy = pair + eps_log_l;       // (1-eps, eps/l, ..., eps/l)
  const double entry_times = pair / (1.0 - eps);    // geometric maximum at mean 1/(1-eps)
  const double dirac = eps_log_l;                   // alpha <= eps split
  return 2.0 * (joining + zero_heavy + entry_times + dirac);
}

}  // namespace symdyn
