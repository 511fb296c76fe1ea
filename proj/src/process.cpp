#include "symdyn/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symdyn/entropy.hpp"

namespace symdyn {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_probability_vector(const std::vector<double>& p, const std::string& what) {
  require(!p.empty(), Errc::invalid_argument, what + ": empty probability vector");
  double sum = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x >= 0.0, Errc::invalid_argument,
            what + ": negative or non-finite probability");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= kSumTol, Errc::invalid_argument,
          what + ": probabilities sum to " + std::to_string(sum));
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  std::partial_sum(p.begin(), p.end(), c.begin());
  c.back() = 1.0;
  return c;
}

Symbol draw(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<Symbol>(it - cdf.begin());
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h += shannon_h(x);
  return h;
}

std::size_t ceil_block(double weight, std::size_t round, std::uint32_t L) {
  return static_cast<std::size_t>(std::ceil(weight * static_cast<double>(round) * L - 1e-12));
}

}  // namespace

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& P) {
  const std::size_t l = P.size();
  // Solve (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  std::vector<std::vector<double>> a(l, std::vector<double>(l + 1, 0.0));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) a[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < l; ++j) a[l - 1][j] = 1.0;
  a[l - 1][l] = 1.0;

  for (std::size_t col = 0; col < l; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < l; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    require(std::abs(a[piv][col]) > 1e-13, Errc::invalid_argument,
            "markov: stationary distribution is not unique (reducible chain)");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < l; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c <= l; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> pi(l);
  for (std::size_t i = 0; i < l; ++i) pi[i] = std::max(0.0, a[i][l] / a[i][i]);
  const double s = std::accumulate(pi.begin(), pi.end(), 0.0);
  for (double& x : pi) x /= s;
  return pi;
}

ProcessSpec ProcessSpec::iid(std::vector<double> probabilities) {
  check_probability_vector(probabilities, "iid");
  return ProcessSpec(IidSpec{std::move(probabilities)});
}

ProcessSpec ProcessSpec::markov(std::vector<std::vector<double>> transition,
                                std::vector<double> stationary) {
  const std::size_t l = transition.size();
  require(l >= 1, Errc::invalid_argument, "markov: empty transition matrix");
  for (std::size_t i = 0; i < l; ++i) {
    require(transition[i].size() == l, Errc::invalid_argument, "markov: matrix is not square");
    check_probability_vector(transition[i], "markov row " + std::to_string(i));
  }
  if (stationary.empty()) {
    stationary = stationary_distribution(transition);
  } else {
    require(stationary.size() == l, Errc::invalid_argument, "markov: stationary has wrong size");
    check_probability_vector(stationary, "markov stationary");
  }
  for (std::size_t j = 0; j < l; ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < l; ++i) v += stationary[i] * transition[i][j];
    require(std::abs(v - stationary[j]) <= kStationaryTol, Errc::invalid_argument,
            "markov: stationary vector does not satisfy piP = pi");
  }
  return ProcessSpec(MarkovSpec{std::move(transition), std::move(stationary)});
}

ProcessSpec ProcessSpec::periodic(std::vector<Symbol> period, std::uint32_t alphabet_size) {
  require(!period.empty(), Errc::invalid_argument, "periodic: empty period word");
  const Symbol top = *std::max_element(period.begin(), period.end());
  if (alphabet_size == 0) alphabet_size = std::max<std::uint32_t>(2, top + 1);
  require(top < alphabet_size, Errc::invalid_argument, "periodic: symbol outside alphabet");
  return ProcessSpec(PeriodicSpec{std::move(period), alphabet_size});
}

ProcessSpec ProcessSpec::mixture(std::vector<double> weights, std::vector<ProcessSpec> components) {
  require(!components.empty(), Errc::invalid_argument, "mixture: no components");
  require(weights.size() == components.size(), Errc::invalid_argument,
          "mixture: weights and components differ in count");
  check_probability_vector(weights, "mixture weights");
  for (double w : weights)
    require(w > 0.0, Errc::invalid_argument, "mixture: weights must lie in (0,1]");
  return ProcessSpec(MixtureSpec{std::move(weights), std::move(components)});
}

Alphabet ProcessSpec::alphabet() const {
  return std::visit(
      [](const auto& s) -> Alphabet {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidSpec>) {
          return Alphabet(static_cast<std::uint32_t>(s.probabilities.size()));
        } else if constexpr (std::is_same_v<T, MarkovSpec>) {
          return Alphabet(static_cast<std::uint32_t>(s.transition.size()));
        } else if constexpr (std::is_same_v<T, PeriodicSpec>) {
          return Alphabet(s.alphabet_size);
        } else {
          std::uint32_t l = 1;
          for (const auto& c : s.components) l = std::max(l, c.alphabet().size());
          return Alphabet(l);
        }
      },
      v_);
}

std::string ProcessSpec::kind() const {
  static const char* names[] = {"iid", "markov", "periodic", "mixture"};
  return names[v_.index()];
}

bool ProcessSpec::is_nontrivial_mixture() const {
  const auto* mix = as<MixtureSpec>();
  if (!mix) return false;
  for (const auto& c : mix->components)
    if (!(c == mix->components.front())) return true;
  return false;
}

double analytic_entropy(const ProcessSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidSpec>) {
          return entropy_of(s.probabilities);
        } else if constexpr (std::is_same_v<T, MarkovSpec>) {
          double h = 0.0;
          for (std::size_t i = 0; i < s.transition.size(); ++i)
            h += s.stationary[i] * entropy_of(s.transition[i]);
          return h;
        } else if constexpr (std::is_same_v<T, PeriodicSpec>) {
          return 0.0;
        } else {
          double h = 0.0;
          for (std::size_t i = 0; i < s.components.size(); ++i)
            h += s.weights[i] * analytic_entropy(s.components[i]);
          return h;
        }
      },
      spec.variant());
}

namespace {

void append_path(const ProcessSpec& spec, std::size_t n, Seed seed, std::vector<Symbol>& out) {
  Philox4x32 rng(seed, streams::kSamplePath);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IidSpec>) {
          const auto cdf = cumulative(s.probabilities);
          for (std::size_t i = 0; i < n; ++i) out.push_back(draw(cdf, rng.uniform()));
        } else if constexpr (std::is_same_v<T, MarkovSpec>) {
          if (n == 0) return;
          std::vector<std::vector<double>> rows;
          rows.reserve(s.transition.size());
          for (const auto& r : s.transition) rows.push_back(cumulative(r));
          Symbol state = draw(cumulative(s.stationary), rng.uniform());
          out.push_back(state);
          for (std::size_t i = 1; i < n; ++i) {
            state = draw(rows[state], rng.uniform());
            out.push_back(state);
          }
        } else if constexpr (std::is_same_v<T, PeriodicSpec>) {
          // Phase 0: a periodic "sample path" is the period word repeated.
          for (std::size_t i = 0; i < n; ++i) out.push_back(s.period[i % s.period.size()]);
        } else {
          // Degenerate mixture: all components equal.
          append_path(s.components.front(), n, seed, out);
        }
      },
      spec.variant());
}

}  // namespace

Word sample_path(const ProcessSpec& spec, std::size_t n, Seed seed) {
  require(!spec.is_nontrivial_mixture(), Errc::invalid_argument,
          "sample_path: mixture specs are not ergodic; use quasi_generic_path");
  std::vector<Symbol> out;
  out.reserve(n);
  append_path(spec, n, seed, out);
  return Word(spec.alphabet(), std::move(out));
}

std::size_t quasi_generic_round_boundary(const MixtureSpec& mix, std::uint32_t L,
                                         std::size_t rounds) {
  std::size_t total = 0;
  for (std::size_t j = 1; j <= rounds; ++j)
    for (double w : mix.weights) total += ceil_block(w, j, L);
  return total;
}

Word quasi_generic_path(const ProcessSpec& spec, std::size_t n, std::uint32_t schedule_L, Seed seed) {
  const auto* mix = spec.as<MixtureSpec>();
  require(mix != nullptr, Errc::invalid_argument, "quasi_generic_path: spec is not a mixture");
  require(schedule_L >= 1, Errc::invalid_argument, "quasi_generic_path: schedule L must be >= 1");
  for (const auto& c : mix->components)
    require(!c.is_nontrivial_mixture(), Errc::invalid_argument,
            "quasi_generic_path: components must be ergodic");

  std::vector<Symbol> out;
  out.reserve(n);
  for (std::size_t round = 1; out.size() < n; ++round) {
    for (std::size_t i = 0; i < mix->components.size() && out.size() < n; ++i) {
      const std::size_t len =
          std::min(ceil_block(mix->weights[i], round, schedule_L), n - out.size());
      append_path(mix->components[i], len, derive_seed(seed, round, i), out);
    }
  }
  return Word(spec.alphabet(), std::move(out));
}

Word generate(const ProcessSpec& spec, std::size_t n, std::uint32_t schedule_L, Seed seed) {
  if (spec.is_nontrivial_mixture()) return quasi_generic_path(spec, n, schedule_L, seed);
  return sample_path(spec, n, seed);
}

}  // namespace symdyn
