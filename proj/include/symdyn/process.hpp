#pragma once

#include <string>
#include <variant>
#include <vector>

#include "symdyn/rng.hpp"
#include "symdyn/word.hpp"

namespace symdyn {

class ProcessSpec;

struct IidSpec {
  std::vector<double> probabilities;
  friend bool operator==(const IidSpec&, const IidSpec&) = default;
};

struct MarkovSpec {
  std::vector<std::vector<double>> transition;  // row-stochastic, l x l
  std::vector<double> stationary;               // filled in by validation
  friend bool operator==(const MarkovSpec&, const MarkovSpec&) = default;
};

struct PeriodicSpec {
  std::vector<Symbol> period;
  std::uint32_t alphabet_size = 0;  // 0: max(period) + 1
  friend bool operator==(const PeriodicSpec&, const PeriodicSpec&) = default;
};

struct MixtureSpec {
  std::vector<double> weights;
  std::vector<ProcessSpec> components;
  friend bool operator==(const MixtureSpec& a, const MixtureSpec& b);
};

// Declarative description of a stationary process. Constructing one through
// the factory functions validates it; a ProcessSpec is never invalid.
class ProcessSpec {
 public:
  using Variant = std::variant<IidSpec, MarkovSpec, PeriodicSpec, MixtureSpec>;

  static ProcessSpec iid(std::vector<double> probabilities);
  // Stationary vector is solved for when `stationary` is empty, otherwise
  // checked against piP = pi.
  static ProcessSpec markov(std::vector<std::vector<double>> transition,
                            std::vector<double> stationary = {});
  static ProcessSpec periodic(std::vector<Symbol> period, std::uint32_t alphabet_size = 0);
  static ProcessSpec mixture(std::vector<double> weights, std::vector<ProcessSpec> components);

  const Variant& variant() const noexcept { return v_; }
  template <class T>
  const T* as() const noexcept { return std::get_if<T>(&v_); }

  Alphabet alphabet() const;
  std::string kind() const;

  // Mixture with at least two distinct components.
  bool is_nontrivial_mixture() const;

  friend bool operator==(const ProcessSpec& a, const ProcessSpec& b) { return a.v_ == b.v_; }

 private:
  explicit ProcessSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline bool operator==(const MixtureSpec& a, const MixtureSpec& b) {
  return a.weights == b.weights && a.components == b.components;
}

// Stationary vector of a row-stochastic matrix; throws when it is not unique.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

// Entropy rate in nats per symbol.
double analytic_entropy(const ProcessSpec& spec);

// Length-n realization of an ergodic spec (Mixture specs with two or more
// distinct components are rejected; use quasi_generic_path).
Word sample_path(const ProcessSpec& spec, std::size_t n, Seed seed);

// Round-robin concatenation: round j = 1, 2, ... gives component i a fresh
// block of ceil(w_i * j * L) symbols. Truncated to n.
Word quasi_generic_path(const ProcessSpec& spec, std::size_t n, std::uint32_t schedule_L, Seed seed);

// Length of the prefix covered by the first `rounds` complete rounds.
std::size_t quasi_generic_round_boundary(const MixtureSpec& mix, std::uint32_t schedule_L,
                                         std::size_t rounds);

// sample_path for ergodic specs, quasi_generic_path for mixtures.
Word generate(const ProcessSpec& spec, std::size_t n, std::uint32_t schedule_L, Seed seed);

}  // namespace symdyn
