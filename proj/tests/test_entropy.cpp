#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "symdyn/entropy.hpp"
#include "symdyn/process.hpp"
#include "symdyn/rng.hpp"

using namespace symdyn;

namespace {

const double kLog2 = std::log(2.0);

// Plug-in entropy straight from the string-keyed counts.
double oracle_block_entropy(const Word& w, std::size_t m) {
  const auto c = oracle::block_counts(w, m);
  const double total = static_cast<double>(w.size() - m + 1);
  double h = 0;
  for (const auto& [k, v] : c) h += oracle::xlogx(static_cast<double>(v) / total);
  return h;
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("shannon_h examples") {
  CHECK(shannon_h(0.0) == 0.0);
  CHECK(shannon_h(1.0) == 0.0);
  CHECK(shannon_h(0.5) == doctest::Approx(0.5 * kLog2).epsilon(1e-12));
  CHECK(shannon_h(0.5) == doctest::Approx(0.346574).epsilon(1e-5));
  CHECK_THROWS_AS(shannon_h(-0.1), Error);
  CHECK_THROWS_AS(shannon_h(1.1), Error);
}

TEST_CASE("census examples") {
  const BlockCensus c(Word::from_digits("0101", 2), 2);
  CHECK(c.total() == 3);
  CHECK(c.counts().size() == 2);
  CHECK(c.count(Word::from_digits("01", 2).symbols()) == 2);
  CHECK(c.count(Word::from_digits("10", 2).symbols()) == 1);
  CHECK(c.count(Word::from_digits("00", 2).symbols()) == 0);

  const Word w = Word::from_digits("0112", 3);
  const BlockCensus whole(w, 4);
  CHECK(whole.total() == 1);
  CHECK(whole.count(w.symbols()) == 1);
  CHECK(whole.unpack(whole.counts()[0].first) == w.vec());

  const BlockCensus zeros(Word::from_digits("0000", 2), 1);
  CHECK(zeros.counts().size() == 1);
  CHECK(zeros.count(Word::from_digits("0", 2).symbols()) == 4);

  CHECK_THROWS_AS(BlockCensus(Word::from_digits("01", 2), 3), Error);
  CHECK_THROWS_AS(BlockCensus(Word::from_digits("01", 2), 0), Error);
  // 65 binary symbols do not fit a 64-bit key.
  CHECK_THROWS_AS(BlockCensus(Word(Alphabet(2), std::vector<Symbol>(100, 0)), 65), Error);
}

TEST_CASE("census agrees with direct counting") {
  Philox4x32 g(30, 0);
  for (std::uint32_t l : {2u, 3u, 5u}) {
    std::vector<Symbol> s(5000);
    for (auto& x : s) x = static_cast<Symbol>(g.below(l));
    const Word w(Alphabet(l), s);
    // m = 1..3 exercise the dense table, m = 12 the sorted path for l = 5.
    for (std::size_t m : {1, 2, 3, 12}) {
      const BlockCensus c(w, m);
      const auto direct = oracle::block_counts(w, m);
      CHECK(c.counts().size() == direct.size());
      std::uint64_t sum = 0;
      for (std::size_t i = 0; i < c.counts().size(); ++i) {
        if (i > 0) CHECK(c.counts()[i - 1].first < c.counts()[i].first);
        sum += c.counts()[i].second;
        std::string key;
        for (Symbol x : c.unpack(c.counts()[i].first)) key += std::to_string(x) + ",";
        CHECK(direct.at(key) == c.counts()[i].second);
      }
      CHECK(sum == c.total());
      CHECK(c.total() == w.size() - m + 1);
      CHECK(empirical_entropy(c) == doctest::Approx(oracle_block_entropy(w, m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("empirical entropy examples") {
  CHECK(empirical_entropy(BlockCensus(Word::from_digits("0000", 2), 2)) == 0.0);
  // All 8 length-3 blocks once: the de Bruijn cycle 0001011100 read linearly.
  const BlockCensus uniform(Word::from_digits("0001011100", 2), 3);
  CHECK(uniform.counts().size() == 8);
  CHECK(empirical_entropy(uniform) == doctest::Approx(3 * kLog2).epsilon(1e-12));
  const double h = empirical_entropy(BlockCensus(Word::from_digits("0101", 2), 2));
  CHECK(h == doctest::Approx(shannon_h(2.0 / 3) + shannon_h(1.0 / 3)).epsilon(1e-12));
  CHECK(h == doctest::Approx(0.63651).epsilon(1e-4));
}

TEST_CASE("block entropy bounds") {
  Philox4x32 g(31, 0);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t l = 2 + static_cast<std::uint32_t>(g.below(4));
    const std::size_t n = 20 + g.below(3000);
    std::vector<Symbol> s(n);
    for (auto& x : s) x = static_cast<Symbol>(g.below(l));
    const Word w(Alphabet(l), s);
    for (std::size_t m = 1; m <= 6; ++m) {
      const double H = empirical_entropy(BlockCensus(w, m));
      CHECK(H >= 0.0);
      CHECK(H <= m * std::log(static_cast<double>(l)) + 1e-12);
      const auto e = estimate_entropy_rate(w, m);
      CHECK(e.ratio >= 0.0);
      CHECK(e.slope >= 0.0);
      // Sliding-window censuses at m and m-1 differ by one window per
      // length, so slope <= H_1 holds up to that boundary term.
      const double boundary = static_cast<double>(m) / static_cast<double>(n - m + 1) * std::log(static_cast<double>(l));
      CHECK(e.slope <= estimate_entropy_rate(w, 1).block_entropy + boundary);
    }
  }
}

TEST_CASE("estimate on a periodic word") {
  std::vector<Symbol> s(2000);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i % 2;
  const Word w(Alphabet(2), s);
  const auto e = estimate_entropy_rate(w, 3);
  // 0101... has 1000 "01" windows but 999 "10": only the boundary term survives.
  CHECK(e.slope <= 3.0 / 1998 * kLog2);
  CHECK(e.m == 3);
  CHECK(e.n == 2000);
  CHECK(estimate_entropy_rate(w, 8).ratio < e.ratio);
  CHECK_THROWS_AS(estimate_entropy_rate(w, 0), Error);
}

TEST_CASE("undersampling flag") {
  CHECK(undersampling_limit(1000000, 2) == doctest::Approx(std::log(1e6) / (2 * kLog2)));
  const Word w = sample_path(ProcessSpec::iid({0.5, 0.5}), 4096, 1);
  CHECK_FALSE(estimate_entropy_rate(w, 6).undersampled);
  CHECK(estimate_entropy_rate(w, 7).undersampled);
}

TEST_CASE("slope tracks the analytic rate at moderate n") {
  const auto mk = ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}});
  const Word w = sample_path(mk, 200000, 5);
  CHECK(std::abs(estimate_entropy_rate(w, 4).slope - analytic_entropy(mk)) < 0.01);
  const Word b = sample_path(ProcessSpec::iid({0.5, 0.5}), 200000, 5);
  CHECK(std::abs(estimate_entropy_rate(b, 4).slope - kLog2) < 0.01);
}

TEST_CASE("conditional entropy equals the block difference") {
  Philox4x32 g(32, 0);
  const std::vector<ProcessSpec> specs{ProcessSpec::iid({0.3, 0.7}), ProcessSpec::iid({0.2, 0.3, 0.5}),
                                       ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}}),
                                       ProcessSpec::periodic({0, 1, 1})};
  for (const auto& spec : specs) {
    for (std::size_t n : {50, 1000, 20000}) {
      const Word w = sample_path(spec, n, g.next_u64());
      for (std::size_t m = 2; m <= 5; ++m) {
        const BlockCensus joint(w, m), marginal(w, m - 1);
        const auto ce = conditional_entropy(joint, marginal);
        CHECK(ce.consistent);
        const double diff = empirical_entropy(joint) - empirical_entropy(marginal);
        // The marginal census has one window more than the joint's prefixes.
        // Mixing one extra window into N moves the entropy by at most
        // H_bin(1/(N+1)) + H_{m-1}/(N+1), and H_{m-1} <= (m-1) log l.
        const double N = static_cast<double>(joint.total());
        const double bound = oracle::xlogx(1 / (N + 1)) + oracle::xlogx(N / (N + 1)) +
                             static_cast<double>(m - 1) * std::log(static_cast<double>(w.alphabet().size())) / (N + 1);
        CHECK(std::abs(ce.value - diff) <= bound);
      }
    }
  }
  // Deterministic word: zero.
  const Word p = sample_path(ProcessSpec::periodic({0, 1, 2}), 300, 0);
  CHECK(conditional_entropy(BlockCensus(p, 3), BlockCensus(p, 2)).value == doctest::Approx(0.0));
  // Markov: close to the analytic rate for m >= 2.
  const auto mk = ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}});
  const Word w = sample_path(mk, 300000, 9);
  CHECK(std::abs(conditional_entropy(BlockCensus(w, 2), BlockCensus(w, 1)).value - analytic_entropy(mk)) < 0.01);
  // IID, m = 2: close to H_1.
  const Word b = sample_path(ProcessSpec::iid({0.3, 0.7}), 300000, 9);
  CHECK(std::abs(conditional_entropy(BlockCensus(b, 2), BlockCensus(b, 1)).value -
                 empirical_entropy(BlockCensus(b, 1))) < 0.005);
}

TEST_CASE("mismatched censuses are reported") {
  const Word a = Word::from_digits("0101010101", 2), b = Word::from_digits("0000000000", 2);
  CHECK_FALSE(conditional_entropy(BlockCensus(a, 2), BlockCensus(b, 1)).consistent);
  CHECK_THROWS_AS(conditional_entropy(BlockCensus(a, 3), BlockCensus(a, 1)), Error);
}

TEST_CASE("geometric maximum entropy") {
  CHECK(max_entropy_geometric(1.0) == 0.0);
  CHECK(max_entropy_geometric(0.5) == doctest::Approx(2 * kLog2).epsilon(1e-12));
  CHECK(max_entropy_geometric(0.9) == doctest::Approx((shannon_h(0.9) + shannon_h(0.1)) / 0.9).epsilon(1e-12));
  CHECK(max_entropy_geometric(0.9) == doctest::Approx(0.36120).epsilon(1e-4));
  CHECK_THROWS_AS(max_entropy_geometric(0.0), Error);
  CHECK_THROWS_AS(max_entropy_geometric(1.5), Error);
  CHECK(nats_to_bits(kLog2) == doctest::Approx(1.0));
}

}  // TEST_SUITE
