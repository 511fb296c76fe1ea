// Acceptance suite: one line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symdyn/entropy.hpp"
#include "symdyn/harness.hpp"
#include "symdyn/induced.hpp"
#include "symdyn/io.hpp"
#include "symdyn/metrics.hpp"
#include "symdyn/process.hpp"

using namespace symdyn;

namespace {

const std::filesystem::path kConfigs = SYMDYN_CONFIG_DIR;
const double kLog2 = std::log(2.0);

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string num(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ExperimentConfig config(const char* name) {
  auto cfg = load_config(kConfigs / name);
  cfg.continuity_csv.clear();
  cfg.abramov_csv.clear();
  cfg.svg_dir.clear();
  return cfg;
}

Word random_word(Philox4x32& g, std::size_t n, std::uint32_t l) {
  std::vector<Symbol> s(n);
  for (auto& x : s) x = static_cast<Symbol>(g.below(l));
  return Word(Alphabet(l), std::move(s));
}

Outcome metric_correctness() {
  Outcome o;
  using S = oracle::SubsequenceSets;
  std::size_t pairs = 0, lcs_bad = 0, fast_bad = 0, dom_bad = 0;
  for (unsigned n = 1; n <= 12; ++n) {
    const std::uint32_t N = 1u << n;
    std::vector<S::Set> sets;
    std::vector<Word> words;
    sets.reserve(N);
    words.reserve(N);
    for (std::uint32_t b = 0; b < N; ++b) {
      sets.push_back(S::of(b, n));
      words.push_back(oracle::binary_word(b, n));
    }
    for (std::uint32_t i = 0; i < N; ++i)
      for (std::uint32_t j = 0; j < N; ++j) {
        const auto e = edit_fn(words[i], words[j]);
        const double brute = 1.0 - static_cast<double>(S::common_max(sets[i], sets[j])) / n;
        lcs_bad += e.value != brute;
        fast_bad += edit_fn_fast(words[i], words[j]) != e.value;
        dom_bad += e.lcs < n - static_cast<unsigned>(std::popcount(i ^ j));
        ++pairs;
      }
  }
  o.expect(lcs_bad == 0, std::to_string(lcs_bad) + " edit_fn/brute-force mismatches");
  o.expect(fast_bad == 0, std::to_string(fast_bad) + " fast/edit_fn mismatches (exhaustive)");
  o.note(std::to_string(pairs) + " exhaustive pairs");

  Philox4x32 g(2024, 0);
  std::size_t rnd_bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + g.below(512);
    const std::uint32_t l = 2 + static_cast<std::uint32_t>(g.below(3));
    const Word u = random_word(g, n, l), w = random_word(g, n, l);
    const auto e = edit_fn(u, w);
    const double fast = edit_fn_fast(u, w);
    const double dp = 1.0 - static_cast<double>(oracle::lcs_dp(u.vec(), w.vec())) / static_cast<double>(n);
    rnd_bad += fast != e.value || e.value != dp;
    std::size_t agree = 0;
    for (std::size_t k = 0; k < n; ++k) agree += u[k] == w[k];
    dom_bad += e.lcs < agree;
  }
  o.expect(rnd_bad == 0, std::to_string(rnd_bad) + " random-pair mismatches");
  o.expect(dom_bad == 0, std::to_string(dom_bad) + " pairs with f > d");
  o.note("1000 random pairs n<=512");
  return o;
}

Outcome shift_example() {
  Outcome o;
  std::size_t bad = 0;
  for (std::size_t k = 1; k <= 64; ++k) {
    std::vector<Symbol> a(2 * k), b(2 * k);
    for (std::size_t i = 0; i < 2 * k; ++i) {
      a[i] = i % 2;
      b[i] = (i + 1) % 2;
    }
    const Word u(Alphabet(2), a), w(Alphabet(2), b);
    const auto e = edit_fn(u, w);
    const double expect = 1.0 - static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
    bad += e.lcs != 2 * k - 1 || e.value != expect || edit_fn_fast(u, w) != expect ||
           std::abs(e.value - 1.0 / (2.0 * k)) > 1e-15 || hamming_dn(u, w) != 1.0;
  }
  o.expect(bad == 0, std::to_string(bad) + " of 64 lengths wrong");
  o.note("k=1..64: fbar=1/(2k), dbar=1");
  return o;
}

Outcome entropy_estimator() {
  Outcome o;
  const std::vector<std::pair<std::string, ProcessSpec>> specs{
      {"iid", ProcessSpec::iid({0.5, 0.5})}, {"markov", load_spec(kConfigs / "specs" / "markov.json")}};
  const double markov_h = oracle::markov_entropy({{0.9, 0.1}, {0.2, 0.8}}, {2.0 / 3.0, 1.0 / 3.0});
  for (const auto& [name, spec] : specs) {
    const double truth = name == "iid" ? kLog2 : markov_h;
    double worst = 0;
    for (Seed s = 1; s <= 20; ++s) {
      const Word w = sample_path(spec, 1000000, s);
      worst = std::max(worst, std::abs(estimate_entropy_rate(w, 10).slope - truth));
    }
    o.expect(worst <= 0.01, name + " worst |slope-h| " + num(worst));
    o.note(name + " h=" + num(truth) + " worst err " + num(worst));
  }
  return o;
}

Outcome affinity() {
  Outcome o;
  const auto spec = load_spec(kConfigs / "specs" / "mixture.json");
  const double h1 = oracle::xlogx(0.1) + oracle::xlogx(0.9), h2 = oracle::xlogx(0.9) + oracle::xlogx(0.1);
  const double truth = 0.5 * h1 + 0.5 * h2;
  double worst = 0, lowest_gap = 1e9;
  for (Seed s = 1; s <= 5; ++s) {
    const double slope = estimate_entropy_rate(quasi_generic_path(spec, 1000000, 1, s), 10).slope;
    worst = std::max(worst, std::abs(slope - truth));
    lowest_gap = std::min(lowest_gap, kLog2 - slope);
  }
  o.expect(worst <= 0.02, "worst |slope-0.3251| " + num(worst));
  o.expect(lowest_gap >= 0.3, "gap below log 2 only " + num(lowest_gap));
  o.note("5 seeds, worst err " + num(worst) + ", min gap to log2 " + num(lowest_gap));
  return o;
}

Outcome kac() {
  Outcome o;
  const std::vector<std::pair<std::string, ProcessSpec>> specs{
      {"bernoulli", ProcessSpec::iid({0.5, 0.5})}, {"markov", load_spec(kConfigs / "specs" / "markov.json")}};
  for (const auto& [name, spec] : specs) {
    double worst = 0;
    for (Seed s = 1; s <= 5; ++s) {
      const Word w = sample_path(spec, 1000000, s);
      const MarkedSet e(Alphabet(2), std::vector<Symbol>{1});
      const double mu = marked_density(w, e);
      const auto k = kac_check(return_time_census(induce(w, e)), mu);
      worst = std::max(worst, k.residual * mu);  // relative to 1/mu
    }
    o.expect(worst <= 0.01, name + " relative error " + num(worst, 6));
    o.note(name + " worst rel err " + num(worst, 6));
  }
  return o;
}

Outcome abramov() {
  Outcome o;
  for (const char* name : {"abramov_bernoulli_half.json", "abramov_bernoulli_02.json"}) {
    const auto cfg = config(name);
    const auto t = run_abramov(cfg);
    const double med = t.median_residual();
    o.expect(med <= 0.02, std::string(name) + " median residual " + num(med));
    std::vector<double> hi;
    for (const auto& r : t.rows) hi.push_back(r.result.h_induced);
    o.note(std::string(name) + " median residual " + num(med) + ", median h_E " + num(median(hi)));
    if (std::string(name) == "abramov_bernoulli_half.json") {
      const double target = 2 * kLog2;
      o.expect(std::abs(median(hi) - target) <= 0.03, "Bernoulli(1/2) h_E " + num(median(hi)));
    }
  }
  return o;
}

Outcome continuity() {
  Outcome o;
  for (const char* name : {"continuity_markov.json", "continuity_mixture.json"}) {
    const auto rep = run_continuity(config(name));
    const auto s = rep.summarize();
    std::size_t fails = 0;
    for (const auto& e : s) fails += e.hard_failures;
    o.expect(fails == 0, std::string(name) + " " + std::to_string(fails) + " rows over budget");
    o.expect(s.front().eps == 0.01 && s.front().median_delta_h <= 0.05,
             std::string(name) + " median at 0.01 = " + num(s.front().median_delta_h));
    o.expect(rep.median_inversions() <= 1,
             std::string(name) + " " + std::to_string(rep.median_inversions()) + " inversions");
    std::string medians;
    for (const auto& e : s) medians += (medians.empty() ? "" : "/") + num(e.median_delta_h, 3);
    o.note(std::string(name) + " medians " + medians);
  }
  return o;
}

Outcome isomorphism() {
  Outcome o;
  Philox4x32 g(88, 0);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::uint32_t l = 2 + static_cast<std::uint32_t>(g.below(4));
    std::vector<Symbol> marks{static_cast<Symbol>(g.below(l))};
    const MarkedSet e(Alphabet(l), marks);
    std::vector<Symbol> s(1 + g.below(400));
    for (auto& x : s) x = static_cast<Symbol>(g.below(l));
    s.back() = marks[0];
    const Word w(Alphabet(l), s);
    const auto a = encode_adapted_name(w, e);
    const Word back = decode_adapted_name(a);
    const auto again = encode_adapted_name(back, e);
    bad += back != w || again.symbols != a.symbols;
  }
  o.expect(bad == 0, std::to_string(bad) + " round-trip failures");

  std::size_t accepted = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Symbol> s(20 + g.below(200));
    for (auto& x : s) x = static_cast<Symbol>(g.below(3));
    s.back() = 1;
    const auto a = encode_adapted_name(Word(Alphabet(3), s), MarkedSet(Alphabet(3), std::vector<Symbol>{1}));
    std::vector<Symbol> v = a.symbols.vec();
    // Pick an entry and lengthen or shorten the zero-run in front of it.
    std::vector<std::size_t> ids;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != 0) ids.push_back(j);
    const std::size_t at = ids[g.below(ids.size())];
    const bool has_zero_before = at > 0 && v[at - 1] == 0;
    if (has_zero_before && g.below(2))
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(at - 1));
    else
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(at), 0);
    auto corrupt = a;
    corrupt.symbols = Word(a.symbols.alphabet(), v);
    try {
      decode_adapted_name(corrupt);
      ++accepted;
    } catch (const Error& e) {
      accepted += e.code() != Errc::structural;
    }
  }
  o.expect(accepted == 0, std::to_string(accepted) + " corrupted words not rejected");
  o.note("1000 round trips, 100 zero-run mutations");
  return o;
}

Outcome reproducibility() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "symdyn_acceptance_repro";
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto c = load_config(kConfigs / "continuity_markov.json");
    c.continuity_csv = dir / "continuity.csv";
    c.svg_dir = dir / "svg";
    c.threads = run == 0 ? 0 : 1;
    emit_continuity(c, run_continuity(c));
    auto a = load_config(kConfigs / "abramov_bernoulli_half.json");
    a.abramov_csv = dir / "abramov.csv";
    a.svg_dir = dir / "svg";
    emit_abramov(a, run_abramov(a));
    for (const char* f : {"continuity.csv", "abramov.csv", "svg/continuity.svg", "svg/return_times.svg"})
      outputs[run].push_back(read_text(dir / f));
  }
  std::filesystem::remove_all(dir);
  o.expect(outputs[0] == outputs[1], "outputs differ between runs");
  std::size_t bytes = 0;
  for (const auto& s : outputs[0]) bytes += s.size();
  o.note("2 CSV + 2 SVG files, " + std::to_string(bytes) + " bytes identical");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 metric correctness", metric_correctness},
      {"2 shift example", shift_example},
      {"3 entropy estimator", entropy_estimator},
      {"4 affinity on mixtures", affinity},
      {"5 kac lemma", kac},
      {"6 abramov formula", abramov},
      {"7 continuity", continuity},
      {"8 finitary isomorphism", isomorphism},
      {"9 reproducibility", reproducibility},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
