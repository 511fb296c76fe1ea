#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "symdyn/io.hpp"
#include "symdyn/process.hpp"
#include "symdyn/rng.hpp"

using namespace symdyn;

TEST_SUITE("core") {

TEST_CASE("philox known answer") {
  // Random123 reference vector: counter 0, key 0.
  Philox4x32 g(0, 0);
  const auto b = g.block(0);
  CHECK(b[0] == 0x6627e8d5u);
  CHECK(b[1] == 0xe169c58du);
  CHECK(b[2] == 0xbc57ac4cu);
  CHECK(b[3] == 0x9b00dbd8u);
  CHECK(std::string(Philox4x32::kName) == "philox4x32-10/v1");
}

TEST_CASE("philox streams are reproducible and distinct") {
  Philox4x32 a(7, 1), b(7, 1), c(7, 2);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);

  Philox4x32 u(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}

TEST_CASE("word basics") {
  const Word w = Word::from_digits("0120", 3);
  CHECK(w.size() == 4);
  CHECK(w.to_digits() == "0120");
  CHECK(w.prefix(2).to_digits() == "01");
  CHECK(w.slice(1, 3).to_digits() == "12");
  CHECK_THROWS_AS(Word::from_digits("013", 3), Error);
  CHECK_THROWS_AS(Alphabet(0), Error);
  CHECK(Alphabet(2).bits_per_symbol() == 1);
  CHECK(Alphabet(5).bits_per_symbol() == 3);
  CHECK(Word().empty());
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ProcessSpec::iid({0.5, 0.4}), Error);
  CHECK_THROWS_AS(ProcessSpec::iid({1.2, -0.2}), Error);
  CHECK_THROWS_AS(ProcessSpec::markov({{0.5, 0.5}, {0.3, 0.6}}), Error);
  CHECK_THROWS_AS(ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(ProcessSpec::periodic({}), Error);
  CHECK_THROWS_AS(ProcessSpec::mixture({0.5, 0.6}, {ProcessSpec::iid({1.0}), ProcessSpec::iid({1.0})}),
                  Error);
  // Components over smaller alphabets embed into the largest one.
  const auto mixed = ProcessSpec::mixture({0.5, 0.5}, {ProcessSpec::iid({1.0, 0.0}), ProcessSpec::iid({0.5, 0.3, 0.2})});
  CHECK(mixed.alphabet().size() == 3);
  CHECK(quasi_generic_path(mixed, 500, 2, 1).alphabet().size() == 3);
  CHECK_THROWS_AS(ProcessSpec::mixture({}, {}), Error);
  CHECK_THROWS_AS(ProcessSpec::mixture({1.0}, {}), Error);
  CHECK_NOTHROW(ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}}, {2.0 / 3.0, 1.0 / 3.0}));
}

TEST_CASE("sample_path examples") {
  CHECK(sample_path(ProcessSpec::periodic({0, 1}), 6, 99).to_digits() == "010101");
  CHECK(sample_path(ProcessSpec::iid({1.0}), 4, 5).to_digits() == "0000");
  const Word w = sample_path(ProcessSpec::iid({0.5, 0.5}), 100000, 42);
  CHECK(w.size() == 100000);
  CHECK(std::abs(oracle::frequency(w, 0) - 0.5) <= 0.01);
  CHECK(sample_path(ProcessSpec::iid({0.5, 0.5}), 0, 1).empty());
}

TEST_CASE("sample_path is seed-deterministic") {
  const auto spec = ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}});
  CHECK(sample_path(spec, 5000, 11) == sample_path(spec, 5000, 11));
  CHECK(sample_path(spec, 5000, 11) != sample_path(spec, 5000, 12));
  // Prefix stability: a shorter request is a prefix of a longer one.
  CHECK(sample_path(spec, 1000, 11) == sample_path(spec, 5000, 11).prefix(1000));
}

TEST_CASE("markov path frequencies follow the stationary vector") {
  const auto spec = ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}});
  const Word w = sample_path(spec, 200000, 3);
  CHECK(std::abs(oracle::frequency(w, 0) - 2.0 / 3.0) <= 0.02);
  const auto c = oracle::block_counts(w, 2);
  const double p01 = static_cast<double>(c.at("0,1,")) / static_cast<double>(w.size() - 1);
  CHECK(std::abs(p01 - 2.0 / 3.0 * 0.1) <= 0.005);
}

TEST_CASE("nontrivial mixtures are refused by sample_path") {
  const auto mix = ProcessSpec::mixture({0.5, 0.5}, {ProcessSpec::periodic({0}, 2), ProcessSpec::periodic({1}, 2)});
  CHECK(mix.is_nontrivial_mixture());
  CHECK_THROWS_AS(sample_path(mix, 10, 1), Error);
}

TEST_CASE("quasi-generic examples") {
  const auto det = ProcessSpec::mixture({0.5, 0.5}, {ProcessSpec::periodic({0}, 2), ProcessSpec::periodic({1}, 2)});
  const Word d = quasi_generic_path(det, 100000, 4, 1);
  CHECK(std::abs(oracle::frequency(d, 0) - 0.5) <= 0.01);
  // Exactly balanced at round boundaries.
  const std::size_t b = quasi_generic_round_boundary(*det.as<MixtureSpec>(), 4, 50);
  CHECK(std::abs(oracle::frequency(d.prefix(b), 0) - 0.5) < 1e-12);

  const auto mix = ProcessSpec::mixture({0.5, 0.5}, {ProcessSpec::iid({0.1, 0.9}), ProcessSpec::iid({0.9, 0.1})});
  const Word w = quasi_generic_path(mix, 1000000, 1, 8);
  CHECK(std::abs(oracle::frequency(w, 0) - 0.5) <= 0.01);
  const auto c = oracle::block_counts(w, 2);
  const double p00 = static_cast<double>(c.at("0,0,")) / static_cast<double>(w.size() - 1);
  CHECK(std::abs(p00 - (0.5 * 0.01 + 0.5 * 0.81)) <= 0.01);

  // A single-component mixture behaves like its component.
  const auto single = ProcessSpec::mixture({1.0}, {ProcessSpec::iid({0.3, 0.7})});
  CHECK_FALSE(single.is_nontrivial_mixture());
  const Word s = generate(single, 100000, 1, 4);
  CHECK(std::abs(oracle::frequency(s, 0) - 0.3) <= 0.01);
}

TEST_CASE("analytic entropy") {
  CHECK(analytic_entropy(ProcessSpec::iid({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const auto mk = ProcessSpec::markov({{0.9, 0.1}, {0.2, 0.8}});
  const auto pi = mk.as<MarkovSpec>()->stationary;
  CHECK(pi[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const double h = oracle::markov_entropy({{0.9, 0.1}, {0.2, 0.8}}, {2.0 / 3.0, 1.0 / 3.0});
  CHECK(analytic_entropy(mk) == doctest::Approx(h).epsilon(1e-12));
  CHECK(h == doctest::Approx(0.38352).epsilon(1e-4));
  CHECK(analytic_entropy(ProcessSpec::periodic({0, 1, 1})) == 0.0);

  // Affine over components: h(B(0.1)), not the log 2 of the averaged marginal.
  const auto mix = ProcessSpec::mixture({0.5, 0.5}, {ProcessSpec::iid({0.1, 0.9}), ProcessSpec::iid({0.9, 0.1})});
  const double hb = oracle::xlogx(0.1) + oracle::xlogx(0.9);
  CHECK(analytic_entropy(mix) == doctest::Approx(hb).epsilon(1e-12));
  CHECK(hb == doctest::Approx(0.32508).epsilon(1e-4));
  const auto uneven = ProcessSpec::mixture({0.25, 0.75}, {ProcessSpec::iid({0.5, 0.5}), ProcessSpec::periodic({0}, 2)});
  CHECK(analytic_entropy(uneven) == doctest::Approx(0.25 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("spec json round trip") {
  const auto spec = parse_spec(R"({"kind":"mixture","weights":[0.5,0.5],"components":[
      {"kind":"iid","probabilities":[0.1,0.9]},
      {"kind":"markov","transition":[[0.9,0.1],[0.2,0.8]]}]})");
  CHECK(spec.kind() == "mixture");
  CHECK(parse_spec(dump_spec(spec)) == spec);
  CHECK(parse_spec(R"({"kind":"periodic","period":"0110"})").alphabet().size() == 2);
  CHECK(parse_spec(R"({"kind":"periodic","period":[0,1],"alphabet":4})").alphabet().size() == 4);
  CHECK_THROWS_AS(parse_spec(R"({"kind":"poisson"})"), Error);
  CHECK_THROWS_AS(parse_spec("not json"), Error);
  CHECK_THROWS_AS(parse_spec(R"({"kind":"iid","probabilities":[0.3,0.3]})"), Error);
}

TEST_CASE("word files") {
  const auto dir = std::filesystem::temp_directory_path() / "symdyn_core_io";
  std::filesystem::create_directories(dir);
  const Word w = sample_path(ProcessSpec::iid({0.2, 0.3, 0.5}), 777, 2);
  write_word(w, dir / "w.raw", WordFormat::raw);
  write_word(w, dir / "w.rle", WordFormat::rle);
  CHECK(read_word(dir / "w.raw", 3) == w);
  CHECK(read_word(dir / "w.rle") == w);
  CHECK(decode_rle(encode_rle(w)) == w);
  CHECK_THROWS_AS(decode_rle("#symdyn-rle v1 alphabet=2 length=3\n0*2\n"), Error);
  CHECK_THROWS_AS(read_word(dir / "missing.raw"), Error);

  MatchCertificate cert{{0, 2, 5}, {1, 2, 4}};
  write_certificate(cert, dir / "c.txt");
  CHECK(read_certificate(dir / "c.txt") == cert);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
