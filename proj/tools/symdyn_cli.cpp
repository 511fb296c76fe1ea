// symdyn command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symdyn/symdyn.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCriterion = 2;

struct CliFailure {
  std::string message;
};

void check(symdyn_status st, const std::string& what) {
  if (st != SYMDYN_OK) throw CliFailure{what + ": " + symdyn_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using WordPtr = std::unique_ptr<symdyn_word, Deleter<symdyn_word, symdyn_word_free>>;
using SpecPtr = std::unique_ptr<symdyn_spec, Deleter<symdyn_spec, symdyn_spec_free>>;
using CertPtr = std::unique_ptr<symdyn_cert, Deleter<symdyn_cert, symdyn_cert_free>>;
using InducedPtr = std::unique_ptr<symdyn_induced, Deleter<symdyn_induced, symdyn_induced_free>>;
using ExperimentPtr = std::unique_ptr<symdyn_experiment, Deleter<symdyn_experiment, symdyn_experiment_free>>;
using CString = std::unique_ptr<char, Deleter<char, symdyn_string_free>>;

struct Globals {
  std::string config;
  uint64_t seed = 1;
  bool seed_given = false;
  std::string unit = "nats";
  std::string emit = "csv";
  std::string output;
};

double in_unit(double nats, const Globals& g) { return g.unit == "bits" ? nats / std::log(2.0) : nats; }

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

void write_output(const Globals& g, const std::string& text) {
  if (g.output.empty() || g.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw CliFailure{"cannot write " + g.output};
  out << text;
}

WordPtr read_word(const std::string& path, uint32_t alphabet) {
  symdyn_word* w = nullptr;
  check(symdyn_word_read(path.c_str(), alphabet, &w), "reading " + path);
  return WordPtr(w);
}

SpecPtr load_spec(const std::string& path) {
  symdyn_spec* s = nullptr;
  check(symdyn_spec_load(path.c_str(), &s), "loading spec " + path);
  return SpecPtr(s);
}

int cmd_gen(const Globals& g, const std::string& spec_path, size_t n, uint32_t schedule,
            const std::string& format) {
  auto spec = load_spec(spec_path);
  symdyn_word* w = nullptr;
  check(symdyn_generate(spec.get(), n, schedule, g.seed, &w), "generating");
  WordPtr word(w);
  if (g.output.empty()) throw CliFailure{"gen: --output is required"};
  check(symdyn_word_write(word.get(), g.output.c_str(), format == "rle" ? SYMDYN_FORMAT_RLE : SYMDYN_FORMAT_RAW),
        "writing " + g.output);
  double h = 0;
  check(symdyn_analytic_entropy(spec.get(), &h), "analytic entropy");
  std::cerr << "wrote " << n << " symbols; analytic entropy " << num(in_unit(h, g)) << ' ' << g.unit << '\n';
  return kExitPass;
}

int cmd_dist(const Globals& g, const std::string& metric, const std::vector<size_t>& checkpoints,
             const std::string& a, const std::string& b, uint32_t alphabet) {
  auto u = read_word(a, alphabet);
  auto w = read_word(b, alphabet);
  const auto which = metric == "dbar" ? SYMDYN_METRIC_DBAR : metric == "fbar" ? SYMDYN_METRIC_FBAR : SYMDYN_METRIC_BOTH;
  std::vector<size_t> cps = checkpoints;
  if (cps.empty()) cps.push_back(std::min(symdyn_word_length(u.get()), symdyn_word_length(w.get())));
  std::vector<double> d(cps.size()), f(cps.size());
  double ld = 0, lf = 0;
  check(symdyn_distance_profile(u.get(), w.get(), cps.data(), cps.size(), which, d.data(), f.data(), &ld, &lf),
        "distance profile");
  std::ostringstream out;
  out << "n,dbar_n,fbar_n\n";
  for (size_t i = 0; i < cps.size(); ++i) out << cps[i] << ',' << num(d[i]) << ',' << num(f[i]) << '\n';
  write_output(g, out.str());
  std::cerr << "limsup estimate (tail max): dbar " << num(ld) << ", fbar " << num(lf) << '\n';
  return kExitPass;
}

int cmd_entropy(const Globals& g, size_t m_max, const std::string& path, uint32_t alphabet) {
  auto w = read_word(path, alphabet);
  std::ostringstream out;
  out << "m,H_m,ratio,slope,n,flag\n";
  for (size_t m = 1; m <= m_max; ++m) {
    symdyn_entropy_estimate e{};
    check(symdyn_estimate_entropy_rate(w.get(), m, &e), "entropy estimate");
    out << e.m << ',' << num(in_unit(e.block_entropy, g)) << ',' << num(in_unit(e.ratio, g)) << ','
        << num(in_unit(e.slope, g)) << ',' << e.n << ',' << (e.undersampled ? "undersampled" : "ok") << '\n';
  }
  write_output(g, out.str());
  return kExitPass;
}

int cmd_perturb(const Globals& g, const std::string& channel, double eps, const std::string& in,
                const std::string& out_path, const std::string& cert_path, uint32_t alphabet) {
  auto x = read_word(in, alphabet);
  symdyn_word* y = nullptr;
  if (channel == "sub") {
    size_t changed = 0;
    check(symdyn_substitute(x.get(), eps, g.seed, &y, &changed), "substitution channel");
    WordPtr yp(y);
    check(symdyn_word_write(yp.get(), out_path.c_str(), SYMDYN_FORMAT_RAW), "writing " + out_path);
    if (!cert_path.empty()) {
      // Unchanged positions, paired with themselves.
      const uint32_t* xs = symdyn_word_data(x.get());
      const uint32_t* ys = symdyn_word_data(yp.get());
      std::vector<size_t> idx;
      for (size_t j = 0; j < symdyn_word_length(x.get()); ++j)
        if (xs[j] == ys[j]) idx.push_back(j);
      symdyn_cert* c = nullptr;
      check(symdyn_cert_new(idx.data(), idx.data(), idx.size(), &c), "certificate");
      CertPtr cp(c);
      check(symdyn_cert_write(cp.get(), cert_path.c_str()), "writing " + cert_path);
    }
    std::cerr << "changed " << changed << " of " << symdyn_word_length(x.get()) << " positions\n";
  } else {
    symdyn_cert* c = nullptr;
    check(symdyn_indel(x.get(), eps, g.seed, &y, &c), "indel channel");
    WordPtr yp(y);
    CertPtr cp(c);
    check(symdyn_word_write(yp.get(), out_path.c_str(), SYMDYN_FORMAT_RAW), "writing " + out_path);
    if (!cert_path.empty()) check(symdyn_cert_write(cp.get(), cert_path.c_str()), "writing " + cert_path);
    std::cerr << "certificate keeps " << symdyn_cert_size(cp.get()) << " of " << symdyn_word_length(x.get())
              << " positions\n";
  }
  return kExitPass;
}

int cmd_induce(const Globals& g, const std::vector<uint32_t>& marks, const std::string& path, uint32_t alphabet) {
  auto w = read_word(path, alphabet);
  symdyn_induced* h = nullptr;
  check(symdyn_induce(w.get(), marks.data(), marks.size(), &h), "induce");
  InducedPtr ind(h);
  double mean = 0, residual = 0;
  check(symdyn_induced_kac(ind.get(), &mean, &residual), "kac check");
  std::cerr << "returns " << symdyn_induced_returns(ind.get()) << ", mu(E) " << num(symdyn_induced_density(ind.get()))
            << ", mean return " << num(mean) << ", kac residual " << num(residual) << '\n';
  if (g.emit == "svg") {
    char* svg = nullptr;
    check(symdyn_induced_svg(ind.get(), &svg), "histogram svg");
    write_output(g, CString(svg).get());
    return kExitPass;
  }
  const size_t rows = symdyn_induced_histogram(ind.get(), nullptr, nullptr, 0);
  std::vector<size_t> times(rows);
  std::vector<uint64_t> counts(rows);
  symdyn_induced_histogram(ind.get(), times.data(), counts.data(), rows);
  const double total = static_cast<double>(symdyn_induced_returns(ind.get()));
  std::ostringstream out;
  out << "return_time,count,mass\n";
  for (size_t i = 0; i < rows; ++i)
    out << times[i] << ',' << counts[i] << ',' << num(static_cast<double>(counts[i]) / total) << '\n';
  write_output(g, out.str());
  return kExitPass;
}

ExperimentPtr experiment_from(const Globals& g, const nlohmann::json* inline_cfg) {
  symdyn_experiment* e = nullptr;
  if (inline_cfg) {
    check(symdyn_experiment_parse(inline_cfg->dump().c_str(), &e), "experiment config");
  } else {
    if (g.config.empty()) throw CliFailure{"--config is required"};
    check(symdyn_experiment_load(g.config.c_str(), &e), "loading " + g.config);
  }
  ExperimentPtr exp(e);
  const symdyn_unit unit = g.unit == "bits" ? SYMDYN_UNIT_BITS : SYMDYN_UNIT_NATS;
  check(symdyn_experiment_override(exp.get(), g.seed_given ? &g.seed : nullptr, &unit), "overrides");
  return exp;
}

int cmd_abramov(const Globals& g, const std::string& spec_path, size_t n, size_t m, size_t seeds,
                const std::vector<uint32_t>& marks, size_t r_max, uint32_t schedule) {
  ExperimentPtr exp;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw CliFailure{"cannot open " + spec_path};
    nlohmann::json cfg;
    try {
      cfg["spec"] = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CliFailure{"spec " + spec_path + ": " + e.what()};
    }
    cfg["n"] = n;
    cfg["m"] = m;
    cfg["seed"] = g.seed;
    cfg["seed_count"] = seeds;
    cfg["r_max"] = r_max;
    cfg["schedule_L"] = schedule;
    if (!marks.empty()) cfg["mark"] = marks;
    exp = experiment_from(g, &cfg);
  } else {
    exp = experiment_from(g, nullptr);
  }
  char* csv = nullptr;
  int passed = 0;
  check(symdyn_run_abramov(exp.get(), &csv, &passed), "abramov run");
  write_output(g, CString(csv).get());
  return passed ? kExitPass : kExitCriterion;
}

int cmd_continuity(const Globals& g) {
  auto exp = experiment_from(g, nullptr);
  char* csv = nullptr;
  int passed = 0;
  check(symdyn_run_continuity(exp.get(), &csv, &passed), "continuity run");
  CString text(csv);
  if (g.emit == "svg") {
    char* svg = nullptr;
    check(symdyn_plot_continuity(text.get(), &svg), "plot");
    write_output(g, CString(svg).get());
  } else {
    write_output(g, text.get());
  }
  return passed ? kExitPass : kExitCriterion;
}

int cmd_plot(const Globals& g, const std::string& report_path) {
  std::string csv;
  if (!report_path.empty()) {
    std::ifstream in(report_path, std::ios::binary);
    if (!in) throw CliFailure{"cannot open " + report_path};
    std::ostringstream ss;
    ss << in.rdbuf();
    csv = ss.str();
  } else {
    auto exp = experiment_from(g, nullptr);
    char* out = nullptr;
    check(symdyn_run_continuity(exp.get(), &out, nullptr), "continuity run");
    csv = CString(out).get();
  }
  char* svg = nullptr;
  check(symdyn_plot_continuity(csv.c_str(), &svg), "plot");
  write_output(g, CString(svg).get());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symdyn: pseudometrics, entropy-rate estimation and induced systems for symbolic sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(symdyn_version()) + " (" + symdyn_rng_name() + ")");

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--unit", g.unit, "Entropy unit")->check(CLI::IsMember({"nats", "bits"}))->capture_default_str();
  app.add_option("--emit", g.emit, "Output kind")->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();
  app.add_option("-o,--output", g.output, "Output file (default stdout)");
  app.fallthrough();

  uint32_t alphabet = 0;
  auto add_alphabet = [&](CLI::App* sub) {
    sub->add_option("--alphabet", alphabet, "Alphabet size for raw word files (default: inferred)");
  };

  auto* gen = app.add_subcommand("gen", "Generate a realization of a process spec");
  std::string spec_path;
  size_t n = 0;
  uint32_t schedule = 1;
  std::string format = "raw";
  gen->add_option("--spec", spec_path, "Process spec file")->required();
  gen->add_option("--n", n, "Length")->required();
  gen->add_option("--schedule", schedule, "Quasi-generic block growth L")->capture_default_str();
  gen->add_option("--format", format, "Word format")->check(CLI::IsMember({"raw", "rle"}))->capture_default_str();

  auto* dist = app.add_subcommand("dist", "Hamming and edit pseudodistances of two words");
  std::string metric = "both";
  std::vector<size_t> checkpoints;
  std::vector<std::string> pair;
  dist->add_option("--metric", metric)->check(CLI::IsMember({"dbar", "fbar", "both"}))->capture_default_str();
  dist->add_option("--checkpoints", checkpoints, "Prefix lengths")->delimiter(',');
  dist->add_option("words", pair, "Two word files")->required()->expected(2);
  add_alphabet(dist);

  auto* ent = app.add_subcommand("entropy", "Block-entropy estimates for m = 1..M");
  size_t m = 8;
  std::string word_path;
  ent->add_option("--m", m, "Largest block length")->required();
  ent->add_option("word", word_path, "Word file")->required();
  add_alphabet(ent);

  auto* perturb = app.add_subcommand("perturb", "Apply a substitution or indel channel");
  std::string channel = "sub";
  double eps = 0.0;
  std::string in_path, out_path, cert_path;
  perturb->add_option("--channel", channel)->check(CLI::IsMember({"sub", "indel"}))->capture_default_str();
  perturb->add_option("--eps", eps, "Channel rate")->required();
  perturb->add_option("--cert", cert_path, "Certificate output file");
  perturb->add_option("input", in_path)->required();
  perturb->add_option("output", out_path)->required();
  add_alphabet(perturb);

  auto* induce = app.add_subcommand("induce", "Return-time histogram of a word relative to marked symbols");
  std::vector<uint32_t> marks;
  induce->add_option("--mark", marks, "Marked symbols (default: every nonzero symbol)")->delimiter(',');
  induce->add_option("word", word_path)->required();
  add_alphabet(induce);

  auto* abramov = app.add_subcommand("abramov", "Per-seed Abramov residuals");
  size_t seeds = 1, r_max = 32;
  abramov->add_option("--spec", spec_path, "Process spec file (otherwise --config)");
  abramov->add_option("--n", n, "Length");
  abramov->add_option("--m", m, "Block length")->capture_default_str();
  abramov->add_option("--seeds", seeds, "Number of seeds")->capture_default_str();
  abramov->add_option("--mark", marks, "Marked symbols")->delimiter(',');
  abramov->add_option("--rmax", r_max, "Return-word truncation")->capture_default_str();
  abramov->add_option("--schedule", schedule, "Quasi-generic block growth L")->capture_default_str();

  auto* continuity = app.add_subcommand("continuity", "Entropy continuity experiment from --config");
  auto* plot = app.add_subcommand("plot", "SVG scatter of a continuity report");
  std::string report_path;
  plot->add_option("--report", report_path, "Continuity CSV (otherwise run --config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    if (*gen) return cmd_gen(g, spec_path, n, schedule, format);
    if (*dist) return cmd_dist(g, metric, checkpoints, pair[0], pair[1], alphabet);
    if (*ent) return cmd_entropy(g, m, word_path, alphabet);
    if (*perturb) return cmd_perturb(g, channel, eps, in_path, out_path, cert_path, alphabet);
    if (*induce) return cmd_induce(g, marks, word_path, alphabet);
    if (*abramov) {
      if (!spec_path.empty() && n == 0) throw CliFailure{"abramov: --n is required with --spec"};
      return cmd_abramov(g, spec_path, n, m, seeds, marks, r_max, schedule);
    }
    if (*continuity) return cmd_continuity(g);
    if (*plot) return cmd_plot(g, report_path);
  } catch (const CliFailure& f) {
    std::cerr << "symdyn: " << f.message << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
