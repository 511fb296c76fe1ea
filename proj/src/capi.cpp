#include "symdyn/symdyn.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "symdyn/channels.hpp"
#include "symdyn/entropy.hpp"
#include "symdyn/harness.hpp"
#include "symdyn/induced.hpp"
#include "symdyn/io.hpp"
#include "symdyn/metrics.hpp"
#include "symdyn/process.hpp"

struct symdyn_word {
  symdyn::Word w;
};
struct symdyn_spec {
  symdyn::ProcessSpec s;
};
struct symdyn_cert {
  symdyn::MatchCertificate c;
};
struct symdyn_induced {
  symdyn::InducedName name;
  symdyn::ReturnTimeCensus rtc;
  double density;
};
struct symdyn_experiment {
  symdyn::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

symdyn_status to_status(symdyn::Errc c) {
  using symdyn::Errc;
  switch (c) {
    case Errc::invalid_argument: return SYMDYN_E_INVALID_ARGUMENT;
    case Errc::length_mismatch: return SYMDYN_E_LENGTH_MISMATCH;
    case Errc::empty_input: return SYMDYN_E_EMPTY_INPUT;
    case Errc::malformed_certificate: return SYMDYN_E_MALFORMED_CERTIFICATE;
    case Errc::not_enough_entries: return SYMDYN_E_NOT_ENOUGH_ENTRIES;
    case Errc::structural: return SYMDYN_E_STRUCTURAL;
    case Errc::config: return SYMDYN_E_CONFIG;
    case Errc::io: return SYMDYN_E_IO;
  }
  return SYMDYN_E_INTERNAL;
}

template <class Fn>
symdyn_status wrap(Fn&& fn) {
  try {
    fn();
    return SYMDYN_OK;
  } catch (const symdyn::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SYMDYN_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SYMDYN_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  symdyn::require(p != nullptr, symdyn::Errc::invalid_argument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

symdyn::MarkedSet marks_for(const symdyn::Word& w, const uint32_t* marks, size_t k) {
  if (marks == nullptr || k == 0) return symdyn::MarkedSet::nonzero(w.alphabet());
  return symdyn::MarkedSet(w.alphabet(), std::span<const uint32_t>(marks, k));
}

}  // namespace

extern "C" {

const char* symdyn_version(void) { return "1.0.0"; }
const char* symdyn_rng_name(void) { return symdyn::Philox4x32::kName; }
const char* symdyn_last_error(void) { return g_last_error.c_str(); }
void symdyn_string_free(char* s) { std::free(s); }

symdyn_status symdyn_word_new(const uint32_t* symbols, size_t n, uint32_t alphabet, symdyn_word** out) {
  return wrap([&] {
    need(out, "out");
    if (n > 0) need(symbols, "symbols");
    std::vector<symdyn::Symbol> v(symbols, symbols + n);
    *out = new symdyn_word{symdyn::Word(symdyn::Alphabet(alphabet), std::move(v))};
  });
}

symdyn_status symdyn_word_read(const char* path, uint32_t alphabet_hint, symdyn_word** out) {
  return wrap([&] {
    need(path, "path");
    need(out, "out");
    *out = new symdyn_word{symdyn::read_word(path, alphabet_hint)};
  });
}

symdyn_status symdyn_word_write(const symdyn_word* w, const char* path, symdyn_word_format fmt) {
  return wrap([&] {
    need(w, "word");
    need(path, "path");
    symdyn::write_word(w->w, path, fmt == SYMDYN_FORMAT_RLE ? symdyn::WordFormat::rle : symdyn::WordFormat::raw);
  });
}

size_t symdyn_word_length(const symdyn_word* w) { return w ? w->w.size() : 0; }
uint32_t symdyn_word_alphabet(const symdyn_word* w) { return w ? w->w.alphabet().size() : 0; }
const uint32_t* symdyn_word_data(const symdyn_word* w) { return w ? w->w.vec().data() : nullptr; }
void symdyn_word_free(symdyn_word* w) { delete w; }

symdyn_status symdyn_spec_parse(const char* json, symdyn_spec** out) {
  return wrap([&] {
    need(json, "json");
    need(out, "out");
    *out = new symdyn_spec{symdyn::parse_spec(json)};
  });
}

symdyn_status symdyn_spec_load(const char* path, symdyn_spec** out) {
  return wrap([&] {
    need(path, "path");
    need(out, "out");
    *out = new symdyn_spec{symdyn::load_spec(path)};
  });
}

uint32_t symdyn_spec_alphabet(const symdyn_spec* s) { return s ? s->s.alphabet().size() : 0; }
int symdyn_spec_is_mixture(const symdyn_spec* s) { return s && s->s.is_nontrivial_mixture() ? 1 : 0; }

symdyn_status symdyn_analytic_entropy(const symdyn_spec* s, double* out) {
  return wrap([&] {
    need(s, "spec");
    need(out, "out");
    *out = symdyn::analytic_entropy(s->s);
  });
}

void symdyn_spec_free(symdyn_spec* s) { delete s; }

symdyn_status symdyn_sample_path(const symdyn_spec* s, size_t n, uint64_t seed, symdyn_word** out) {
  return wrap([&] {
    need(s, "spec");
    need(out, "out");
    *out = new symdyn_word{symdyn::sample_path(s->s, n, seed)};
  });
}

symdyn_status symdyn_quasi_generic_path(const symdyn_spec* s, size_t n, uint32_t schedule_L,
                                        uint64_t seed, symdyn_word** out) {
  return wrap([&] {
    need(s, "spec");
    need(out, "out");
    *out = new symdyn_word{symdyn::quasi_generic_path(s->s, n, schedule_L, seed)};
  });
}

symdyn_status symdyn_generate(const symdyn_spec* s, size_t n, uint32_t schedule_L, uint64_t seed,
                              symdyn_word** out) {
  return wrap([&] {
    need(s, "spec");
    need(out, "out");
    *out = new symdyn_word{symdyn::generate(s->s, n, schedule_L, seed)};
  });
}

symdyn_status symdyn_hamming_dn(const symdyn_word* u, const symdyn_word* w, double* out) {
  return wrap([&] {
    need(u, "u");
    need(w, "w");
    need(out, "out");
    *out = symdyn::hamming_dn(u->w, w->w);
  });
}

symdyn_status symdyn_edit_fn(const symdyn_word* u, const symdyn_word* w, double* value,
                             symdyn_cert** cert_out) {
  return wrap([&] {
    need(u, "u");
    need(w, "w");
    need(value, "value");
    auto r = symdyn::edit_fn(u->w, w->w);
    if (cert_out) *cert_out = new symdyn_cert{std::move(r.cert)};
    *value = r.value;
  });
}

symdyn_status symdyn_edit_fn_fast(const symdyn_word* u, const symdyn_word* w, double* out) {
  return wrap([&] {
    need(u, "u");
    need(w, "w");
    need(out, "out");
    *out = symdyn::edit_fn_fast(u->w, w->w);
  });
}

symdyn_status symdyn_distance_profile(const symdyn_word* u, const symdyn_word* w,
                                      const size_t* checkpoints, size_t k, symdyn_metric metric,
                                      double* dbar_out, double* fbar_out, double* limsup_dbar,
                                      double* limsup_fbar) {
  return wrap([&] {
    need(u, "u");
    need(w, "w");
    if (k > 0) need(checkpoints, "checkpoints");
    need(dbar_out, "dbar_out");
    need(fbar_out, "fbar_out");
    const auto which = metric == SYMDYN_METRIC_DBAR   ? symdyn::ProfileMetric::dbar
                       : metric == SYMDYN_METRIC_FBAR ? symdyn::ProfileMetric::fbar
                                                      : symdyn::ProfileMetric::both;
    const auto p = symdyn::distance_profile(u->w, w->w, std::span<const size_t>(checkpoints, k), which);
    for (size_t i = 0; i < k; ++i) {
      dbar_out[i] = p.checkpoints[i].dbar;
      fbar_out[i] = p.checkpoints[i].fbar;
    }
    if (limsup_dbar) *limsup_dbar = p.limsup_dbar;
    if (limsup_fbar) *limsup_fbar = p.limsup_fbar;
  });
}

symdyn_status symdyn_cert_new(const size_t* left, const size_t* right, size_t k, symdyn_cert** out) {
  return wrap([&] {
    need(out, "out");
    if (k > 0) {
      need(left, "left");
      need(right, "right");
    }
    symdyn::MatchCertificate c{{left, left + k}, {right, right + k}};
    *out = new symdyn_cert{std::move(c)};
  });
}

symdyn_status symdyn_cert_read(const char* path, symdyn_cert** out) {
  return wrap([&] {
    need(path, "path");
    need(out, "out");
    *out = new symdyn_cert{symdyn::read_certificate(path)};
  });
}

symdyn_status symdyn_cert_write(const symdyn_cert* c, const char* path) {
  return wrap([&] {
    need(c, "cert");
    need(path, "path");
    symdyn::write_certificate(c->c, path);
  });
}

size_t symdyn_cert_size(const symdyn_cert* c) { return c ? c->c.size() : 0; }
const size_t* symdyn_cert_left(const symdyn_cert* c) { return c ? c->c.left.data() : nullptr; }
const size_t* symdyn_cert_right(const symdyn_cert* c) { return c ? c->c.right.data() : nullptr; }
void symdyn_cert_free(symdyn_cert* c) { delete c; }

symdyn_status symdyn_verify_hat_f(const symdyn_word* u, const symdyn_word* w, const symdyn_cert* c,
                                  double eps, int* accepted) {
  return wrap([&] {
    need(u, "u");
    need(w, "w");
    need(c, "cert");
    need(accepted, "accepted");
    *accepted = symdyn::verify_hat_f_certificate(u->w, w->w, c->c, eps) ? 1 : 0;
  });
}

symdyn_status symdyn_shannon_h(double t, double* out) {
  return wrap([&] {
    need(out, "out");
    *out = symdyn::shannon_h(t);
  });
}

symdyn_status symdyn_estimate_entropy_rate(const symdyn_word* w, size_t m, symdyn_entropy_estimate* out) {
  return wrap([&] {
    need(w, "word");
    need(out, "out");
    const auto e = symdyn::estimate_entropy_rate(w->w, m);
    *out = {e.m, e.block_entropy, e.ratio, e.slope, e.n, e.undersampled ? 1 : 0};
  });
}

symdyn_status symdyn_conditional_entropy(const symdyn_word* w, size_t m, double* out, int* consistent) {
  return wrap([&] {
    need(w, "word");
    need(out, "out");
    symdyn::require(m >= 2, symdyn::Errc::invalid_argument, "conditional entropy needs m >= 2");
    const auto r = symdyn::conditional_entropy(symdyn::BlockCensus(w->w, m), symdyn::BlockCensus(w->w, m - 1));
    *out = r.value;
    if (consistent) *consistent = r.consistent ? 1 : 0;
  });
}

symdyn_status symdyn_max_entropy_geometric(double p, double* out) {
  return wrap([&] {
    need(out, "out");
    *out = symdyn::max_entropy_geometric(p);
  });
}

symdyn_status symdyn_substitute(const symdyn_word* x, double eps, uint64_t seed, symdyn_word** y,
                                size_t* changed) {
  return wrap([&] {
    need(x, "x");
    need(y, "y");
    auto r = symdyn::substitute_channel(x->w, eps, seed);
    if (changed) *changed = r.changed.size();
    *y = new symdyn_word{std::move(r.y)};
  });
}

symdyn_status symdyn_indel(const symdyn_word* x, double eps, uint64_t seed, symdyn_word** y,
                           symdyn_cert** cert) {
  return wrap([&] {
    need(x, "x");
    need(y, "y");
    auto r = symdyn::indel_channel(x->w, eps, seed);
    auto word = std::make_unique<symdyn_word>(symdyn_word{std::move(r.y)});
    if (cert) *cert = new symdyn_cert{std::move(r.cert)};
    *y = word.release();
  });
}

symdyn_status symdyn_budget(double eps, uint32_t alphabet, double* out) {
  return wrap([&] {
    need(out, "out");
    *out = symdyn::budget(eps, alphabet);
  });
}

symdyn_status symdyn_induce(const symdyn_word* w, const uint32_t* marks, size_t k, symdyn_induced** out) {
  return wrap([&] {
    need(w, "word");
    need(out, "out");
    const auto e = marks_for(w->w, marks, k);
    auto name = symdyn::induce(w->w, e);
    auto rtc = symdyn::return_time_census(name);
    const double density = symdyn::marked_density(w->w, e);
    *out = new symdyn_induced{std::move(name), std::move(rtc), density};
  });
}

size_t symdyn_induced_returns(const symdyn_induced* h) { return h ? h->rtc.returns : 0; }
double symdyn_induced_density(const symdyn_induced* h) { return h ? h->density : 0.0; }

size_t symdyn_induced_histogram(const symdyn_induced* h, size_t* times, uint64_t* counts, size_t capacity) {
  if (!h) return 0;
  if (times && counts) {
    size_t i = 0;
    for (const auto& [r, c] : h->rtc.counts) {
      if (i == capacity) break;
      times[i] = r;
      counts[i] = c;
      ++i;
    }
  }
  return h->rtc.counts.size();
}

symdyn_status symdyn_induced_kac(const symdyn_induced* h, double* mean_return, double* residual) {
  return wrap([&] {
    need(h, "induced");
    const auto k = symdyn::kac_check(h->rtc, h->density);
    if (mean_return) *mean_return = k.mean_return;
    if (residual) *residual = k.residual;
  });
}

symdyn_status symdyn_induced_svg(const symdyn_induced* h, char** svg) {
  return wrap([&] {
    need(h, "induced");
    need(svg, "svg");
    *svg = dup_string(symdyn::return_time_svg(h->rtc));
  });
}

void symdyn_induced_free(symdyn_induced* h) { delete h; }

symdyn_status symdyn_abramov_check(const symdyn_word* w, const uint32_t* marks, size_t k, size_t m,
                                   size_t r_max, symdyn_abramov_result* out) {
  return wrap([&] {
    need(w, "word");
    need(out, "out");
    symdyn::AbramovOptions opts;
    opts.r_max = r_max;
    const auto r = symdyn::abramov_check(w->w, marks_for(w->w, marks, k), m, opts);
    *out = {r.h_base,         r.h_induced,        r.muE_hat,       r.residual,
            r.m,              r.m_induced,        r.induced_length, r.induced_alphabet,
            r.overflow_mass,  r.alpha_hat,        r.max_return,    r.flagged ? 1 : 0};
  });
}

symdyn_status symdyn_experiment_load(const char* path, symdyn_experiment** out) {
  return wrap([&] {
    need(path, "path");
    need(out, "out");
    *out = new symdyn_experiment{symdyn::load_config(path)};
  });
}

symdyn_status symdyn_experiment_parse(const char* json, symdyn_experiment** out) {
  return wrap([&] {
    need(json, "json");
    need(out, "out");
    *out = new symdyn_experiment{symdyn::parse_config(json)};
  });
}

void symdyn_experiment_free(symdyn_experiment* e) { delete e; }

symdyn_status symdyn_experiment_override(symdyn_experiment* e, const uint64_t* seed, const symdyn_unit* unit) {
  return wrap([&] {
    need(e, "experiment");
    if (seed) {
      for (size_t i = 0; i < e->cfg.seeds.size(); ++i) e->cfg.seeds[i] = *seed + i;
    }
    if (unit) e->cfg.unit = *unit == SYMDYN_UNIT_BITS ? symdyn::Unit::bits : symdyn::Unit::nats;
    symdyn::validate_config(e->cfg);
  });
}

symdyn_status symdyn_run_continuity(const symdyn_experiment* e, char** csv, int* passed) {
  return wrap([&] {
    need(e, "experiment");
    need(csv, "csv");
    const auto report = symdyn::run_continuity(e->cfg);
    symdyn::emit_continuity(e->cfg, report);
    *csv = dup_string(symdyn::continuity_csv(report, e->cfg.unit));
    if (passed) *passed = report.all_hard_pass() ? 1 : 0;
  });
}

symdyn_status symdyn_run_abramov(const symdyn_experiment* e, char** csv, int* passed) {
  return wrap([&] {
    need(e, "experiment");
    need(csv, "csv");
    const auto table = symdyn::run_abramov(e->cfg);
    symdyn::emit_abramov(e->cfg, table);
    *csv = dup_string(symdyn::abramov_csv(table, e->cfg.unit));
    if (passed) *passed = table.median_residual() <= e->cfg.abramov_tolerance ? 1 : 0;
  });
}

symdyn_status symdyn_plot_continuity(const char* csv, char** svg) {
  return wrap([&] {
    need(csv, "csv");
    need(svg, "svg");
    *svg = dup_string(symdyn::continuity_svg(symdyn::parse_continuity_csv(csv)));
  });
}

}  // extern "C"
