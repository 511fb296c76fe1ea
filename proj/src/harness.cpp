#include "symdyn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "symdyn/entropy.hpp"
#include "symdyn/io.hpp"
#include "symdyn/metrics.hpp"

namespace symdyn {

using nlohmann::json;

namespace {

// Exact f-bar is quadratic; above this length the indel certificate bound
// 1 - |cert|/n is reported instead.
constexpr std::size_t kExactFbarLimit = 1 << 16;

// Channel seeds are derived from the trial seed and the eps index.
constexpr std::uint64_t kChannelTag = 0xC4A77E11;

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double in_unit(double nats, Unit unit) { return unit == Unit::bits ? nats_to_bits(nats) : nats; }

const char* unit_name(Unit u) { return u == Unit::bits ? "bits" : "nats"; }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

MarkedSet marked_set_for(const ExperimentConfig& cfg) {
  const Alphabet a = cfg.spec.alphabet();
  return cfg.mark.empty() ? MarkedSet::nonzero(a) : MarkedSet(a, cfg.mark);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::config, std::string("config: ") + e.what());
  }
  require(j.is_object(), Errc::config, "config: expected a JSON object");

  static const std::set<std::string> known = {
      "version", "spec", "spec_file", "n", "m", "eps", "seeds", "seed", "seed_count",
      "channel", "schedule_L", "unit", "slack", "tolerance", "mark", "r_max",
      "abramov_tolerance", "outputs", "threads"};
  for (const auto& [key, _] : j.items())
    require(known.count(key) != 0, Errc::config, "config: unknown key \"" + key + "\"");

  ExperimentConfig cfg;
  try {
    require(j.value("version", 1) == 1, Errc::config, "config: unsupported version");
    if (j.contains("spec")) {
      cfg.spec = parse_spec(j.at("spec").dump());
    } else {
      require(j.contains("spec_file"), Errc::config, "config: need \"spec\" or \"spec_file\"");
      std::filesystem::path p = j.at("spec_file").get<std::string>();
      cfg.spec = load_spec(p.is_relative() ? base_dir / p : p);
    }
    cfg.n = j.value("n", cfg.n);
    cfg.m = j.value("m", cfg.m);
    cfg.eps_grid = j.value("eps", std::vector<double>{});
    if (j.contains("seeds")) {
      cfg.seeds = j.at("seeds").get<std::vector<Seed>>();
    } else {
      const Seed base = j.value("seed", Seed{1});
      const std::size_t count = j.value("seed_count", std::size_t{1});
      for (std::size_t i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
    }
    const auto channel = j.value("channel", std::string("sub"));
    require(channel == "sub" || channel == "indel", Errc::config,
            "config: channel must be \"sub\" or \"indel\"");
    cfg.channel = channel == "sub" ? ChannelKind::substitution : ChannelKind::indel;
    cfg.schedule_L = j.value("schedule_L", cfg.schedule_L);
    const auto unit = j.value("unit", std::string("nats"));
    require(unit == "nats" || unit == "bits", Errc::config, "config: unit must be nats or bits");
    cfg.unit = unit == "bits" ? Unit::bits : Unit::nats;
    cfg.slack = j.value("slack", cfg.slack);
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.mark = j.value("mark", std::vector<Symbol>{});
    cfg.r_max = j.value("r_max", cfg.r_max);
    cfg.abramov_tolerance = j.value("abramov_tolerance", cfg.abramov_tolerance);
    cfg.threads = j.value("threads", cfg.threads);
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      cfg.continuity_csv = o.value("continuity_csv", std::string());
      cfg.abramov_csv = o.value("abramov_csv", std::string());
      cfg.svg_dir = o.value("svg_dir", std::string());
    }
  } catch (const json::exception& e) {
    fail(Errc::config, std::string("config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text(path), path.parent_path());
}

void validate_config(const ExperimentConfig& cfg) {
  require(cfg.m >= 1, Errc::config, "config: m must be >= 1");
  require(cfg.n >= cfg.m + 1, Errc::config, "config: n must be at least m + 1");
  require(cfg.schedule_L >= 1, Errc::config, "config: schedule_L must be >= 1");
  require(!cfg.seeds.empty(), Errc::config, "config: no seeds");
  require(std::set<Seed>(cfg.seeds.begin(), cfg.seeds.end()).size() == cfg.seeds.size(),
          Errc::config, "config: seeds must be distinct");
  for (double e : cfg.eps_grid)
    require(e >= 0.0 && e < 1.0, Errc::config, "config: eps values must lie in [0,1)");
  require(cfg.slack >= 0.0 && cfg.tolerance >= 0.0, Errc::config,
          "config: slack and tolerance must be non-negative");
  require(cfg.r_max >= 1, Errc::config, "config: r_max must be >= 1");
  require(cfg.spec.alphabet().size() >= 2, Errc::config, "config: alphabet must have >= 2 symbols");
  for (Symbol s : cfg.mark)
    require(cfg.spec.alphabet().contains(s), Errc::config, "config: mark symbol outside alphabet");
}

bool ContinuityReport::all_hard_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.hard_pass; });
}

bool ContinuityReport::all_soft_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.soft_pass; });
}

std::vector<EpsSummary> ContinuityReport::summarize() const {
  std::vector<EpsSummary> out;
  std::vector<std::vector<double>> deltas;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.eps == r.eps; });
    if (it == out.end()) {
      out.push_back({r.eps, 0.0, 0.0, r.budget, 0});
      deltas.emplace_back();
      it = out.end() - 1;
    }
    const auto idx = static_cast<std::size_t>(it - out.begin());
    deltas[idx].push_back(r.delta_h);
    it->max_delta_h = std::max(it->max_delta_h, r.delta_h);
    it->hard_failures += r.hard_pass ? 0 : 1;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].median_delta_h = median(deltas[i]);
  return out;
}

std::size_t ContinuityReport::median_inversions() const {
  auto s = summarize();
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.eps < b.eps; });
  std::size_t inv = 0;
  for (std::size_t i = 1; i < s.size(); ++i) inv += s[i].median_delta_h < s[i - 1].median_delta_h;
  return inv;
}

ContinuityReport run_continuity(const ExperimentConfig& cfg) {
  validate_config(cfg);
  require(!cfg.eps_grid.empty(), Errc::config, "config: empty eps grid");

  const std::uint32_t l = cfg.spec.alphabet().size();
  const std::size_t ne = cfg.eps_grid.size(), ns = cfg.seeds.size();
  ContinuityReport report;
  report.alphabet_size = l;
  report.rows.resize(ne * ns);

  parallel_for(ns, cfg.threads, [&](std::size_t si) {
    const Seed seed = cfg.seeds[si];
    const Word x = generate(cfg.spec, cfg.n, cfg.schedule_L, seed);
    const double hx = estimate_entropy_rate(x, cfg.m).slope;
    for (std::size_t ei = 0; ei < ne; ++ei) {
      const double eps = cfg.eps_grid[ei];
      const Seed channel_seed = derive_seed(seed, kChannelTag, ei);
      ContinuityRow row;
      row.eps = eps;
      row.seed = seed;
      row.h_x = hx;

      Word y;
      if (cfg.channel == ChannelKind::substitution) {
        auto sub = substitute_channel(x, eps, channel_seed);
        row.distance_kind = "dbar";
        row.distance = static_cast<double>(sub.changed.size()) / static_cast<double>(cfg.n);
        y = std::move(sub.y);
      } else {
        auto ind = indel_channel(x, eps, channel_seed);
        if (cfg.n <= kExactFbarLimit) {
          row.distance_kind = "fbar";
          row.distance = edit_fn_fast(x, ind.y);
        } else {
          row.distance_kind = "fbar_upper";
          row.distance = 1.0 - static_cast<double>(ind.cert.size()) / static_cast<double>(cfg.n);
        }
        y = std::move(ind.y);
      }
      row.h_y = eps == 0.0 ? hx : estimate_entropy_rate(y, cfg.m).slope;
      row.delta_h = std::abs(row.h_x - row.h_y);
      row.budget = eps == 0.0 ? 0.0 : budget(eps, l);
      row.hard_pass = row.delta_h <= row.budget + cfg.slack;
      row.soft_pass = row.delta_h <= cfg.tolerance;
      report.rows[ei * ns + si] = std::move(row);
    }
  });
  return report;
}

double AbramovTable::median_residual() const {
  std::vector<double> r;
  for (const auto& row : rows) r.push_back(row.result.residual);
  return median(r);
}

AbramovTable run_abramov(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const MarkedSet e = marked_set_for(cfg);
  AbramovOptions opts;
  opts.r_max = cfg.r_max;

  AbramovTable table;
  table.rows.resize(cfg.seeds.size());
  parallel_for(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
    const Word x = generate(cfg.spec, cfg.n, cfg.schedule_L, cfg.seeds[i]);
    table.rows[i] = {cfg.seeds[i], abramov_check(x, e, cfg.m, opts)};
    if (i == 0) table.first_census = return_time_census(induce(x, e));
  });
  return table;
}

std::string continuity_csv(const ContinuityReport& report, Unit unit) {
  std::ostringstream out;
  out << "eps,seed,distance_kind,distance,h_x,h_y,delta_h,budget,hard_pass,soft_pass,unit\n";
  for (const auto& r : report.rows) {
    out << fmt(r.eps) << ',' << r.seed << ',' << r.distance_kind << ',' << fmt(r.distance) << ','
        << fmt(in_unit(r.h_x, unit)) << ',' << fmt(in_unit(r.h_y, unit)) << ','
        << fmt(in_unit(r.delta_h, unit)) << ',' << fmt(in_unit(r.budget, unit)) << ','
        << (r.hard_pass ? 1 : 0) << ',' << (r.soft_pass ? 1 : 0) << ',' << unit_name(unit) << '\n';
  }
  return out.str();
}

std::string abramov_csv(const AbramovTable& table, Unit unit) {
  std::ostringstream out;
  out << "seed,m,m_induced,induced_length,mu_e,h_base,h_induced,residual,overflow_mass,alpha,"
         "max_return,flagged,unit\n";
  for (const auto& row : table.rows) {
    const auto& r = row.result;
    out << row.seed << ',' << r.m << ',' << r.m_induced << ',' << r.induced_length << ','
        << fmt(r.muE_hat) << ',' << fmt(in_unit(r.h_base, unit)) << ','
        << fmt(in_unit(r.h_induced, unit)) << ',' << fmt(in_unit(r.residual, unit)) << ','
        << fmt(r.overflow_mass) << ',' << fmt(r.alpha_hat) << ',' << r.max_return << ','
        << (r.flagged ? 1 : 0) << ',' << unit_name(unit) << '\n';
  }
  return out.str();
}

ContinuityReport parse_continuity_csv(const std::string& csv, Unit* unit_out) {
  std::istringstream in(csv);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) &&
              line.rfind("eps,seed,distance_kind,distance,h_x,h_y,delta_h,budget", 0) == 0,
          Errc::io, "continuity csv: unexpected header");
  ContinuityReport report;
  Unit unit = Unit::nats;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    require(f.size() == 11, Errc::io, "continuity csv: expected 11 columns");
    try {
      ContinuityRow r;
      r.eps = std::stod(f[0]);
      r.seed = std::stoull(f[1]);
      r.distance_kind = f[2];
      r.distance = std::stod(f[3]);
      r.h_x = std::stod(f[4]);
      r.h_y = std::stod(f[5]);
      r.delta_h = std::stod(f[6]);
      r.budget = std::stod(f[7]);
      r.hard_pass = f[8] == "1";
      r.soft_pass = f[9] == "1";
      unit = f[10] == "bits" ? Unit::bits : Unit::nats;
      report.rows.push_back(std::move(r));
    } catch (const std::exception&) {
      fail(Errc::io, "continuity csv: bad row \"" + line + "\"");
    }
  }
  if (unit_out) *unit_out = unit;
  return report;
}

void emit_continuity(const ExperimentConfig& cfg, const ContinuityReport& report) {
  if (!cfg.continuity_csv.empty()) write_text(cfg.continuity_csv, continuity_csv(report, cfg.unit));
  if (!cfg.svg_dir.empty()) {
    std::filesystem::create_directories(cfg.svg_dir);
    write_text(cfg.svg_dir / "continuity.svg", continuity_svg(report));
  }
}

void emit_abramov(const ExperimentConfig& cfg, const AbramovTable& table) {
  if (!cfg.abramov_csv.empty()) write_text(cfg.abramov_csv, abramov_csv(table, cfg.unit));
  if (!cfg.svg_dir.empty()) {
    std::filesystem::create_directories(cfg.svg_dir);
    write_text(cfg.svg_dir / "return_times.svg", return_time_svg(table.first_census));
  }
}

}  // namespace symdyn
