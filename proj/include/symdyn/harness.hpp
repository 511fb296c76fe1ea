#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "symdyn/channels.hpp"
#include "symdyn/induced.hpp"
#include "symdyn/process.hpp"

namespace symdyn {

enum class Unit { nats, bits };

struct ExperimentConfig {
  ProcessSpec spec = ProcessSpec::iid({0.5, 0.5});
  std::size_t n = 100000;
  std::size_t m = 8;
  std::vector<double> eps_grid;
  std::vector<Seed> seeds;
  ChannelKind channel = ChannelKind::substitution;
  std::uint32_t schedule_L = 1;
  Unit unit = Unit::nats;
  double slack = 0.0;           // added to the analytic budget (hard pass)
  double tolerance = 0.1;       // empirical |dh| bound (soft pass)
  // Abramov runs.
  std::vector<Symbol> mark;     // empty: every nonzero symbol
  std::size_t r_max = 32;
  double abramov_tolerance = 0.02;
  // Outputs; empty paths are not written.
  std::filesystem::path continuity_csv;
  std::filesystem::path abramov_csv;
  std::filesystem::path svg_dir;
  std::size_t threads = 0;      // 0: hardware concurrency
};

// Validates as it parses; throws Errc::config with the offending key.
// A relative "spec_file" is resolved against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
void validate_config(const ExperimentConfig& cfg);

struct ContinuityRow {
  double eps = 0.0;
  Seed seed = 0;
  std::string distance_kind;  // dbar, fbar, fbar_upper
  double distance = 0.0;
  double h_x = 0.0;
  double h_y = 0.0;
  double delta_h = 0.0;       // |h_x - h_y|
  double budget = 0.0;
  bool hard_pass = false;     // delta_h <= budget + slack
  bool soft_pass = false;     // delta_h <= tolerance
};

struct EpsSummary {
  double eps = 0.0;
  double median_delta_h = 0.0;
  double max_delta_h = 0.0;
  double budget = 0.0;
  std::size_t hard_failures = 0;
};

struct ContinuityReport {
  std::uint32_t alphabet_size = 2;
  std::vector<ContinuityRow> rows;  // ordered by (eps index, seed index)

  bool all_hard_pass() const;
  bool all_soft_pass() const;
  std::vector<EpsSummary> summarize() const;  // one entry per distinct eps, grid order
  // Count of i with median[i+1] < median[i].
  std::size_t median_inversions() const;
};

ContinuityReport run_continuity(const ExperimentConfig& cfg);

struct AbramovRow {
  Seed seed = 0;
  AbramovResult result;
};

struct AbramovTable {
  std::vector<AbramovRow> rows;
  ReturnTimeCensus first_census;  // return times of the first seed, for plotting
  double median_residual() const;
};

AbramovTable run_abramov(const ExperimentConfig& cfg);

// Fixed schemas (v1). Values are written in the requested unit with "%.9f".
std::string continuity_csv(const ContinuityReport& report, Unit unit);
std::string abramov_csv(const AbramovTable& table, Unit unit);
ContinuityReport parse_continuity_csv(const std::string& csv, Unit* unit_out = nullptr);

// SVG output is byte-deterministic for a fixed input.
std::string continuity_svg(const ContinuityReport& report);
std::string return_time_svg(const ReturnTimeCensus& rtc, std::size_t max_bars = 40);

// Writes the configured outputs of a finished run.
void emit_continuity(const ExperimentConfig& cfg, const ContinuityReport& report);
void emit_abramov(const ExperimentConfig& cfg, const AbramovTable& table);

}  // namespace symdyn
