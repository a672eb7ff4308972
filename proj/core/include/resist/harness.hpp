#pragma once

#include "resist/constants.hpp"
#include "resist/oracle.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resist {

struct ExperimentConfig {
  std::string manifold = "hyperbolic"; // hyperbolic | spd | flat
  int d = 2;
  double K = -1;
  int n = 3;
  bool det_one = true;
  double r = 0;
  double kappa = 0;
  double Rcal = 0;
  Mode mode = Mode::Gradient;
  Domain domain = Domain::Bounded;
  Profile profile = Profile::Paper;
  // projected_rgd | rgd | tangent_nag | repeat
  std::string algorithm = "projected_rgd";
  double step = 0; // rgd step; 0 selects 1/L
  int repeats = 10;
  int max_queries = 100;
  int max_candidates = 64;
  int samples = 4096;
  std::uint64_t seed = 0;
  bool refine = false;
  double stop_radius = 0; // 0 selects r/4
  std::string out_dir;
  bool force = false;

  // key=value lines, '#' starts a comment
  static ExperimentConfig parse(const std::string &text);
  static ExperimentConfig load(const std::string &path);
  void set(const std::string &key, const std::string &value);
  ConstantsInput constants_input() const;
  nlohmann::json to_json() const;
};

struct RunSummary {
  ConstantsReport constants;
  int queries = 0;
  std::optional<int> first_hit;
  int horizon = 0; // first_hit, or the number of queries when no hit
  std::vector<int> active_sizes;
  int min_active = 0;
  bool conceded = false;
  VerifyReport verify;
  bool certified = true;
  long double certified_min_second = 0;
  bool resisted = true; // first_hit >= T (paper profile)
  bool passed = false;
  nlohmann::json report;
  std::string transcript_jsonl;
  std::string hardfn_json;
};

RunSummary run_experiment(const ExperimentConfig &cfg);
// Writes transcript.jsonl, hardfn.json and report.json into cfg.out_dir.
void write_run_files(const ExperimentConfig &cfg, const RunSummary &s);

struct SweepRow {
  double kappa = 0;
  double r = 0;
  long T = 0;
  int first_hit = -1; // -1: no hit within max_queries
  int horizon = 0;
  int min_active = 0;
  bool verified = false;
};

std::vector<SweepRow> sweep(const ExperimentConfig &tmpl, const std::vector<double> &rs, int jobs);
std::string sweep_csv(const std::vector<SweepRow> &rows);
std::vector<SweepRow> parse_sweep_csv(const std::string &csv);

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst_margin = 0;
  std::string detail;
};

struct VerifyOptions {
  std::vector<std::string> suites; // empty = all
  bool corrupt_bump_budget = false;
  bool quick = false;
};

std::vector<std::string> suite_names();
std::vector<SuiteResult> verify_all(const VerifyOptions &opt);
nlohmann::json to_json(const std::vector<SuiteResult> &r);

struct ReplayResult {
  VerifyReport report;
  std::size_t records = 0;
};

ReplayResult replay_files(const std::string &transcript_path, const std::string &hardfn_path);

} // namespace resist
