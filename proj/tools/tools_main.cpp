#include "resist/constants.hpp"
#include "resist/harness.hpp"
#include "resist/jsonio.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace resist;

namespace {

const std::vector<std::string> kConfigKeys = {
    "manifold", "d",       "K",       "n",      "det_one",    "r",           "kappa",         "Rcal",
    "mode",     "domain",  "profile", "algorithm", "step",    "repeats",     "max_queries",   "max_candidates",
    "samples",  "seed",    "refine",  "stop_radius"};

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> values;
  std::vector<std::string> sets;

  void attach(CLI::App *app) {
    app->add_option("-c,--config", file, "key=value config file");
    for (const auto &k : kConfigKeys)
      app->add_option("--" + k, values[k], "config field " + k);
    app->add_option("--set", sets, "extra key=value overrides");
  }

  ExperimentConfig build() const {
    ExperimentConfig c = file.empty() ? ExperimentConfig{} : ExperimentConfig::load(file);
    for (const auto &[k, v] : values)
      if (!v.empty())
        c.set(k, v);
    for (const auto &s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value");
      c.set(s.substr(0, eq), s.substr(eq + 1));
    }
    return c;
  }
};

std::vector<double> parse_list(const std::string &s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string cell;
  while (std::getline(is, cell, ','))
    if (!cell.empty())
      out.push_back(std::stod(cell));
  return out;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Resisting-oracle lower-bound toolkit for geodesically convex optimization"};
  app.require_subcommand(1);

  ConfigFlags cflags, rflags, sflags;

  auto *constants = app.add_subcommand("constants", "print the theorem constants for a configuration");
  cflags.attach(constants);

  auto *run = app.add_subcommand("run", "run one algorithm against the resisting oracle");
  rflags.attach(run);
  std::string run_out;
  bool run_force = false;
  run->add_option("-o,--out", run_out, "output directory for transcript.jsonl, hardfn.json, report.json");
  run->add_flag("--force", run_force, "run even when feasibility flags are set");

  auto *sw = app.add_subcommand("sweep", "run a configuration over several radii and emit CSV");
  sflags.attach(sw);
  std::string rs_list, rk_list, sweep_csv_path, sweep_out;
  int jobs = 1;
  sw->add_option("--rs", rs_list, "comma separated radii r");
  sw->add_option("--rks", rk_list, "comma separated values of r sqrt(-K)");
  sw->add_option("-j,--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  sw->add_option("--csv", sweep_csv_path, "CSV output path (default stdout)");
  sw->add_option("-o,--out", sweep_out, "directory for per-point run files");
  bool sweep_force = false;
  sw->add_flag("--force", sweep_force, "run points even when feasibility flags are set");

  auto *verify = app.add_subcommand("verify", "run the named invariant suites");
  std::vector<std::string> suites;
  bool quick = false, corrupt = false, list = false;
  std::string verify_json;
  verify->add_option("-s,--suite", suites, "suite name (repeatable; default all)");
  verify->add_flag("--quick", quick, "reduced sample counts");
  verify->add_flag("--corrupt-bump-budget", corrupt, "negative control: inflate bump amplitudes");
  verify->add_flag("--list", list, "list suite names");
  verify->add_option("--json", verify_json, "write the report as JSON");

  auto *replay = app.add_subcommand("replay", "verify a transcript against a serialized hard function");
  std::string transcript_path, hardfn_path;
  replay->add_option("transcript", transcript_path)->required();
  replay->add_option("hardfn", hardfn_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*constants) {
      const ExperimentConfig c = cflags.build();
      std::cout << to_json_string(compute_constants(c.constants_input())) << "\n";
      return 0;
    }
    if (*run) {
      ExperimentConfig c = rflags.build();
      if (!run_out.empty())
        c.out_dir = run_out;
      if (run_force)
        c.force = true;
      const RunSummary s = run_experiment(c);
      write_run_files(c, s);
      std::cout << dump17(s.report, 1) << "\n";
      return s.passed ? 0 : 1;
    }
    if (*sw) {
      ExperimentConfig c = sflags.build();
      if (!sweep_out.empty())
        c.out_dir = sweep_out;
      if (sweep_force)
        c.force = true;
      std::vector<double> rs = parse_list(rs_list);
      if (!rk_list.empty()) {
        const double sk = c.manifold == "spd" ? std::sqrt(0.5) : std::sqrt(-c.K);
        for (double v : parse_list(rk_list))
          rs.push_back(v / sk);
      }
      const auto rows = sweep(c, rs, jobs);
      const std::string csv = sweep_csv(rows);
      if (sweep_csv_path.empty()) {
        std::cout << csv;
      } else {
        std::ofstream os(sweep_csv_path);
        os << csv;
      }
      bool ok = true;
      for (const auto &r : rows)
        ok = ok && r.verified;
      return ok ? 0 : 1;
    }
    if (*verify) {
      if (list) {
        for (const auto &n : suite_names())
          std::cout << n << "\n";
        return 0;
      }
      VerifyOptions opt;
      opt.suites = suites;
      opt.quick = quick;
      opt.corrupt_bump_budget = corrupt;
      const auto res = verify_all(opt);
      bool ok = true;
      for (const auto &r : res) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  worst_margin=" << fmt17(r.worst_margin)
                  << "  at: " << r.detail << "\n";
        ok = ok && r.passed;
      }
      if (!verify_json.empty()) {
        std::ofstream os(verify_json);
        os << dump17(to_json(res), 1) << "\n";
      }
      return ok ? 0 : 1;
    }
    if (*replay) {
      const ReplayResult r = replay_files(transcript_path, hardfn_path);
      const auto &v = r.report;
      std::cout << "records " << r.records << "\nworst_value_dev " << fmt17(static_cast<double>(v.worst_value_dev))
                << "\nworst_grad_dev " << fmt17(static_cast<double>(v.worst_grad_dev)) << "\nmin_far_ratio "
                << fmt17(static_cast<double>(v.min_far_ratio)) << "\nfar_violations " << v.far_violations
                << "\nconceded " << v.conceded << "\n"
                << (v.passed ? "PASS" : "FAIL") << "\n";
      return v.passed ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
