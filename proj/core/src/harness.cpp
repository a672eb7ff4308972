#include "resist/harness.hpp"

#include "resist/flat.hpp"
#include "resist/hyperbolic.hpp"
#include "resist/jsonio.hpp"
#include "resist/optim.hpp"
#include "resist/spd.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace resist {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string &v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on")
    return true;
  if (v == "0" || v == "false" || v == "no" || v == "off")
    return false;
  throw ConfigError("config: not a boolean: " + v);
}

double parse_double(const std::string &key, const std::string &v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception &) {
    throw ConfigError("config: " + key + " is not a number: " + v);
  }
  if (pos != v.size())
    throw ConfigError("config: " + key + " is not a number: " + v);
  return x;
}

int parse_int(const std::string &key, const std::string &v) {
  const double x = parse_double(key, v);
  if (x != std::floor(x))
    throw ConfigError("config: " + key + " must be an integer: " + v);
  return static_cast<int>(x);
}

void write_file(const std::filesystem::path &p, const std::string &content) {
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os)
      throw std::runtime_error("cannot write " + tmp);
    os << content;
  }
  std::filesystem::rename(tmp, p);
}

std::string read_file(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Asks x_0 again `repeats` times, then continues as projected RGD.
template <Manifold M> class RepeatThenRGD final : public FirstOrderAlgorithm<M> {
public:
  RepeatThenRGD(const M &m, long double L, typename M::Point x_ref, long double radius, int repeats)
      : inner_(m, L, x_ref, radius), x_ref_(std::move(x_ref)), repeats_(repeats) {}
  std::string name() const override { return "repeat"; }
  typename M::Point initial() const override { return x_ref_; }
  typename M::Point next(const std::vector<HistoryItem<M>> &h) override {
    if (static_cast<int>(h.size()) <= repeats_)
      return h.front().x;
    return inner_.next(h);
  }

private:
  ProjectedRGD<M> inner_;
  typename M::Point x_ref_;
  int repeats_;
};

template <Manifold M>
std::unique_ptr<FirstOrderAlgorithm<M>> make_algorithm(const M &m, const ExperimentConfig &cfg,
                                                       const typename M::Point &x_ref, long double r,
                                                       long double Rcal, long double sk) {
  const long double L = 2 * r * sk + 1.5L;
  const bool bounded = cfg.domain == Domain::Bounded;
  if (cfg.algorithm == "projected_rgd")
    return std::make_unique<ProjectedRGD<M>>(m, L, x_ref, bounded ? Rcal : std::numeric_limits<long double>::max());
  if (cfg.algorithm == "rgd")
    return std::make_unique<RGD<M>>(m, cfg.step > 0 ? cfg.step : 1 / L, x_ref);
  if (cfg.algorithm == "tangent_nag")
    return std::make_unique<TangentNAG<M>>(m, L, 0.5L, x_ref, bounded ? Rcal : 0);
  if (cfg.algorithm == "repeat")
    return std::make_unique<RepeatThenRGD<M>>(m, L, x_ref, bounded ? Rcal : std::numeric_limits<long double>::max(),
                                              cfg.repeats);
  throw ConfigError("config: unknown algorithm " + cfg.algorithm);
}

nlohmann::json verify_json(const VerifyReport &v) {
  return {{"records", v.records},
          {"worst_value_dev", static_cast<double>(v.worst_value_dev)},
          {"worst_grad_dev", static_cast<double>(v.worst_grad_dev)},
          {"min_far_ratio", std::isfinite(static_cast<double>(v.min_far_ratio))
                                ? nlohmann::json(static_cast<double>(v.min_far_ratio))
                                : nlohmann::json(nullptr)},
          {"far_violations", v.far_violations},
          {"conceded", v.conceded},
          {"passed", v.passed}};
}

template <Manifold M>
RunSummary run_oracle(const M &m, const typename M::Point &x_ref, std::vector<typename M::Point> cands,
                      const ExperimentConfig &cfg, const ConstantsReport &C) {
  const long double sk = m.sqrt_neg_k();
  OracleConfig<M> oc;
  oc.x_ref = x_ref;
  oc.r = C.r;
  oc.Rcal = C.Rcal;
  // below the theorem's radius threshold the paper weight drops under 1; forced
  // runs then use the smallest admissible weight
  const bool w_clamped = cfg.profile == Profile::Paper && C.w < 1;
  oc.w = cfg.profile == Profile::Paper ? std::max(1.0, C.w) : 1.0;
  oc.mode = cfg.mode;
  oc.domain = cfg.domain;
  oc.profile = cfg.profile;
  oc.candidates = std::move(cands);
  oc.samples = cfg.samples;
  oc.seed = cfg.seed;
  oc.refine = cfg.refine;
  Oracle<M> oracle(m, oc);
  auto algo = make_algorithm(m, cfg, x_ref, C.r, C.Rcal, sk);
  const long double stop = cfg.stop_radius > 0 ? cfg.stop_radius : C.r / 4;
  RunResult<M> res = run_against(*algo, oracle, cfg.max_queries, stop);

  RunSummary s;
  s.constants = C;
  s.queries = res.queries;
  s.first_hit = res.first_hit;
  s.horizon = res.first_hit ? *res.first_hit : res.queries;
  s.active_sizes = res.active_sizes;
  s.min_active = res.active_sizes.empty() ? 0 : *std::min_element(res.active_sizes.begin(), res.active_sizes.end());
  s.conceded = res.conceded;
  s.verify = res.verify;
  s.certified = oracle.certified();
  s.certified_min_second = oracle.certified_min_second();
  s.resisted = cfg.profile != Profile::Paper || !res.first_hit || *res.first_hit >= C.T;
  s.passed = s.verify.passed && s.resisted && s.certified;

  nlohmann::json header = {{"header", true},
                           {"config", cfg.to_json()},
                           {"manifold", m.descriptor()},
                           {"x_ref", m.to_json(x_ref)},
                           {"r", static_cast<double>(C.r)},
                           {"Rcal", static_cast<double>(C.Rcal)},
                           {"w", static_cast<double>(oc.w)},
                           {"candidates", oracle.config().candidates.size()}};
  std::string jl = dump17(header) + "\n";
  nlohmann::json floors = nlohmann::json::array();
  for (std::size_t k = 0; k < res.transcript.size(); ++k) {
    jl += dump17(to_json(m, res.transcript[k], k)) + "\n";
    floors.push_back(static_cast<double>(res.transcript[k].floor));
  }
  s.transcript_jsonl = std::move(jl);
  nlohmann::json hj = to_json(m, res.f);
  hj["r"] = static_cast<double>(C.r);
  hj["chosen"] = oracle.chosen();
  s.hardfn_json = dump17(hj, 1);

  nlohmann::json rep;
  rep["config"] = cfg.to_json();
  rep["constants"] = nlohmann::json::parse(to_json_string(C));
  rep["T_computed"] = C.T;
  rep["w_used"] = static_cast<double>(oc.w);
  rep["w_clamped"] = w_clamped;
  rep["queries"] = s.queries;
  rep["first_hit"] = s.first_hit ? nlohmann::json(*s.first_hit) : nlohmann::json(nullptr);
  rep["resistance_horizon_" + std::string(to_string(cfg.profile)) + "_profile"] = s.horizon;
  rep["active_set_sizes"] = s.active_sizes;
  rep["candidates"] = oracle.config().candidates.size();
  rep["floors"] = floors;
  rep["conceded"] = s.conceded;
  rep["verification"] = verify_json(s.verify);
  rep["mu_certified"] = s.certified;
  if (cfg.profile == Profile::Empirical)
    rep["mu_min_second_difference"] = static_cast<double>(s.certified_min_second);
  rep["resisted_T"] = s.resisted;
  rep["passed"] = s.passed;
  s.report = rep;
  return s;
}

RunSummary run_flat(const ExperimentConfig &cfg) {
  FlatSpace m(cfg.d);
  const double r = cfg.r > 0 ? cfg.r : 1.0;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(cfg.d);
  z[0] = 0.75 * r;
  std::unique_ptr<FirstOrderAlgorithm<FlatSpace>> algo;
  const long double L = 1;
  if (cfg.algorithm == "tangent_nag")
    algo = std::make_unique<TangentNAG<FlatSpace>>(m, L, 1.0L, m.origin());
  else if (cfg.algorithm == "rgd" || cfg.algorithm == "projected_rgd")
    algo = std::make_unique<RGD<FlatSpace>>(m, cfg.step > 0 ? cfg.step : 0.5, m.origin());
  else
    throw ConfigError("flat runs support rgd, projected_rgd and tangent_nag");
  std::vector<HistoryItem<FlatSpace>> hist;
  nlohmann::json errs = nlohmann::json::array();
  std::string jl;
  for (int k = 0; k < cfg.max_queries; ++k) {
    Eigen::VectorXd x = k == 0 ? algo->initial() : algo->next(hist);
    const double e = (x - z).norm();
    hist.push_back({x, 0.5L * e * e, x - z});
    errs.push_back(e);
    jl += dump17({{"k", k}, {"x", m.to_json(x)}, {"f", 0.5 * e * e}, {"g", m.to_json(Eigen::VectorXd(x - z))}}) + "\n";
  }
  RunSummary s;
  s.queries = cfg.max_queries;
  s.horizon = cfg.max_queries;
  const double last = errs.back().get<double>();
  s.passed = last < (r > 0 ? r : 1.0);
  s.report = {{"config", cfg.to_json()}, {"errors", errs}, {"passed", s.passed}};
  s.transcript_jsonl = jl;
  s.hardfn_json = dump17({{"manifold", m.descriptor()}, {"minimizer", m.to_json(z)}, {"bumps", nlohmann::json::array()}}, 1);
  return s;
}

} // namespace

void ExperimentConfig::set(const std::string &key, const std::string &value) {
  const std::string &v = value;
  if (key == "manifold") {
    if (v != "hyperbolic" && v != "spd" && v != "flat")
      throw ConfigError("config: unknown manifold " + v);
    manifold = v;
  } else if (key == "d") {
    d = parse_int(key, v);
  } else if (key == "K") {
    K = parse_double(key, v);
  } else if (key == "n") {
    n = parse_int(key, v);
  } else if (key == "det_one") {
    det_one = parse_bool(v);
  } else if (key == "r") {
    r = parse_double(key, v);
  } else if (key == "kappa") {
    kappa = parse_double(key, v);
  } else if (key == "Rcal" || key == "R") {
    Rcal = parse_double(key, v);
  } else if (key == "mode") {
    if (v == "gradient")
      mode = Mode::Gradient;
    else if (v == "value")
      mode = Mode::Value;
    else
      throw ConfigError("config: mode must be gradient or value");
  } else if (key == "domain" || key == "query_domain") {
    if (v == "bounded")
      domain = Domain::Bounded;
    else if (v == "unbounded")
      domain = Domain::Unbounded;
    else
      throw ConfigError("config: domain must be bounded or unbounded");
  } else if (key == "profile" || key == "constants_profile") {
    if (v == "paper")
      profile = Profile::Paper;
    else if (v == "empirical")
      profile = Profile::Empirical;
    else
      throw ConfigError("config: profile must be paper or empirical");
  } else if (key == "algorithm") {
    algorithm = v;
  } else if (key == "step") {
    step = parse_double(key, v);
  } else if (key == "repeats") {
    repeats = parse_int(key, v);
  } else if (key == "max_queries") {
    max_queries = parse_int(key, v);
  } else if (key == "max_candidates") {
    max_candidates = parse_int(key, v);
  } else if (key == "samples") {
    samples = parse_int(key, v);
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(parse_double(key, v));
  } else if (key == "refine") {
    refine = parse_bool(v);
  } else if (key == "stop_radius") {
    stop_radius = parse_double(key, v);
  } else if (key == "out" || key == "out_dir") {
    out_dir = v;
  } else if (key == "force") {
    force = parse_bool(v);
  } else {
    throw ConfigError("config: unknown key " + key);
  }
}

ExperimentConfig ExperimentConfig::parse(const std::string &text) {
  ExperimentConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string &path) { return parse(read_file(path)); }

ConstantsInput ExperimentConfig::constants_input() const {
  ConstantsInput in;
  in.manifold = manifold;
  in.d = d;
  in.K = K;
  in.n = n;
  in.det_one = det_one;
  in.full = mode == Mode::Value;
  in.unbounded = domain == Domain::Unbounded;
  in.r = r;
  in.kappa = kappa;
  in.Rcal = Rcal;
  return in;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"manifold", manifold},
          {"d", d},
          {"K", K},
          {"n", n},
          {"det_one", det_one},
          {"r", r},
          {"kappa", kappa},
          {"Rcal", Rcal},
          {"mode", to_string(mode)},
          {"domain", to_string(domain)},
          {"profile", to_string(profile)},
          {"algorithm", algorithm},
          {"step", step},
          {"repeats", repeats},
          {"max_queries", max_queries},
          {"max_candidates", max_candidates},
          {"samples", samples},
          {"seed", seed},
          {"refine", refine},
          {"stop_radius", stop_radius}};
}

RunSummary run_experiment(const ExperimentConfig &cfg) {
  if (cfg.max_queries < 1)
    throw ConfigError("config: max_queries must be >= 1");
  if (cfg.manifold == "flat")
    return run_flat(cfg);
  const ConstantsReport C = compute_constants(cfg.constants_input());
  if (!C.feasible() && !cfg.force)
    throw ConfigError("config: infeasible (" + std::string(C.overflow_regime ? "overflow regime" : "") +
                      (C.overflow_regime && !C.precondition_ok ? ", " : "") +
                      (C.precondition_ok ? "" : "r below " + fmt17(C.r_min)) + "); use force=1 to run anyway");
  const std::size_t cap = cfg.max_candidates > 0 ? static_cast<std::size_t>(cfg.max_candidates) : 0;
  if (cfg.manifold == "hyperbolic") {
    const double reach = cfg.domain == Domain::Bounded ? C.Rcal + C.r : 2 * C.Rcal + C.r;
    HyperbolicSpace H(cfg.d, cfg.K, reach);
    const HPoint x_ref = H.origin();
    HPacking pk = ball_packing(H, x_ref, C.r, cap);
    return run_oracle(H, x_ref, std::move(pk.points), cfg, C);
  }
  SPDSpace S(cfg.n, cfg.det_one);
  const Eigen::MatrixXd x_ref = S.origin();
  SPDPacking pk = spd_ball_packing(S, x_ref, C.r, cap);
  return run_oracle(S, x_ref, std::move(pk.points), cfg, C);
}

void write_run_files(const ExperimentConfig &cfg, const RunSummary &s) {
  if (cfg.out_dir.empty())
    return;
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "transcript.jsonl", s.transcript_jsonl);
  write_file(dir / "hardfn.json", s.hardfn_json + "\n");
  write_file(dir / "report.json", dump17(s.report, 1) + "\n");
}

std::vector<SweepRow> sweep(const ExperimentConfig &tmpl, const std::vector<double> &rs, int jobs) {
  if (rs.size() < 2)
    throw ConfigError("sweep: needs at least two points");
  std::vector<SweepRow> rows(rs.size());
  std::vector<std::string> errors(rs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rs.size(); i = next++) {
      ExperimentConfig c = tmpl;
      c.r = rs[i];
      c.kappa = 0;
      if (!tmpl.out_dir.empty())
        c.out_dir = (std::filesystem::path(tmpl.out_dir) / ("r_" + fmt17(rs[i]))).string();
      try {
        RunSummary s = run_experiment(c);
        write_run_files(c, s);
        SweepRow &row = rows[i];
        row.kappa = s.constants.kappa;
        row.r = s.constants.r;
        row.T = s.constants.T;
        row.first_hit = s.first_hit ? *s.first_hit : -1;
        row.horizon = s.horizon;
        row.min_active = s.min_active;
        row.verified = s.verify.passed;
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(rs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("sweep point r=" + fmt17(rs[i]) + ": " + errors[i]);
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) { return a.kappa < b.kappa; });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
  std::string out = "kappa,r,T_computed,first_hit,min_active_set,verified\n";
  for (const auto &r : rows)
    out += fmt17(r.kappa) + "," + fmt17(r.r) + "," + std::to_string(r.T) + "," +
           (r.first_hit >= 0 ? std::to_string(r.first_hit) : std::string("none")) + "," +
           std::to_string(r.min_active) + "," + (r.verified ? "true" : "false") + "\n";
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string &csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || trim(line) != "kappa,r,T_computed,first_hit,min_active_set,verified")
    throw std::invalid_argument("sweep csv: bad header");
  std::vector<SweepRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty())
      continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ','))
      f.push_back(trim(cell));
    if (f.size() != 6)
      throw std::invalid_argument("sweep csv: expected 6 columns");
    SweepRow r;
    r.kappa = std::stod(f[0]);
    r.r = std::stod(f[1]);
    r.T = std::stol(f[2]);
    r.first_hit = f[3] == "none" ? -1 : std::stoi(f[3]);
    r.min_active = std::stoi(f[4]);
    if (f[5] != "true" && f[5] != "false")
      throw std::invalid_argument("sweep csv: verified must be true or false");
    r.verified = f[5] == "true";
    rows.push_back(r);
  }
  return rows;
}

namespace {

template <Manifold M> ReplayResult replay_with(const M &m, const std::string &transcript, const nlohmann::json &hj) {
  HardFunction<M> f = hardfn_from_json(m, hj);
  std::vector<Record<M>> recs;
  std::istringstream is(transcript);
  std::string line;
  double r = hj.value("r", 0.0);
  while (std::getline(is, line)) {
    if (trim(line).empty())
      continue;
    nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("header")) {
      r = j.at("r").get<double>();
      continue;
    }
    recs.push_back(record_from_json(m, j));
  }
  if (!(r > 0))
    throw std::invalid_argument("replay: radius r missing from transcript and hard function");
  ReplayResult out;
  out.records = recs.size();
  out.report = verify_transcript(m, recs, f, r);
  return out;
}

} // namespace

ReplayResult replay_files(const std::string &transcript_path, const std::string &hardfn_path) {
  const nlohmann::json hj = nlohmann::json::parse(read_file(hardfn_path));
  const std::string transcript = read_file(transcript_path);
  const auto &desc = hj.at("manifold");
  const std::string kind = desc.at("manifold").get<std::string>();
  if (kind == "hyperbolic") {
    HyperbolicSpace H(desc.at("d").get<int>(), desc.at("K").get<double>(), desc.at("reach").get<double>());
    return replay_with(H, transcript, hj);
  }
  if (kind == "spd") {
    SPDSpace S(desc.at("n").get<int>(), desc.at("det_one").get<bool>());
    return replay_with(S, transcript, hj);
  }
  throw std::invalid_argument("replay: unsupported manifold " + kind);
}

} // namespace resist
