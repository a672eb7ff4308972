#include "resist/argmax.hpp"
#include "resist/fdcheck.hpp"
#include "resist/harness.hpp"
#include "resist/hardfn.hpp"
#include "resist/hyperbolic.hpp"
#include "resist/jsonio.hpp"
#include "resist/oracle.hpp"
#include "resist/scalar_fns.hpp"
#include "resist/spd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

namespace resist {

namespace {

using Rng = std::mt19937_64;

Eigen::VectorXd gaussian(Rng &rng, int d) {
  std::normal_distribution<double> N(0, 1);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i)
    v[i] = N(rng);
  return v;
}

Eigen::VectorXd unit(Rng &rng, int d) {
  Eigen::VectorXd v = gaussian(rng, d);
  while (v.norm() < 1e-9)
    v = gaussian(rng, d);
  return v.normalized();
}

double uniform(Rng &rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

HPoint random_point(const HyperbolicSpace &H, Rng &rng, double radius) {
  const HPoint o = H.origin();
  const Eigen::VectorXd v = unit(rng, H.dim()) * uniform(rng, 0, radius);
  return H.exp(o, H.from_coords(o, v));
}

HTangent random_tangent(const HyperbolicSpace &H, const HPoint &x, Rng &rng, double len) {
  return H.from_coords(x, unit(rng, H.dim()) * len);
}

// Tracks the smallest slack (bound - value, positive = satisfied).
struct Margin {
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  void add(double slack, const std::string &label) {
    if (slack < worst) {
      worst = slack;
      where = label;
    }
  }
  SuiteResult result(const std::string &name) const {
    return {name, worst >= 0, worst, where};
  }
};

SuiteResult comparison_identities(bool quick) {
  Margin m;
  Rng rng(11);
  const int triangles = quick ? 500 : 10000;
  for (int d : {2, 3}) {
    HyperbolicSpace H(d, -1.0, 40);
    for (int t = 0; t < triangles / 2; ++t) {
      const HPoint x = random_point(H, rng, 8);
      const HPoint y = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0.01, 10)));
      const HPoint z = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0.01, 10)));
      const HTangent u = H.log(x, y), v = H.log(x, z);
      const long double b = H.norm(x, u), c = H.norm(x, v), a = H.dist(y, z);
      const long double cosang = std::clamp(H.inner(x, u, v) / (b * c), -1.0L, 1.0L);
      const long double lhs = std::cosh(a);
      const long double rhs = std::cosh(b) * std::cosh(c) - std::sinh(b) * std::sinh(c) * cosang;
      m.add(1e-9 - static_cast<double>(std::fabs(lhs - rhs) / std::max(1.0L, std::fabs(lhs))), "law of cosines");
      const long double e2 = H.norm(x, H.sub(u, v));
      m.add(static_cast<double>((a * a - e2 * e2) / std::max(1.0L, a * a) + 1e-9L), "euclidean comparison");
      const HPoint back = H.exp(x, u);
      m.add(1e-9 - static_cast<double>(H.dist(back, y) / std::max(1.0L, b)), "exp/log round trip");
      const HTangent tv = H.transport(x, y, v);
      m.add(1e-10 - static_cast<double>(std::fabs(H.norm(y, tv) - c) / std::max(1.0L, c)), "transport isometry");
    }
  }
  return m.result("comparison-identities");
}

SuiteResult bump_derivatives(bool quick, bool corrupt) {
  Margin m;
  Rng rng(23);
  const int bumps = quick ? 10 : 100, samples = quick ? 50 : 1000;
  HyperbolicSpace H(2, -1.0, 40);
  for (int b = 0; b < bumps; ++b) {
    const HPoint x = random_point(H, rng, 5);
    const long double R_ball = uniform(rng, 0.1, 5), w = uniform(rng, 1, 50);
    const long double q = gradient_budget(H, R_ball, w);
    const HTangent g = random_tangent(H, x, rng, static_cast<double>(q) * uniform(rng, 0.05, 1.0));
    Bump<HyperbolicSpace> bp = bump_from_gradient(H, x, R_ball, w, g);
    if (corrupt)
      bp.amp *= 8;
    auto f = [&](const HPoint &y) { return bump_value(H, bp, y); };
    const long double gn = H.norm(x, g);
    const Eigen::VectorXd fd = fd_gradient_coords(H, f, x, bp.R);
    const Eigen::VectorXd gc = H.coords(x, g);
    m.add(1e-6 - (fd - gc).norm() / std::max(1e-300, static_cast<double>(gn)), "fd gradient at anchor");
    const long double cv = f(x), want = gradient_bump_center_value(H, gn, w);
    m.add(1e-10 - static_cast<double>(std::fabs(cv - want) / want), "center value");
    for (int s = 0; s < samples; ++s) {
      const HPoint y = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0, 1.1 * static_cast<double>(R_ball))));
      const HTangent gy = bump_grad(H, bp, y);
      m.add(static_cast<double>(1 / (4 * w) + 1e-8L - H.norm(y, gy)), "gradient norm bound");
      if (!(H.dist(x, y) < R_ball))
        m.add(0.0 - static_cast<double>(std::fabs(f(y))), "support containment");
      if (s % 10 == 0) {
        const FdDirection dd = fd_direction(H, f, y, random_tangent(H, y, rng, 1), bp.R);
        m.add(static_cast<double>(1 / (4 * w) + 1e-6L - std::fabs(dd.second)), "second difference bound");
      }
    }
  }
  return m.result("bump-derivatives");
}

SuiteResult packing(bool quick) {
  Margin m;
  for (int d : {2, 3, 4})
    for (double rk : {4.0, 8.0, 16.0, 24.0}) {
      if (quick && rk > 16)
        continue;
      const long double target = std::exp(d / 8.0L * rk);
      if (quick && target > 20000)
        continue;
      HyperbolicSpace H(d, -1.0, rk + 4);
      const HPoint o = H.origin();
      HPacking p = ball_packing(H, o, rk);
      const std::string lbl = "d=" + std::to_string(d) + " r=" + fmt17(rk);
      m.add(static_cast<double>(p.points.size()) - static_cast<double>(target), lbl + " count");
      long double mn = std::numeric_limits<long double>::infinity();
      if (p.points.size() <= 1500) {
        for (std::size_t i = 0; i < p.points.size(); ++i)
          for (std::size_t j = i + 1; j < p.points.size(); ++j)
            mn = std::min(mn, H.dist(p.points[i], p.points[j]));
      } else {
        mn = p.min_dist;
      }
      if (p.points.size() > 1)
        m.add(static_cast<double>(mn - rk / 2), lbl + " separation");
      for (const auto &z : p.points)
        m.add(static_cast<double>(0.75L * rk * (1 + 1e-12L) - H.dist(o, z)), lbl + " containment");
    }
  return m.result("packing");
}

SuiteResult geodesics_diverge(bool) {
  Margin m;
  HyperbolicSpace H(3, -1.0, 60);
  for (int s = 3; s <= 50; ++s) {
    const long double gap = geodesics_diverge_gap(H, H.origin(), s);
    m.add(static_cast<double>(gap - 2.0L * s / 3), "s=" + std::to_string(s));
  }
  return m.result("geodesics-diverge");
}

SuiteResult volume_lemma_grid(bool quick) {
  Margin m;
  Rng rng(37);
  const int inst = quick ? 10 : 50;
  for (int t = 0; t < inst; ++t) {
    const int n = 12;
    const double rr = 1.0, q = uniform(rng, 0.15, 0.6);
    ArgmaxInput in;
    in.q = q;
    in.enc_center = Eigen::VectorXd::Zero(2);
    in.enc_radius = rr + q;
    in.refine = true;
    in.samples = 256;
    for (int i = 0; i < n; ++i)
      in.centers.push_back(unit(rng, 2) * std::sqrt(uniform(rng, 0, 1)) * rr);
    const ArgmaxResult res = candidate_argmax(in);
    const double floor = n * q * q / ((rr + q) * (rr + q));
    m.add(static_cast<double>(res.members.size()) - floor, "instance " + std::to_string(t));
  }
  return m.result("volume-lemma-grid");
}

SuiteResult extension_convexity(bool quick) {
  Margin m;
  Rng rng(41);
  const double r = 8, Rcal = 2048 * r;
  HyperbolicSpace H(2, -1.0, 1.1 * Rcal);
  const HPoint o = H.origin();
  HardFunction<HyperbolicSpace> h;
  h.minimizer = H.exp(o, H.from_coords(o, Eigen::Vector2d(0.5 * r, 0)));
  h = smooth_extension(H, h, o, r, Rcal);
  auto f = [&](const HPoint &y) { return hard_value(H, h, y); };
  for (int i = 0; i < (quick ? 20 : 100); ++i) {
    const HPoint in = random_point(H, rng, r);
    const long double base = sqdist_value(H, h.minimizer, in);
    m.add(0.0 - static_cast<double>(std::fabs(f(in) - base)), "identity inside r");
  }
  const int samples = quick ? 100 : 1000;
  const nlohmann::json hj = to_json(H, h);
  for (int i = 0; i < samples; ++i) {
    const double rho = std::exp(uniform(rng, std::log(r), std::log(Rcal)));
    // precision sized for the sample radius instead of the whole domain
    const HyperbolicSpace Hl(2, -1.0, std::max(rho, r) + 4);
    const HardFunction<HyperbolicSpace> hl = hardfn_from_json(Hl, hj);
    auto fl = [&](const HPoint &y) { return hard_value(Hl, hl, y); };
    const HPoint ol = Hl.origin();
    const HPoint y = Hl.exp(ol, Hl.from_coords(ol, unit(rng, 2) * rho));
    const FdDirection dd = fd_direction(Hl, fl, y, random_tangent(Hl, y, rng, 1), 1.0L);
    m.add(static_cast<double>(dd.second - (1.0L / 6 - 1e-3L)), "second difference rho=" + fmt17(rho));
  }
  for (int i = 0; i < (quick ? 5 : 20); ++i) {
    const HPoint y = H.exp(o, H.from_coords(o, unit(rng, 2) * (Rcal * uniform(rng, 1.0001, 1.05))));
    const long double D = sqdist_value(H, o, y);
    m.add(0.0 - static_cast<double>(std::fabs(f(y) - D)), "identity outside Rcal");
  }
  return m.result("extension-convexity");
}

SuiteResult t_inequality(bool quick) {
  Margin m;
  for (long double c : {9.0L, 25.0L, 100.0L, 10000.0L}) {
    const long double v = t_inequality_check(c, quick ? 10000 : 100000);
    m.add(static_cast<double>(v - t_inequality_bound(c) + 1e-12L), "c=" + fmt17(static_cast<double>(c)));
  }
  return m.result("t-inequality");
}

SuiteResult spd_curvature(bool quick) {
  Margin m;
  Rng rng(53);
  for (int n : {3, 4, 5}) {
    SPDSpace S(n, true);
    const Eigen::MatrixXd I = S.origin();
    Eigen::VectorXd s1 = unit(rng, n - 1), s2 = unit(rng, n - 1);
    s2 = (s2 - s2.dot(s1) * s1).normalized();
    const Eigen::MatrixXd X1 = hyperbolic_submanifold_tangent(s1 / std::sqrt(2.0));
    const Eigen::MatrixXd X2 = hyperbolic_submanifold_tangent(s2 / std::sqrt(2.0));
    const long double k = S.sectional_curvature(I, X1, X2);
    m.add(1e-8 - static_cast<double>(std::fabs(k + 0.125L)), "embedded plane n=" + std::to_string(n));
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
    J(n - 1, n - 1) = -1;
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXd X = hyperbolic_submanifold_tangent(gaussian(rng, n - 1));
      const Eigen::MatrixXd G = S.exp(I, X * uniform(rng, 0, 1));
      m.add(1e-8 - (G.transpose() * J * G - J).norm(), "totally geodesic n=" + std::to_string(n));
    }
  }
  SPDSpace P3(3, false);
  const int planes = quick ? 1000 : 10000;
  for (int t = 0; t < planes; ++t) {
    Eigen::MatrixXd A = gaussian(rng, 9).reshaped(3, 3);
    const Eigen::MatrixXd P = A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd B1 = gaussian(rng, 9).reshaped(3, 3), B2 = gaussian(rng, 9).reshaped(3, 3);
    const Eigen::MatrixXd X1 = B1 + B1.transpose(), X2 = B2 + B2.transpose();
    const long double k = P3.sectional_curvature(P, X1, X2);
    m.add(static_cast<double>(std::min(k + 0.5L + 1e-9L, 1e-9L - k)), "random plane in P_3");
  }
  return m.result("spd-curvature");
}

SuiteResult oracle_consistency(bool quick) {
  Margin m;
  const double r = 64;
  HyperbolicSpace H(2, -1.0, 2 * r);
  const HPoint o = H.origin();
  HPacking pk = ball_packing(H, o, r, 64);
  const ConstantsReport C = compute_constants(ConstantsInput{"hyperbolic", 2, -1, 2, true, false, false, r, 0, 0});
  const int runs = quick ? 3 : 10, queries = quick ? 10 : 25;
  for (int run = 0; run < runs; ++run) {
    Rng rng(100 + run);
    OracleConfig<HyperbolicSpace> oc;
    oc.x_ref = o;
    oc.r = r;
    oc.Rcal = r;
    oc.w = C.w;
    oc.candidates = pk.points;
    oc.samples = 512;
    Oracle<HyperbolicSpace> orc(H, oc);
    std::vector<HPoint> asked;
    for (int k = 0; k < queries; ++k) {
      HPoint x;
      const double u = uniform(rng, 0, 1);
      if (!asked.empty() && u < 0.15)
        x = asked[static_cast<std::size_t>(rng() % asked.size())];
      else if (!asked.empty() && u < 0.35)
        x = H.exp(asked.back(), random_tangent(H, asked.back(), rng, uniform(rng, 1e-6, 0.5)));
      else
        x = random_point(H, rng, r);
      asked.push_back(x);
      const std::size_t before = orc.active().size();
      orc.answer(x);
      const auto &rec = orc.transcript().back();
      m.add(static_cast<double>(orc.active().size()) - 1, "nonempty active set");
      m.add(static_cast<double>(before) - static_cast<double>(orc.active().size()), "monotone active set");
      if (rec.tag != "repeat" && rec.tag != "concede")
        m.add(static_cast<double>(rec.tilde) - static_cast<double>(before) + 1, "at most one exclusion");
      for (int j : orc.active()) {
        const auto &fj = orc.candidate_function(j);
        for (const auto &old : orc.transcript()) {
          if (old.tag == "concede")
            continue;
          const Eval<HyperbolicSpace> e = eval(H, fj, old.x);
          m.add(1e-9 - static_cast<double>(H.norm(old.x, H.sub(e.g, old.g)) / std::max(1.0L, H.norm(old.x, old.g))),
                "consistency");
          m.add(static_cast<double>(H.dist(old.x, fj.minimizer) - r / 4), "far minimizer");
        }
      }
    }
  }
  return m.result("oracle-consistency");
}

SuiteResult replay_suite(bool quick) {
  Margin m;
  ExperimentConfig cfg;
  cfg.r = 64;
  cfg.max_queries = quick ? 10 : 30;
  cfg.samples = 512;
  const RunSummary s = run_experiment(cfg);
  m.add(s.verify.passed ? 0 : -1, "in-memory replay");
  HyperbolicSpace H(2, -1.0, 2 * cfg.r);
  const nlohmann::json hj = nlohmann::json::parse(s.hardfn_json);
  const HardFunction<HyperbolicSpace> f = hardfn_from_json(H, hj);
  std::vector<Record<HyperbolicSpace>> recs;
  std::istringstream is(s.transcript_jsonl);
  std::string line;
  while (std::getline(is, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    if (!j.contains("header"))
      recs.push_back(record_from_json(H, j));
  }
  const VerifyReport v = verify_transcript(H, recs, f, cfg.r);
  m.add(1e-8 - static_cast<double>(std::max(v.worst_grad_dev, v.worst_value_dev)), "serialized replay deviation");
  m.add(v.passed ? 0 : -1, "serialized replay");
  return m.result("replay");
}

const std::vector<std::pair<std::string, std::function<SuiteResult(const VerifyOptions &)>>> &registry() {
  static const std::vector<std::pair<std::string, std::function<SuiteResult(const VerifyOptions &)>>> r = {
      {"comparison-identities", [](const VerifyOptions &o) { return comparison_identities(o.quick); }},
      {"bump-derivatives", [](const VerifyOptions &o) { return bump_derivatives(o.quick, o.corrupt_bump_budget); }},
      {"packing", [](const VerifyOptions &o) { return packing(o.quick); }},
      {"geodesics-diverge", [](const VerifyOptions &o) { return geodesics_diverge(o.quick); }},
      {"volume-lemma-grid", [](const VerifyOptions &o) { return volume_lemma_grid(o.quick); }},
      {"extension-convexity", [](const VerifyOptions &o) { return extension_convexity(o.quick); }},
      {"t-inequality", [](const VerifyOptions &o) { return t_inequality(o.quick); }},
      {"spd-curvature", [](const VerifyOptions &o) { return spd_curvature(o.quick); }},
      {"oracle-consistency", [](const VerifyOptions &o) { return oracle_consistency(o.quick); }},
      {"replay", [](const VerifyOptions &o) { return replay_suite(o.quick); }},
  };
  return r;
}

} // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> n;
  for (const auto &[k, _] : registry())
    n.push_back(k);
  return n;
}

std::vector<SuiteResult> verify_all(const VerifyOptions &opt) {
  for (const auto &s : opt.suites) {
    const auto &reg = registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto &e) { return e.first == s; }))
      throw std::invalid_argument("verify: unknown suite " + s);
  }
  std::vector<SuiteResult> out;
  for (const auto &[name, fn] : registry()) {
    if (!opt.suites.empty() && std::find(opt.suites.begin(), opt.suites.end(), name) == opt.suites.end())
      continue;
    try {
      out.push_back(fn(opt));
    } catch (const std::exception &e) {
      out.push_back({name, false, -std::numeric_limits<double>::infinity(), std::string("error: ") + e.what()});
    }
  }
  return out;
}

nlohmann::json to_json(const std::vector<SuiteResult> &r) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &s : r)
    j.push_back({{"suite", s.name},
                 {"passed", s.passed},
                 {"worst_margin", std::isfinite(s.worst_margin) ? nlohmann::json(s.worst_margin) : nlohmann::json(nullptr)},
                 {"worst_at", s.detail}});
  return j;
}

} // namespace resist
