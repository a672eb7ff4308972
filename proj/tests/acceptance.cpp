#include "resist/argmax.hpp"
#include "resist/constants.hpp"
#include "resist/fdcheck.hpp"
#include "resist/hardfn.hpp"
#include "resist/harness.hpp"
#include "resist/hyperbolic.hpp"
#include "resist/jsonio.hpp"
#include "resist/optim.hpp"
#include "resist/scalar_fns.hpp"
#include "resist/spd.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace resist;
using namespace testutil;

namespace {

// Collects the first failing check of a criterion.
struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string &what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string num(long double v) { return fmt17(static_cast<double>(v)); }

// 1. constants by direct evaluation
Check constants() {
  Check c;
  auto hyp = [](double r, bool full, double Rcal, int d = 2, double K = -1) {
    return compute_constants(ConstantsInput{"hyperbolic", d, K, 2, true, full, false, r, 0, Rcal});
  };
  for (double K : {-1.0, -0.25, -4.0})
    for (int d : {2, 3, 5})
      for (double r : {64.0, 100.0, 500.0}) {
        const double sk = std::sqrt(-K);
        const ConstantsReport g = hyp(r, false, r, d, K);
        c.expect(g.kappa_gradient == 4 * r * sk + 3, "kappa gradient-only r=" + num(r));
        c.expect(g.kappa_full == 12 * r * sk + 9, "kappa full r=" + num(r));
        c.expect(g.kappa_spd == 6 * r * std::sqrt(2.0) + 9, "kappa spd r=" + num(r));
        c.expect(g.c_tilde == d * sk / 8, "c_tilde d=" + std::to_string(d));
        c.expect(g.r_tilde == 4 / sk, "r_tilde K=" + num(K));
      }
  for (int n : {3, 4, 7}) {
    const ConstantsReport s = compute_constants(ConstantsInput{"spd", 0, 0, n, true, false, false, 20, 0, 0});
    c.expect(s.c_tilde == (n - 1) / (16 * std::sqrt(2.0)), "spd c_tilde n=" + std::to_string(n));
    c.expect(s.r_tilde == 8 * std::sqrt(2.0), "spd r_tilde n=" + std::to_string(n));
  }
  const ConstantsReport s2 = compute_constants(ConstantsInput{"spd", 0, 0, 2, false, false, false, 20, 0, 0});
  c.expect(s2.c_tilde == 1 / (4 * std::sqrt(2.0)) && s2.r_tilde == 4 * std::sqrt(2.0), "spd n=2 constants");
  const ConstantsReport t = hyp(1e4, false, 1e4);
  c.expect(t.T == 25, "T example = " + std::to_string(t.T));
  return c;
}

// 2. gradient bumps
Check bumps() {
  Check c;
  HyperbolicSpace H(2, -1.0, 40);
  Rng rng(2024);
  for (int b = 0; b < 100; ++b) {
    const HPoint x = random_point(H, rng, 5);
    const long double R_ball = uniform(rng, 0.1, 5), w = uniform(rng, 1, 50);
    const HTangent g =
        random_tangent(H, x, rng, static_cast<double>(gradient_budget(H, R_ball, w)) * uniform(rng, 0.05, 1.0));
    const Bump<HyperbolicSpace> bp = bump_from_gradient(H, x, R_ball, w, g);
    auto f = [&](const HPoint &y) { return bump_value(H, bp, y); };
    const long double gn = H.norm(x, g);
    const Eigen::VectorXd fd = fd_gradient_coords(H, f, x, bp.R);
    c.expect((fd - H.coords(x, g)).norm() <= 1e-6 * static_cast<double>(gn), "fd gradient at anchor, bump " + std::to_string(b));
    const long double want = 0.375L * gn * g_norm_inv(w * gn, 1);
    c.expect(std::fabs(f(x) - want) <= 1e-10L * want, "center value, bump " + std::to_string(b));
    for (int s = 0; s < 1000; ++s) {
      const HPoint y = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0, 1.2 * static_cast<double>(R_ball))));
      const BumpEval<HyperbolicSpace> e = bump_eval(H, bp, y);
      c.expect(H.norm(y, e.g) <= 1 / (4 * w) + 1e-8L, "gradient norm bound, bump " + std::to_string(b));
      if (!(H.dist(x, y) < R_ball))
        c.expect(e.f == 0 && H.norm(y, e.g) == 0, "support containment, bump " + std::to_string(b));
      if (s % 10 == 0) {
        const FdDirection dd = fd_direction(H, f, y, random_tangent(H, y, rng, 1), bp.R);
        c.expect(std::fabs(dd.second) <= 1 / (4 * w) + 1e-6L, "second difference bound, bump " + std::to_string(b));
      }
    }
  }
  return c;
}

// Separation of points on the sphere of radius s about the origin: pairs
// whose direction chord is below h are measured; all others are at least
// 2 asinh(sinh(s) h / 2) apart.
long double packing_min_dist(const HyperbolicSpace &H, const std::vector<HPoint> &pts, long double s, long double half,
                             bool &ok) {
  const HPoint o = H.origin();
  const int d = H.dim();
  const long double h = 2 * std::sinh(half / 2) / std::sinh(s) * 1.01L;
  std::vector<Eigen::VectorXd> dirs;
  for (const auto &z : pts)
    dirs.push_back(H.coords(o, H.log(o, z)).normalized());
  std::map<std::vector<long>, std::vector<int>> grid;
  auto key = [&](const Eigen::VectorXd &u) {
    std::vector<long> k(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
      k[a] = static_cast<long>(std::floor(u[a] / static_cast<double>(h)));
    return k;
  };
  for (std::size_t i = 0; i < dirs.size(); ++i)
    grid[key(dirs[i])].push_back(static_cast<int>(i));
  long double mn = 2 * std::asinh(std::sinh(s) * h / 2);
  std::vector<long> off(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto k0 = key(dirs[i]);
    std::vector<int> idx(static_cast<std::size_t>(d), -1);
    while (true) {
      std::vector<long> k = k0;
      for (int a = 0; a < d; ++a)
        k[a] += idx[a];
      auto it = grid.find(k);
      if (it != grid.end())
        for (int j : it->second)
          if (static_cast<std::size_t>(j) > i && (dirs[i] - dirs[j]).norm() < static_cast<double>(h))
            mn = std::min(mn, H.dist(pts[i], pts[static_cast<std::size_t>(j)]));
      int a = 0;
      while (a < d && idx[a] == 1)
        idx[a++] = -1;
      if (a == d)
        break;
      ++idx[a];
    }
  }
  ok = true;
  return mn;
}

// 3. hyperbolic geometry
Check geometry() {
  Check c;
  Rng rng(7);
  for (int d : {2, 3}) {
    HyperbolicSpace H(d, -1.0, 40);
    for (int t = 0; t < 5000; ++t) {
      const HPoint x = random_point(H, rng, 8);
      const HPoint y = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0.01, 10)));
      const HPoint z = H.exp(x, random_tangent(H, x, rng, uniform(rng, 0.01, 10)));
      const HTangent u = H.log(x, y), v = H.log(x, z);
      const long double b = H.norm(x, u), cc = H.norm(x, v), a = H.dist(y, z);
      const long double cs = std::clamp(H.inner(x, u, v) / (b * cc), -1.0L, 1.0L);
      const long double lhs = std::cosh(a), rhs = std::cosh(b) * std::cosh(cc) - std::sinh(b) * std::sinh(cc) * cs;
      c.expect(std::fabs(lhs - rhs) <= 1e-9L * std::fabs(lhs), "law of cosines");
      c.expect(H.dist(H.exp(x, u), y) <= 1e-9L * std::max(1.0L, b), "exp/log round trip");
      const HTangent tv = H.transport(x, y, v);
      c.expect(std::fabs(H.norm(y, tv) - cc) <= 1e-9L * std::max(1.0L, cc), "transport isometry");
      const HTangent back = H.transport(y, x, tv);
      c.expect(H.norm(x, H.sub(back, v)) <= 1e-9L * std::max(1.0L, cc), "transport round trip");
    }
  }
  {
    HyperbolicSpace H(2, -1.0, 60);
    for (int s = 3; s <= 50; ++s) {
      const long double gap = geodesics_diverge_gap(H, H.origin(), s);
      const long double th = std::exp(1 - 2.0L * s / 3);
      // isosceles law of cosines in its cancellation-free form
      const long double want = 2 * std::asinh(std::sinh(static_cast<long double>(s)) * std::sin(th / 2));
      c.expect(std::fabs(gap - want) <= 1e-9L * want, "gap vs law of cosines s=" + std::to_string(s));
      c.expect(gap >= 2.0L * s / 3, "gap >= 2s/3 at s=" + std::to_string(s));
    }
  }
  for (int d : {2, 3, 4})
    for (double rk : {4.0, 8.0, 16.0, 24.0}) {
      HyperbolicSpace H(d, -1.0, rk + 4);
      const HPoint o = H.origin();
      const HPacking p = ball_packing(H, o, rk);
      const std::string lbl = " d=" + std::to_string(d) + " r=" + num(rk);
      c.expect(static_cast<long double>(p.points.size()) >= std::exp(d / 8.0L * rk), "packing count" + lbl);
      long double s = 0;
      for (const auto &z : p.points) {
        const long double dz = H.dist(o, z);
        c.expect(dz <= 0.75L * rk * (1 + 1e-12L), "packing containment" + lbl);
        s = std::max(s, dz);
      }
      if (p.points.size() > 1) {
        for (const auto &z : p.points)
          c.expect(std::fabs(H.dist(o, z) - s) <= 1e-9L, "packing on one sphere" + lbl);
        bool ok = false;
        const long double mn = packing_min_dist(H, p.points, s, rk / 2, ok);
        c.expect(ok && mn >= rk / 2 - 2e-9L, "packing separation" + lbl + " min " + num(mn));
      }
    }
  return c;
}

// 4. SPD curvature
Check spd() {
  Check c;
  Rng rng(11);
  for (int n : {3, 4, 5, 8}) {
    SPDSpace S(n, true);
    const Eigen::VectorXd s1 = unit(rng, n - 1);
    const Eigen::VectorXd s2 = (unit(rng, n - 1) - s1.dot(unit(rng, n - 1)) * s1);
    Eigen::VectorXd t2 = s2 - s2.dot(s1) * s1;
    t2.normalize();
    const Eigen::MatrixXd X1 = hyperbolic_submanifold_tangent(s1 / std::sqrt(2.0));
    const Eigen::MatrixXd X2 = hyperbolic_submanifold_tangent(t2 / std::sqrt(2.0));
    c.expect(std::fabs(S.curvature_4tensor(S.origin(), X1, X2, X2, X1) + 0.125L) <= 1e-8L,
             "embedded plane Rm n=" + std::to_string(n));
    c.expect(std::fabs(S.sectional_curvature(S.origin(), X1, X2) + 0.125L) <= 1e-8L,
             "embedded plane K n=" + std::to_string(n));
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
    J(n - 1, n - 1) = -1;
    for (int t = 0; t < 50; ++t) {
      const Eigen::MatrixXd X = hyperbolic_submanifold_tangent(gaussian(rng, n - 1));
      const Eigen::MatrixXd G = S.exp(S.origin(), X * uniform(rng, 0, 1));
      c.expect((G.transpose() * J * G - J).norm() <= 1e-8, "totally geodesic n=" + std::to_string(n));
    }
  }
  SPDSpace P3(3, false);
  for (int t = 0; t < 10000; ++t) {
    Eigen::MatrixXd A = gaussian(rng, 9).reshaped(3, 3);
    const Eigen::MatrixXd P = A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd B1 = gaussian(rng, 9).reshaped(3, 3), B2 = gaussian(rng, 9).reshaped(3, 3);
    const long double k = P3.sectional_curvature(P, B1 + B1.transpose(), B2 + B2.transpose());
    c.expect(k >= -0.5L - 1e-9L && k <= 1e-9L, "random plane in P_3: " + num(k));
  }
  return c;
}

// 5. adversarial oracle runs
std::string oracle_run(Check &c, int run, bool checks) {
  const double r = 64;
  HyperbolicSpace H(2, -1.0, 2 * r);
  const HPoint o = H.origin();
  const ConstantsReport C = compute_constants(ConstantsInput{"hyperbolic", 2, -1, 2, true, false, false, r, 0, 0});
  OracleConfig<HyperbolicSpace> oc;
  oc.x_ref = o;
  oc.r = r;
  oc.Rcal = r;
  oc.w = std::max(1.0, C.w);
  oc.samples = 512;
  oc.seed = static_cast<std::uint64_t>(run);
  oc.candidates = ball_packing(H, o, r, 48).points;
  Oracle<HyperbolicSpace> orc(H, oc);
  Rng rng(500 + run), probe(900 + run);
  std::vector<HPoint> asked;
  const std::string tag = "run " + std::to_string(run);
  for (int k = 0; k < 20; ++k) {
    HPoint x;
    const double u = uniform(rng, 0, 1);
    if (!asked.empty() && u < 0.15)
      x = asked[static_cast<std::size_t>(rng() % asked.size())];
    else if (!asked.empty() && u < 0.35)
      x = H.exp(asked.back(), random_tangent(H, asked.back(), rng, std::pow(10.0, uniform(rng, -8, 0))));
    else if (u < 0.45)
      x = oc.candidates[rng() % oc.candidates.size()];
    else
      x = random_point(H, rng, r);
    asked.push_back(x);
    const std::vector<int> before = orc.active();
    orc.answer(x);
    if (!checks)
      continue;
    const auto &rec = orc.transcript().back();
    c.expect(!orc.active().empty(), "empty active set, " + tag);
    c.expect(!rec.enclosure_enlarged, "enclosure enlarged under the paper profile, " + tag);
    for (int j : orc.active())
      c.expect(std::find(before.begin(), before.end(), j) != before.end(), "active set grew, " + tag);
    if (rec.tag == "case1" || rec.tag == "case2")
      c.expect(rec.tilde >= static_cast<int>(before.size()) - 1, "more than one exclusion, " + tag);
    const int k_in = orc.inner_count();
    for (int j : orc.active()) {
      const auto &fj = orc.candidate_function(j);
      for (const auto &old : orc.transcript()) {
        const Eval<HyperbolicSpace> e = eval(H, fj, old.x);
        c.expect(H.norm(old.x, H.sub(e.g, old.g)) <= 1e-9L * std::max(1.0L, H.norm(old.x, old.g)),
                 "consistency, " + tag);
        if (old.tag != "concede")
          c.expect(H.dist(old.x, fj.minimizer) >= r / 4, "far minimizer, " + tag);
      }
      for (int t = 0; t < 3; ++t) {
        const HPoint y = k % 2 ? random_point(H, probe, r)
                               : H.exp(rec.x, random_tangent(H, rec.x, probe, uniform(probe, 0, static_cast<double>(rec.R_ball))));
        const HTangent gH = H.sub(hard_grad(H, fj, y), sqdist_grad(H, fj.minimizer, y));
        c.expect(H.norm(y, gH) <= k_in / (4 * oc.w) + 1e-8L, "gradient of H bound, " + tag);
      }
    }
  }
  const HardFunction<HyperbolicSpace> f = orc.finalize();
  std::string jl;
  for (std::size_t i = 0; i < orc.transcript().size(); ++i)
    jl += dump17(to_json(H, orc.transcript()[i], i)) + "\n";
  const std::string fj = dump17(to_json(H, f));
  if (checks) {
    const VerifyReport v0 = verify_transcript(H, orc.transcript(), f, r);
    c.expect(v0.passed, "replay, " + tag);
    std::vector<Record<HyperbolicSpace>> recs;
    std::istringstream is(jl);
    std::string line;
    while (std::getline(is, line))
      recs.push_back(record_from_json(H, nlohmann::json::parse(line)));
    const VerifyReport v = verify_transcript(H, recs, hardfn_from_json(H, nlohmann::json::parse(fj)), r);
    c.expect(v.passed && v.worst_grad_dev <= 1e-8L && v.worst_value_dev <= 1e-8L, "serialized replay, " + tag);
  }
  return jl + fj;
}

Check oracle() {
  Check c;
  std::string first;
  for (int run = 0; run < 20; ++run) {
    const std::string out = oracle_run(c, run, true);
    if (run == 0)
      first = out;
  }
  c.expect(oracle_run(c, 0, false) == first, "bitwise determinism");
  return c;
}

// 6. volume lemma under grid refinement
Check volume() {
  Check c;
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const int n = 12;
    const double rr = uniform(rng, 0.5, 2);
    ArgmaxInput in;
    in.q = uniform(rng, 0.1, 0.6) * rr;
    const double enc = rr + in.q;
    for (int i = 0; i < n; ++i)
      in.centers.push_back(unit(rng, 2) * std::sqrt(uniform(rng, 0, 1)) * rr);
    in.enc_center = Eigen::VectorXd::Zero(2);
    in.enc_radius = enc;
    in.refine = true;
    in.samples = 256;
    const ArgmaxResult res = candidate_argmax(in);
    c.expect(static_cast<double>(res.members.size()) >= n * in.q * in.q / (enc * enc),
             "instance " + std::to_string(t));
    for (int j : res.members)
      c.expect((in.centers[j] - res.point).norm() <= in.q, "membership honest, instance " + std::to_string(t));
  }
  return c;
}

// 7. smooth extension and the t-inequality
Check extension() {
  Check c;
  const double r = 8, Rcal = 2048 * r;
  Rng rng(41);
  HyperbolicSpace H(2, -1.0, 1.1 * Rcal);
  const HPoint o = H.origin();
  HardFunction<HyperbolicSpace> base;
  base.minimizer = H.exp(o, H.from_coords(o, Eigen::Vector2d(0.5 * r, 0)));
  for (int i = 0; i < 4; ++i) {
    const HPoint x = H.exp(o, H.from_coords(o, unit(rng, 2) * uniform(rng, 1, i < 2 ? 0.9 * r : 40 * r)));
    auto [lo, hi] = combined_interval(H, 0.8L, 10.0L);
    base.bumps.push_back(combined_bump(H, x, 0.8L, 10.0L, (lo + hi) / 2,
                                       random_tangent(H, x, rng, static_cast<double>(gradient_budget(H, 0.8L, 10.0L)) * 0.9), i));
  }
  const HardFunction<HyperbolicSpace> ext = smooth_extension(H, base, o, r, Rcal);
  for (int i = 0; i < 100; ++i) {
    const HPoint x = random_point(H, rng, r);
    const Eval<HyperbolicSpace> a = eval(H, ext, x), b = eval(H, base, x);
    c.expect(a.f == b.f && H.norm(x, H.sub(a.g, b.g)) == 0, "identity inside r");
  }
  for (int i = 0; i < 20; ++i) {
    const HPoint x = H.exp(o, H.from_coords(o, unit(rng, 2) * (Rcal * uniform(rng, 1.0001, 1.05))));
    c.expect(hard_value(H, ext, x) == sqdist_value(H, o, x), "identity outside Rcal");
    c.expect(H.norm(x, H.sub(hard_grad(H, ext, x), sqdist_grad(H, o, x))) == 0, "gradient identity outside Rcal");
  }
  const nlohmann::json j = to_json(H, ext);
  for (int i = 0; i < 1000; ++i) {
    const double rho = std::exp(uniform(rng, std::log(r), std::log(Rcal)));
    const HyperbolicSpace Hl(2, -1.0, std::max(rho, 40 * r) + 4);
    const HardFunction<HyperbolicSpace> el = hardfn_from_json(Hl, j);
    auto f = [&](const HPoint &y) { return hard_value(Hl, el, y); };
    const HPoint ol = Hl.origin();
    const HPoint x = Hl.exp(ol, Hl.from_coords(ol, unit(rng, 2) * rho));
    const FdDirection fd = fd_direction(Hl, f, x, random_tangent(Hl, x, rng, 1), 1.0L);
    c.expect(fd.second >= 1.0L / 6 - 1e-3L, "second difference at rho=" + num(rho) + ": " + num(fd.second));
  }
  for (long double cc : {9.0L, 25.0L, 100.0L, 10000.0L}) {
    // independent grid minimum over (0, 1/2)
    long double mn = INFINITY;
    for (int i = 0; i < 100000; ++i) {
      const long double tau = 0.5L * (i + 0.5L) / 100000;
      const long double e1 = std::exp(-1 / (1 - tau)), e0 = std::exp(-1 / tau);
      const long double t = e1 / (e1 + e0);
      const long double dt = -(e1 * e0 * (1 / (tau * tau) + 1 / ((1 - tau) * (1 - tau)))) / ((e1 + e0) * (e1 + e0));
      mn = std::min(mn, 1 - t - std::fabs(dt) / cc);
    }
    const long double bound = -2 * std::exp(-std::sqrt(cc / 2));
    c.expect(mn >= bound - 1e-12L, "t-inequality c=" + num(cc));
    c.expect(std::fabs(t_inequality_check(cc) - mn) <= 1e-9L, "library grid minimum c=" + num(cc));
  }
  return c;
}

// 8. end-to-end resistance
Check end_to_end(std::string &note) {
  Check c;
  for (const char *alg : {"projected_rgd", "tangent_nag"}) {
    ExperimentConfig cfg;
    cfg.r = 500;
    cfg.algorithm = alg;
    cfg.max_queries = 60;
    const RunSummary s = run_experiment(cfg);
    c.expect(s.constants.T >= 1, "T_computed positive");
    c.expect(cfg.max_queries >= s.constants.T, "query budget covers T");
    c.expect(!s.first_hit || *s.first_hit >= s.constants.T, std::string(alg) + " entered B(z*, r/4) before T");
    c.expect(s.verify.passed, std::string(alg) + " transcript does not verify");
    note += std::string(alg) + " T=" + std::to_string(s.constants.T) + " first_hit=" +
            (s.first_hit ? std::to_string(*s.first_hit) : "none") + "; ";
  }
  ExperimentConfig tmpl;
  tmpl.profile = Profile::Empirical;
  tmpl.algorithm = "rgd";
  tmpl.max_queries = 1500;
  const auto rows = sweep(tmpl, {100, 200, 300, 400, 500, 600}, 1);
  int prev = -1;
  note += "sweep first_hit:";
  for (const auto &row : rows) {
    // no hit within the budget is censored at the budget
    const int h = row.first_hit < 0 ? tmpl.max_queries : row.first_hit;
    note += " " + (row.first_hit < 0 ? std::string(">=") + std::to_string(h) : std::to_string(h));
    c.expect(row.verified, "sweep point r=" + num(row.r) + " does not verify");
    c.expect(h >= prev, "first hit decreases at r=" + num(row.r));
    prev = h;
  }
  return c;
}

// 9. condition number of the squared distance on a ball
Check condition() {
  Check c;
  for (int i = 0; i < 100; ++i) {
    const double rs = 1 + 599.0 * i / 99;
    HyperbolicSpace H(2, -1.0, rs + 2);
    const HPoint z = H.origin(), x = axis_point(H, rs);
    auto f = [&](const HPoint &y) { return sqdist_value(H, z, y); };
    const Eigen::VectorXd rc = H.coords(x, H.log(x, z)).normalized();
    const long double mu = fd_direction(H, f, x, H.from_coords(x, rc), 1.0L).second;
    const long double L = fd_direction(H, f, x, H.from_coords(x, Eigen::Vector2d(-rc[1], rc[0])), 1.0L).second;
    c.expect(L / mu >= (rs - 1) / 8, "kappa below (r-1)/8 at r=" + num(rs));
    c.expect(std::fabs(L - rs / std::tanh(rs)) <= 1e-4 * rs, "tangential curvature at r=" + num(rs));
  }
  return c;
}

} // namespace

int main() {
  struct Item {
    int id;
    const char *name;
    double limit;
    std::function<Check(std::string &)> run;
  };
  const std::vector<Item> items = {
      {1, "constants", 1, [](std::string &) { return constants(); }},
      {2, "bump suite", 60, [](std::string &) { return bumps(); }},
      {3, "geometry suite", 60, [](std::string &) { return geometry(); }},
      {4, "spd suite", 60, [](std::string &) { return spd(); }},
      {5, "oracle suite", 120, [](std::string &) { return oracle(); }},
      {6, "volume lemma", 30, [](std::string &) { return volume(); }},
      {7, "extension suite", 60, [](std::string &) { return extension(); }},
      {8, "end-to-end", 600, [](std::string &n) { return end_to_end(n); }},
      {9, "condition number", 5, [](std::string &) { return condition(); }},
  };
  int failed = 0;
  for (const auto &it : items) {
    std::string note;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c = it.run(note);
    } catch (const std::exception &e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.ok && secs > it.limit) {
      c.ok = false;
      c.detail = "time limit exceeded";
    }
    failed += !c.ok;
    std::printf("criterion %d %s: %s (%.2fs, limit %.0fs)%s%s%s%s\n", it.id, it.name, c.ok ? "PASS" : "FAIL", secs,
                it.limit, c.detail.empty() ? "" : " ", c.detail.c_str(), note.empty() ? "" : " ", note.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
