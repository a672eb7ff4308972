#pragma once

#include "resist/argmax.hpp"
#include "resist/hardfn.hpp"
#include "resist/hyperbolic.hpp"
#include "resist/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace resist {

enum class Mode { Gradient, Value };
enum class Domain { Bounded, Unbounded };
enum class Profile { Paper, Empirical };

inline const char *to_string(Mode m) { return m == Mode::Gradient ? "gradient" : "value"; }
inline const char *to_string(Domain d) { return d == Domain::Bounded ? "bounded" : "unbounded"; }
inline const char *to_string(Profile p) { return p == Profile::Paper ? "paper" : "empirical"; }

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

template <Manifold M> struct OracleConfig {
  typename M::Point x_ref;
  long double r = 0;
  long double Rcal = 0;
  long double w = 1;
  Mode mode = Mode::Gradient;
  Domain domain = Domain::Bounded;
  Profile profile = Profile::Paper;
  std::vector<typename M::Point> candidates;
  int samples = 4096;
  std::uint64_t seed = 0;
  bool refine = false;
};

template <Manifold M> struct Answer {
  std::optional<long double> f;
  typename M::Tangent g;
};

template <Manifold M> struct Record {
  typename M::Point x;
  std::optional<long double> f;
  typename M::Tangent g;
  long double R_ball = 0;
  int tilde = 0;
  int active_before = 0;
  int active_after = 0;
  // repeat, case1, case2, outside, concede
  std::string tag;
  long double floor = 0;
  int inner_index = -1;
  bool enclosure_enlarged = false;
  std::string source;
};

// Resisting oracle: keeps every still-consistent candidate function alive
// and answers each query with a gradient (and value) shared by as many of
// them as possible.
template <Manifold M> class Oracle {
public:
  using Point = typename M::Point;
  using Tangent = typename M::Tangent;

  Oracle(const M &m, OracleConfig<M> cfg) : m_(m), cfg_(std::move(cfg)) {
    const long double sk = m_.sqrt_neg_k();
    if (cfg_.candidates.empty())
      throw ConfigError("oracle: no candidates");
    if (!(cfg_.r * sk >= 8))
      throw ConfigError("oracle: requires r sqrt(-K) >= 8");
    if (!(cfg_.w >= 1))
      throw ConfigError("oracle: requires w >= 1");
    if (cfg_.domain == Domain::Bounded && !(cfg_.Rcal >= cfg_.r))
      throw ConfigError("oracle: bounded domain requires Rcal >= r");
    if (cfg_.domain == Domain::Unbounded) {
      if (cfg_.mode != Mode::Value)
        throw ConfigError("oracle: the unbounded wrapper answers with function values; use value mode");
      check_extension(m_, cfg_.r, cfg_.Rcal);
    }
    const long double quarter3 = 0.75L * cfg_.r;
    for (const auto &z : cfg_.candidates)
      if (!(m_.dist(cfg_.x_ref, z) <= quarter3 * (1 + 1e-12L)))
        throw ConfigError("oracle: candidate outside B(x_ref, 3r/4)");
    const std::size_t n = cfg_.candidates.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!(m_.dist(cfg_.candidates[i], cfg_.candidates[j]) >= cfg_.r / 2))
          throw ConfigError("oracle: candidates closer than r/2");
    for (std::size_t j = 0; j < n; ++j) {
      HardFunction<M> h;
      h.minimizer = cfg_.candidates[j];
      funcs_.push_back(std::move(h));
      active_.push_back(static_cast<int>(j));
    }
  }

  Answer<M> answer(const Point &x) {
    if (finalized_)
      throw StateError("oracle: already finalized");
    for (const auto &rec : records_)
      if (m_.same_point(rec.x, x)) {
        Record<M> r = rec;
        r.tag = "repeat";
        r.active_before = r.active_after = static_cast<int>(active_.size());
        r.tilde = static_cast<int>(active_.size());
        r.floor = 0;
        records_.push_back(r);
        return {r.f, r.g};
      }
    const long double dref = m_.dist(x, cfg_.x_ref);
    if (cfg_.domain == Domain::Bounded && dref > cfg_.Rcal * (1 + 1e-9L))
      throw DomainError("oracle: query outside B(x_ref, Rcal)");
    if (cfg_.domain == Domain::Unbounded && dref > cfg_.Rcal) {
      Record<M> r;
      r.x = x;
      r.f = dref * dref / 2;
      r.g = m_.scale(m_.log(x, cfg_.x_ref), -1.0L);
      r.tag = "outside";
      r.active_before = r.active_after = r.tilde = static_cast<int>(active_.size());
      records_.push_back(r);
      return {r.f, r.g};
    }
    Record<M> r = answer_inner(x);
    if (cfg_.domain == Domain::Unbounded) {
      Extension<M> e{cfg_.x_ref, cfg_.r, cfg_.Rcal};
      Eval<M> ex = extend_answer(m_, e, x, Eval<M>{*r.f, r.g}, dref);
      r.f = ex.f;
      r.g = ex.g;
    }
    records_.push_back(r);
    return {r.f, r.g};
  }

  HardFunction<M> finalize(std::optional<int> j = std::nullopt) {
    if (finalized_)
      throw StateError("oracle: already finalized");
    int pick = j ? *j : active_.front();
    if (std::find(active_.begin(), active_.end(), pick) == active_.end())
      throw StateError("oracle: finalize index is not active");
    if (cfg_.profile == Profile::Empirical)
      certify(pick);
    finalized_ = true;
    chosen_ = pick;
    HardFunction<M> f = funcs_[static_cast<std::size_t>(pick)];
    if (cfg_.domain == Domain::Unbounded)
      f = smooth_extension(m_, std::move(f), cfg_.x_ref, cfg_.r, cfg_.Rcal);
    return f;
  }

  const M &manifold() const { return m_; }
  const OracleConfig<M> &config() const { return cfg_; }
  const std::vector<Record<M>> &transcript() const { return records_; }
  const std::vector<int> &active() const { return active_; }
  const HardFunction<M> &candidate_function(int j) const { return funcs_.at(static_cast<std::size_t>(j)); }
  int inner_count() const { return static_cast<int>(inner_.size()); }
  bool finalized() const { return finalized_; }
  int chosen() const { return chosen_; }
  // Smallest sampled lower bound 1 + D^2 H on the chosen function's second
  // differences near its bumps (empirical profile), and whether it cleared 1/2.
  long double certified_min_second() const { return cert_min_; }
  bool certified() const { return cert_ok_; }

private:
  struct Inner {
    Point x;
    long double R_ball;
    Tangent g;
  };

  Record<M> answer_inner(const Point &x) {
    const long double sk = m_.sqrt_neg_k();
    const int k = static_cast<int>(inner_.size());
    const int d = m_.dim();
    Record<M> rec;
    rec.x = x;
    rec.inner_index = k;
    rec.active_before = static_cast<int>(active_.size());

    std::vector<char> near(static_cast<std::size_t>(k), 0);
    int ell = -1;
    long double dl = std::numeric_limits<long double>::infinity();
    for (int m = 0; m < k; ++m) {
      const long double dm = m_.dist(x, inner_[m].x);
      near[m] = dm < inner_[m].R_ball;
      if (dm < dl) {
        dl = dm;
        ell = m;
      }
    }
    const long double R_ball = k == 0 ? cfg_.r / 8 : std::min(dl / 4, cfg_.r / 8);
    rec.R_ball = R_ball;

    std::vector<int> tilde;
    for (int j : active_)
      if (m_.dist(x, funcs_[j].minimizer) >= cfg_.r / 4)
        tilde.push_back(j);
    rec.tilde = static_cast<int>(tilde.size());

    if (tilde.empty()) {
      // only possible with a single survivor: answer truthfully, no bump
      Eval<M> e = eval_base(m_, funcs_[active_.front()], x, &near, true);
      rec.g = e.g;
      if (cfg_.mode == Mode::Value)
        rec.f = e.f;
      rec.tag = "concede";
      rec.active_after = static_cast<int>(active_.size());
      inner_.push_back({x, R_ball, rec.g});
      return rec;
    }

    std::vector<Eval<M>> ev;
    ev.reserve(tilde.size());
    for (int j : tilde)
      ev.push_back(eval_base(m_, funcs_[j], x, &near, true));

    const long double w = cfg_.w;
    const long double q = gradient_budget(m_, R_ball, w);
    const bool case1 = k == 0 || sk * dl > 4;
    Tangent center = case1 ? m_.scale(m_.log(x, cfg_.x_ref), -1.0L) : m_.transport(inner_[ell].x, x, inner_[ell].g);
    long double radius = case1 ? 2 * cfg_.r : (3 * cfg_.Rcal * sk + 2) * dl;
    rec.tag = case1 ? "case1" : "case2";
    long double need = 0;
    for (const auto &e : ev)
      need = std::max(need, m_.norm(x, m_.sub(e.g, center)) + q);
    if (need > radius * (1 + 1e-12L)) {
      if (cfg_.profile == Profile::Paper)
        throw InvariantError("oracle: feasible ball escapes the enclosing ball (" + rec.tag + ")");
      radius = need;
      rec.enclosure_enlarged = true;
    }

    ArgmaxInput in;
    in.q = static_cast<double>(q);
    in.enc_center = Eigen::VectorXd::Zero(d);
    in.enc_radius = static_cast<double>(radius);
    in.samples = cfg_.samples;
    in.seed = cfg_.seed;
    in.refine = cfg_.refine;
    for (const auto &e : ev)
      in.centers.push_back(m_.coords(x, m_.sub(e.g, center)));
    std::pair<long double, long double> iv{0, 0};
    if (cfg_.mode == Mode::Value) {
      iv = combined_interval(m_, R_ball, w);
      for (const auto &e : ev)
        in.intervals.emplace_back(e.f + iv.first, e.f + iv.second);
    }
    ArgmaxResult res = candidate_argmax(in);
    rec.source = res.source;

    Tangent g = m_.add(center, m_.from_coords(x, res.point));
    long double f = res.value;
    auto admissible = [&](std::size_t i, const Tangent &gg, long double ff) {
      if (!(m_.norm(x, m_.sub(gg, ev[i].g)) <= q))
        return false;
      if (cfg_.mode == Mode::Value) {
        const long double df = ff - ev[i].f;
        if (!(df >= iv.first && df <= iv.second))
          return false;
      }
      return true;
    };
    std::vector<std::size_t> members;
    for (int i : res.members)
      if (admissible(static_cast<std::size_t>(i), g, f))
        members.push_back(static_cast<std::size_t>(i));
    if (members.empty()) {
      // chart rounding lost every member: fall back to an exact center
      const std::size_t i0 = res.members.empty() ? 0 : static_cast<std::size_t>(res.members.front());
      g = ev[i0].g;
      f = ev[i0].f + (iv.first + iv.second) / 2;
      for (std::size_t i = 0; i < ev.size(); ++i)
        if (admissible(i, g, f))
          members.push_back(i);
      rec.source = "center-fallback";
    }

    std::vector<int> next;
    for (std::size_t i : members) {
      const int j = tilde[i];
      Tangent gb = m_.sub(g, ev[i].g);
      if (cfg_.mode == Mode::Value)
        funcs_[j].bumps.push_back(combined_bump(m_, x, R_ball, w, f - ev[i].f, gb, k));
      else
        funcs_[j].bumps.push_back(bump_from_gradient(m_, x, R_ball, w, gb, k));
      next.push_back(j);
    }
    active_ = std::move(next);

    rec.g = g;
    if (cfg_.mode == Mode::Value)
      rec.f = f;
    rec.active_after = static_cast<int>(active_.size());
    const long double base = 2000 * w * (3 * cfg_.Rcal * sk + 2);
    if (cfg_.mode == Mode::Value)
      rec.floor = 12000 * w * (rec.active_before - 1) / std::pow(base, d + 2);
    else
      rec.floor = (rec.active_before - 1) / std::pow(base, d);
    inner_.push_back({x, R_ball, g});
    return rec;
  }

  // Second differences of the chosen function at sample points inside the
  // supports of its bumps must stay >= 1/2.
  void certify(int j) {
    const HardFunction<M> &h = funcs_[static_cast<std::size_t>(j)];
    const int d = m_.dim();
    cert_min_ = std::numeric_limits<long double>::infinity();
    std::vector<const Bump<M> *> live;
    for (const auto &b : h.bumps)
      if (b.has_grad || b.fhat != 0)
        live.push_back(&b);
    if (live.empty()) {
      cert_ok_ = true;
      return;
    }
    const std::size_t budget = 256;
    const std::size_t per = std::max<std::size_t>(1, budget / live.size());
    // the squared distance contributes a Hessian >= 1 on a Hadamard manifold,
    // so only the bump sum H needs sampling: certify 1 + D^2 H >= 1/2
    auto f = [&](const Point &y) {
      long double s = 0;
      for (const Bump<M> *b : live)
        s += bump_value(m_, *b, y);
      return s;
    };
    std::uint64_t idx = 1;
    std::size_t used = 0;
    for (const Bump<M> *b : live) {
      for (std::size_t s = 0; s < per && used < budget; ++s, ++used, ++idx) {
        Eigen::VectorXd off = 2.0 * halton_point(idx, d) - Eigen::VectorXd::Ones(d);
        Eigen::VectorXd dir = 2.0 * halton_point(idx + 7919, d) - Eigen::VectorXd::Ones(d);
        if (dir.norm() < 1e-6)
          dir = Eigen::VectorXd::Unit(d, 0);
        dir.normalize();
        const Point &c = b->has_grad ? b->p : b->anchor;
        const long double rad = b->has_grad ? b->R : b->R_ball;
        Point y = m_.exp(c, m_.from_coords(c, off * static_cast<double>(rad / std::sqrt(static_cast<double>(d)))));
        Tangent v = m_.from_coords(y, dir);
        const long double sd = fd_second(y, v, rad, f);
        cert_min_ = std::min(cert_min_, 1 + sd);
      }
    }
    cert_ok_ = cert_min_ >= 0.5L;
  }

  template <class F> long double fd_second(const Point &y, const Tangent &v, long double scale, F &&f) {
    long double S[3];
    long double hstep = 1e-3L * scale;
    const long double f0 = f(y);
    for (int i = 0; i < 3; ++i, hstep /= 2) {
      const long double fp = f(m_.exp(y, m_.scale(v, hstep)));
      const long double fm = f(m_.exp(y, m_.scale(v, -hstep)));
      S[i] = (fp - 2 * f0 + fm) / (hstep * hstep);
    }
    const long double r1 = (4 * S[1] - S[0]) / 3, r2 = (4 * S[2] - S[1]) / 3;
    return (16 * r2 - r1) / 15;
  }

  M m_;
  OracleConfig<M> cfg_;
  std::vector<HardFunction<M>> funcs_;
  std::vector<int> active_;
  std::vector<Record<M>> records_;
  std::vector<Inner> inner_;
  bool finalized_ = false;
  int chosen_ = -1;
  long double cert_min_ = 0;
  bool cert_ok_ = true;
};

struct VerifyReport {
  std::size_t records = 0;
  long double worst_value_dev = 0;
  long double worst_grad_dev = 0;
  long double min_far_ratio = std::numeric_limits<long double>::infinity();
  std::size_t far_violations = 0;
  std::size_t conceded = 0;
  int first_violation = -1;
  bool passed = true;
};

// Replays every record against f: value and gradient within 1e-8 relative
// and every non-conceded query at least r/4 from the minimizer.
template <Manifold M>
VerifyReport verify_transcript(const M &m, const std::vector<Record<M>> &transcript, const HardFunction<M> &f,
                               long double r) {
  VerifyReport rep;
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto &rec = transcript[i];
    ++rep.records;
    Eval<M> e = eval(m, f, rec.x);
    if (rec.f) {
      const long double dev = std::fabs(e.f - *rec.f) / std::max(1.0L, std::fabs(*rec.f));
      rep.worst_value_dev = std::max(rep.worst_value_dev, dev);
    }
    const long double gn = m.norm(rec.x, rec.g);
    const long double gdev = m.norm(rec.x, m.sub(e.g, rec.g)) / std::max(1.0L, gn);
    rep.worst_grad_dev = std::max(rep.worst_grad_dev, gdev);
    const long double ratio = m.dist(rec.x, f.minimizer) / (r / 4);
    rep.min_far_ratio = std::min(rep.min_far_ratio, ratio);
    if (rec.tag == "concede") {
      ++rep.conceded;
    } else if (!(ratio >= 1)) {
      ++rep.far_violations;
      if (rep.first_violation < 0)
        rep.first_violation = static_cast<int>(i);
    }
  }
  rep.passed = rep.worst_value_dev <= 1e-8L && rep.worst_grad_dev <= 1e-8L && rep.far_violations == 0;
  return rep;
}

} // namespace resist
