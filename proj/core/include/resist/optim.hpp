#pragma once

#include "resist/oracle.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace resist {

template <Manifold M> struct HistoryItem {
  typename M::Point x;
  std::optional<long double> f;
  typename M::Tangent g;
};

// Deterministic first-order method: an initial point and a map from the full
// query/answer history to the next query.
template <Manifold M> class FirstOrderAlgorithm {
public:
  virtual ~FirstOrderAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual typename M::Point initial() const = 0;
  virtual typename M::Point next(const std::vector<HistoryItem<M>> &history) = 0;
};

// x_{k+1} = Proj_D(exp(x_k, -grad f(x_k) / L)) with D = B(x_ref, radius) and
// x_0 = x_ref. Only the iteration is implemented; no rate is claimed. The
// convergence argument usually quoted for it does not cover the constrained
// case.
template <Manifold M> class ProjectedRGD final : public FirstOrderAlgorithm<M> {
public:
  ProjectedRGD(const M &m, long double L, typename M::Point x_ref, long double radius)
      : m_(m), L_(L), x_ref_(std::move(x_ref)), radius_(radius) {
    if (!(L > 0))
      throw std::invalid_argument("projected_rgd: L must be positive");
  }
  std::string name() const override { return "projected_rgd"; }
  typename M::Point initial() const override { return x_ref_; }
  typename M::Point next(const std::vector<HistoryItem<M>> &h) override {
    const auto &last = h.back();
    auto y = m_.exp(last.x, m_.scale(last.g, -1.0L / L_));
    return m_.project_ball(x_ref_, radius_, y);
  }

private:
  M m_;
  long double L_;
  typename M::Point x_ref_;
  long double radius_;
};

template <Manifold M> class RGD final : public FirstOrderAlgorithm<M> {
public:
  RGD(const M &m, long double step, typename M::Point x0) : m_(m), step_(step), x0_(std::move(x0)) {
    if (!(step > 0))
      throw std::invalid_argument("rgd: step must be positive");
  }
  std::string name() const override { return "rgd"; }
  typename M::Point initial() const override { return x0_; }
  typename M::Point next(const std::vector<HistoryItem<M>> &h) override {
    const auto &last = h.back();
    return m_.exp(last.x, m_.scale(last.g, -step_));
  }

private:
  M m_;
  long double step_;
  typename M::Point x0_;
};

// Constant-momentum Nesterov in the tangent space at x_ref: queries are
// exp(x_ref, y_k), gradients are transported back to x_ref. A positive
// `radius` clips the tangent iterates to the ball of that radius.
template <Manifold M> class TangentNAG final : public FirstOrderAlgorithm<M> {
public:
  TangentNAG(const M &m, long double L, long double mu, typename M::Point x_ref, long double radius = 0)
      : m_(m), L_(L), x_ref_(std::move(x_ref)), radius_(radius) {
    if (!(mu > 0) || !(L >= mu))
      throw std::invalid_argument("tangent_nag: requires L >= mu > 0");
    const long double sk = std::sqrt(L / mu);
    beta_ = (sk - 1) / (sk + 1);
  }
  std::string name() const override { return "tangent_nag"; }
  long double momentum() const { return beta_; }
  typename M::Point initial() const override { return x_ref_; }
  typename M::Point next(const std::vector<HistoryItem<M>> &h) override {
    if (h.size() != steps_ + 1)
      replay(h);
    advance(h.back());
    return push(ys_.back());
  }

private:
  using Vec = Eigen::VectorXd;

  void replay(const std::vector<HistoryItem<M>> &h) {
    xs_.clear();
    ys_.clear();
    steps_ = 0;
    for (std::size_t i = 0; i + 1 < h.size(); ++i)
      advance(h[i]);
  }

  void advance(const HistoryItem<M> &item) {
    const int d = m_.dim();
    if (ys_.empty()) {
      ys_.push_back(Vec::Zero(d));
      xs_.push_back(Vec::Zero(d));
    }
    const Vec g = m_.coords(x_ref_, m_.transport(item.x, x_ref_, item.g));
    Vec x_next = clip(ys_.back() - g / static_cast<double>(L_));
    Vec y_next = clip(x_next + static_cast<double>(beta_) * (x_next - xs_.back()));
    xs_.push_back(x_next);
    ys_.push_back(y_next);
    ++steps_;
  }

  Vec clip(Vec v) const {
    if (radius_ > 0) {
      const double n = v.norm();
      if (n > static_cast<double>(radius_))
        v *= static_cast<double>(radius_) / n;
    }
    return v;
  }

  typename M::Point push(const Vec &y) const { return m_.exp(x_ref_, m_.from_coords(x_ref_, y)); }

  M m_;
  long double L_;
  typename M::Point x_ref_;
  long double radius_;
  long double beta_ = 0;
  std::vector<Vec> xs_, ys_;
  std::size_t steps_ = 0;
};

template <Manifold M> struct RunResult {
  std::vector<Record<M>> transcript;
  std::vector<int> active_sizes;
  std::optional<int> first_hit;
  HardFunction<M> f;
  VerifyReport verify;
  int queries = 0;
  bool conceded = false;
};

// Drives the query loop. The run ends early once the oracle concedes, since
// every later answer is truthful.
template <Manifold M>
RunResult<M> run_against(FirstOrderAlgorithm<M> &algo, Oracle<M> &oracle, int max_queries, long double stop_radius) {
  if (max_queries < 1)
    throw std::invalid_argument("run_against: max_queries must be >= 1");
  const M &m = oracle.manifold();
  RunResult<M> out;
  std::vector<HistoryItem<M>> hist;
  for (int k = 0; k < max_queries; ++k) {
    typename M::Point x = k == 0 ? algo.initial() : algo.next(hist);
    Answer<M> a = oracle.answer(x);
    hist.push_back({x, a.f, a.g});
    out.active_sizes.push_back(static_cast<int>(oracle.active().size()));
    ++out.queries;
    if (oracle.transcript().back().tag == "concede") {
      out.conceded = true;
      break;
    }
  }
  out.f = oracle.finalize();
  out.transcript = oracle.transcript();
  for (std::size_t k = 0; k < out.transcript.size(); ++k)
    if (m.dist(out.transcript[k].x, out.f.minimizer) < stop_radius) {
      out.first_hit = static_cast<int>(k);
      break;
    }
  out.verify = verify_transcript(m, out.transcript, out.f, oracle.config().r);
  return out;
}

} // namespace resist
