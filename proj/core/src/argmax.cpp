#include "resist/argmax.hpp"

#include "resist/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resist {

namespace {

// Deepest point of a set of closed intervals: (depth, chosen value).
std::pair<std::size_t, long double> stab(const std::vector<std::pair<long double, long double>> &iv,
                                         const std::vector<int> &ids) {
  std::vector<std::pair<long double, int>> ev;
  ev.reserve(2 * ids.size());
  for (int j : ids) {
    ev.emplace_back(iv[j].first, 0);  // opens sort before closes at equal coordinates
    ev.emplace_back(iv[j].second, 1);
  }
  std::sort(ev.begin(), ev.end());
  std::size_t depth = 0, best = 0;
  long double best_lo = 0, best_hi = 0;
  bool open_best = false;
  for (const auto &[x, type] : ev) {
    if (type == 0) {
      ++depth;
      if (depth > best) {
        best = depth;
        best_lo = x;
        open_best = true;
      }
    } else {
      if (open_best && depth == best) {
        best_hi = x;
        open_best = false;
      }
      --depth;
    }
  }
  return {best, (best_lo + best_hi) / 2};
}

} // namespace

ArgmaxResult evaluate_candidate(const ArgmaxInput &in, const Eigen::VectorXd &x) {
  ArgmaxResult r;
  r.point = x;
  const double rad2 = (in.q * in.shrink) * (in.q * in.shrink);
  std::vector<int> inside;
  for (std::size_t j = 0; j < in.centers.size(); ++j)
    if ((in.centers[j] - x).squaredNorm() <= rad2)
      inside.push_back(static_cast<int>(j));
  if (in.intervals.empty() || inside.empty()) {
    r.members = std::move(inside);
    return r;
  }
  auto [depth, v] = stab(in.intervals, inside);
  r.value = v;
  for (int j : inside)
    if (in.intervals[j].first <= v && v <= in.intervals[j].second)
      r.members.push_back(j);
  return r;
}

ArgmaxResult candidate_argmax(const ArgmaxInput &in) {
  if (in.centers.empty())
    throw std::invalid_argument("candidate_argmax: no balls");
  if (!in.intervals.empty() && in.intervals.size() != in.centers.size())
    throw std::invalid_argument("candidate_argmax: intervals not aligned with balls");
  for (const auto &[lo, hi] : in.intervals)
    if (!(lo <= hi))
      throw std::invalid_argument("candidate_argmax: empty interval");
  const int d = static_cast<int>(in.centers[0].size());
  const std::size_t n = in.centers.size();

  ArgmaxResult best;
  std::size_t count = 0;
  auto consider = [&](const Eigen::VectorXd &x, const char *src) {
    ++count;
    ArgmaxResult r = evaluate_candidate(in, x);
    if (r.members.size() > best.members.size()) {
      best = std::move(r);
      best.source = src;
    }
  };

  for (const auto &c : in.centers)
    consider(c, "center");
  const double reach = 2 * in.q * in.shrink;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((in.centers[i] - in.centers[j]).norm() <= reach)
        consider(0.5 * (in.centers[i] + in.centers[j]), "midpoint");

  if (d == 2 && n <= 400) {
    // depth of a disk arrangement is maximized at a vertex or a center
    const double qv = in.q * (1 - 2 * (1 - in.shrink));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Eigen::Vector2d a = in.centers[i], b = in.centers[j];
        const double L = (b - a).norm();
        if (L == 0 || L >= 2 * qv)
          continue;
        const Eigen::Vector2d m = 0.5 * (a + b);
        const double hh = std::sqrt(std::max(0.0, qv * qv - L * L / 4));
        const Eigen::Vector2d perp(-(b - a)[1] / L, (b - a)[0] / L);
        consider(Eigen::VectorXd(m + hh * perp), "vertex");
        consider(Eigen::VectorXd(m - hh * perp), "vertex");
      }
  }

  if (in.samples > 0 && in.enc_radius > 0 && in.enc_center.size() == d)
    for (const auto &u : ball_samples(d, static_cast<std::size_t>(in.samples), in.seed))
      consider(in.enc_center + in.enc_radius * u, "sample");

  if (in.refine && d <= 3) {
    Eigen::VectorXd lo = in.centers[0], hi = in.centers[0];
    for (const auto &c : in.centers) {
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
    lo.array() -= in.q;
    hi.array() += in.q;
    double pitch = in.q / 20;
    auto cells = [&] {
      double total = 1;
      for (int a = 0; a < d; ++a)
        total *= std::floor((hi[a] - lo[a]) / pitch) + 1;
      return total;
    };
    while (cells() > static_cast<double>(in.cell_cap))
      pitch *= 1.25;
    std::vector<long> steps(d), idx(d, 0);
    for (int a = 0; a < d; ++a)
      steps[a] = static_cast<long>(std::floor((hi[a] - lo[a]) / pitch)) + 1;
    Eigen::VectorXd x(d);
    while (true) {
      for (int a = 0; a < d; ++a)
        x[a] = lo[a] + pitch * static_cast<double>(idx[a]);
      consider(x, "grid");
      int a = 0;
      while (a < d && idx[a] == steps[a] - 1)
        idx[a++] = 0;
      if (a == d)
        break;
      ++idx[a];
    }
  }
  best.candidates = count;
  return best;
}

std::size_t grid_max_membership(const std::vector<Eigen::VectorXd> &centers, double q, double pitch) {
  if (centers.empty())
    return 0;
  const int d = static_cast<int>(centers[0].size());
  Eigen::VectorXd lo = centers[0], hi = centers[0];
  for (const auto &c : centers) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  lo.array() -= q;
  hi.array() += q;
  std::vector<long> steps(d), idx(d, 0);
  for (int a = 0; a < d; ++a)
    steps[a] = static_cast<long>(std::floor((hi[a] - lo[a]) / pitch)) + 1;
  std::size_t best = 0;
  Eigen::VectorXd x(d);
  while (true) {
    for (int a = 0; a < d; ++a)
      x[a] = lo[a] + pitch * static_cast<double>(idx[a]);
    std::size_t c = 0;
    for (const auto &z : centers)
      if ((z - x).squaredNorm() <= q * q)
        ++c;
    best = std::max(best, c);
    int a = 0;
    while (a < d && idx[a] == steps[a] - 1)
      idx[a++] = 0;
    if (a == d)
      break;
    ++idx[a];
  }
  return best;
}

} // namespace resist
