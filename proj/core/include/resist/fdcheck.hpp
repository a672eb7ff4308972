#pragma once

#include "resist/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace resist {

struct FdDirection {
  long double first = 0;  // Richardson estimate of d/dt f(exp(x, t v)) at 0
  long double second = 0; // Richardson estimate of d^2/dt^2 f(exp(x, t v)) at 0
  long double exact = 0;  // <grad, v> when a gradient was supplied
};

struct FdReport {
  std::vector<FdDirection> dirs;
  long double max_grad_error = 0; // max |first - exact|
  long double min_second = 0;
  long double max_second = 0;
};

// Central geodesic differences along each direction with steps
// h, h/2, h/4 (h = 1e-3 * scale), Richardson-extrapolated twice.
template <Manifold M, class F>
FdDirection fd_direction(const M &m, F &&f, const typename M::Point &x, const typename M::Tangent &v,
                         long double scale = 1, long double f0 = NAN) {
  if (std::isnan(static_cast<double>(f0)))
    f0 = f(x);
  long double D[3], S[3];
  long double h = 1e-3L * scale;
  for (int i = 0; i < 3; ++i, h /= 2) {
    const long double fp = f(m.exp(x, m.scale(v, h)));
    const long double fm = f(m.exp(x, m.scale(v, -h)));
    D[i] = (fp - fm) / (2 * h);
    S[i] = (fp - 2 * f0 + fm) / (h * h);
  }
  auto rich = [](const long double *a) {
    const long double r1 = (4 * a[1] - a[0]) / 3;
    const long double r2 = (4 * a[2] - a[1]) / 3;
    return (16 * r2 - r1) / 15;
  };
  FdDirection out;
  out.first = rich(D);
  out.second = rich(S);
  return out;
}

template <Manifold M, class F>
FdReport fd_check(const M &m, F &&f, const typename M::Point &x, const std::vector<typename M::Tangent> &dirs,
                  const typename M::Tangent *grad = nullptr, long double scale = 1) {
  FdReport rep;
  const long double f0 = f(x);
  bool first = true;
  for (const auto &v : dirs) {
    FdDirection d = fd_direction(m, f, x, v, scale, f0);
    if (grad) {
      d.exact = m.inner(x, *grad, v);
      rep.max_grad_error = std::max(rep.max_grad_error, std::fabs(d.first - d.exact));
    }
    rep.min_second = first ? d.second : std::min(rep.min_second, d.second);
    rep.max_second = first ? d.second : std::max(rep.max_second, d.second);
    first = false;
    rep.dirs.push_back(d);
  }
  return rep;
}

// Gradient coordinates (in the frame of M::coords) assembled from
// directional differences along the frame vectors.
template <Manifold M, class F>
Eigen::VectorXd fd_gradient_coords(const M &m, F &&f, const typename M::Point &x, long double scale = 1) {
  const int d = static_cast<int>(m.coords(x, m.zero(x)).size());
  Eigen::VectorXd out(d);
  const long double f0 = f(x);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[i] = 1;
    out[i] = static_cast<double>(fd_direction(m, f, x, m.from_coords(x, e), scale, f0).first);
  }
  return out;
}

} // namespace resist
