#pragma once

#include "resist/manifold.hpp"
#include "resist/scalar_fns.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace resist {

enum class BumpKind { Gradient, Value, Combined };

inline const char *to_string(BumpKind k) {
  switch (k) {
  case BumpKind::Gradient:
    return "gradient";
  case BumpKind::Value:
    return "value";
  case BumpKind::Combined:
    return "combined";
  }
  return "?";
}

inline BumpKind bump_kind_from_string(const std::string &s) {
  if (s == "gradient")
    return BumpKind::Gradient;
  if (s == "value")
    return BumpKind::Value;
  if (s == "combined")
    return BumpKind::Combined;
  throw std::invalid_argument("unknown bump kind: " + s);
}

struct BudgetError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One compactly supported perturbation anchored at x_k. The gradient part is
// amp * phi_R(dist(x, p)^2 / 2); the value part is fhat * phi_{R_ball}(dist(x, x_k)^2 / 2).
template <Manifold M> struct Bump {
  using Point = typename M::Point;
  using Tangent = typename M::Tangent;

  BumpKind kind = BumpKind::Gradient;
  int anchor_id = -1;
  Point anchor;
  long double R_ball = 0;
  long double w = 1;

  bool has_grad = false;
  Tangent g;
  long double g_abs = 0;
  Point p;
  long double R = 0;
  long double amp = 0;

  long double fhat = 0;
  long double f_target = 0;
};

template <Manifold M> long double gradient_budget(const M &m, long double R_ball, long double w) {
  return g_norm(R_ball, m.sqrt_neg_k()) / w;
}

template <Manifold M> long double value_budget(const M &m, long double R_ball, long double w) {
  return a_of(R_ball, m.sqrt_neg_k()) / w;
}

// Admissible values of a combined bump at its anchor, for any in-budget g.
template <Manifold M>
std::pair<long double, long double> combined_interval(const M &m, long double R_ball, long double w) {
  const long double a = value_budget(m, R_ball, w);
  return {-a + 0.375L * R_ball * gradient_budget(m, R_ball, w), a};
}

// Value of the gradient bump with target g at its own anchor.
template <Manifold M> long double gradient_bump_center_value(const M &m, long double g_abs, long double w) {
  if (g_abs == 0)
    return 0.0L;
  return 0.375L * g_abs * g_norm_inv(w * g_abs, m.sqrt_neg_k());
}

namespace detail {
template <Manifold M>
void set_gradient_part(const M &m, Bump<M> &b, const typename M::Point &x_k, const typename M::Tangent &g) {
  const long double sk = m.sqrt_neg_k();
  b.g = g;
  b.g_abs = m.norm(x_k, g);
  // relative slack absorbs the rounding of a tangent built at exactly the budget
  if (!(b.g_abs <= gradient_budget(m, b.R_ball, b.w) * (1 + 1e-12L)))
    throw BudgetError("gradient bump: |g| exceeds w^-1 g_norm(R_ball)");
  b.p = x_k;
  if (b.g_abs == 0)
    return;
  b.has_grad = true;
  b.R = std::min(2 * g_norm_inv(b.w * b.g_abs, sk) / 3, 2 * b.R_ball / 3);
  b.amp = a_of(b.R, sk) / b.w;
  b.p = m.exp(x_k, m.scale(g, b.R / 2 / b.g_abs));
}
} // namespace detail

template <Manifold M>
Bump<M> bump_from_gradient(const M &m, const typename M::Point &x_k, long double R_ball, long double w,
                           const typename M::Tangent &g, int anchor_id = -1) {
  if (!(R_ball > 0) || !(w > 0))
    throw std::invalid_argument("gradient bump: R_ball and w must be positive");
  Bump<M> b;
  b.kind = BumpKind::Gradient;
  b.anchor_id = anchor_id;
  b.anchor = x_k;
  b.R_ball = R_ball;
  b.w = w;
  detail::set_gradient_part(m, b, x_k, g);
  b.f_target = gradient_bump_center_value(m, b.g_abs, w);
  return b;
}

template <Manifold M>
Bump<M> value_bump(const M &m, const typename M::Point &x_k, long double R_ball, long double w,
                   long double fhat, int anchor_id = -1) {
  if (!(R_ball > 0) || !(w > 0))
    throw std::invalid_argument("value bump: R_ball and w must be positive");
  if (!(std::fabs(fhat) <= value_budget(m, R_ball, w)))
    throw BudgetError("value bump: |fhat| exceeds w^-1 a(R_ball)");
  Bump<M> b;
  b.kind = BumpKind::Value;
  b.anchor_id = anchor_id;
  b.anchor = x_k;
  b.R_ball = R_ball;
  b.w = w;
  b.g = m.zero(x_k);
  b.p = x_k;
  b.fhat = fhat;
  b.f_target = fhat;
  return b;
}

template <Manifold M>
Bump<M> combined_bump(const M &m, const typename M::Point &x_k, long double R_ball, long double w,
                      long double f, const typename M::Tangent &g, int anchor_id = -1) {
  if (!(R_ball > 0) || !(w > 0))
    throw std::invalid_argument("combined bump: R_ball and w must be positive");
  auto [lo, hi] = combined_interval(m, R_ball, w);
  if (!(f >= lo && f <= hi))
    throw BudgetError("combined bump: target value outside the admissible interval");
  Bump<M> b;
  b.kind = BumpKind::Combined;
  b.anchor_id = anchor_id;
  b.anchor = x_k;
  b.R_ball = R_ball;
  b.w = w;
  detail::set_gradient_part(m, b, x_k, g);
  b.fhat = f - gradient_bump_center_value(m, b.g_abs, w);
  if (!(std::fabs(b.fhat) <= value_budget(m, R_ball, w)))
    throw BudgetError("combined bump: value part exceeds w^-1 a(R_ball)");
  b.f_target = f;
  return b;
}

template <Manifold M> struct BumpEval {
  long double f = 0;
  typename M::Tangent g;
  bool touched = false;
};

// Value and gradient of a bump at x. Points outside both supports return
// exactly zero without touching the geometry beyond a support test.
template <Manifold M>
BumpEval<M> bump_eval(const M &m, const Bump<M> &b, const typename M::Point &x, bool need_grad = true) {
  BumpEval<M> out;
  bool init = false;
  auto accumulate = [&](const typename M::Point &c, long double R, long double amp) {
    if (!m.dist_less(x, c, R))
      return;
    const long double dd = m.dist(x, c);
    const long double t = dd * dd / 2;
    const long double v = phi(R, t);
    if (v == 0)
      return;
    out.touched = true;
    out.f += amp * v;
    if (need_grad) {
      typename M::Tangent gr = m.scale(m.log(x, c), -amp * phi_d1(R, t));
      out.g = init ? m.add(out.g, gr) : gr;
      init = true;
    }
  };
  if (b.has_grad)
    accumulate(b.p, b.R, b.amp);
  if (b.kind != BumpKind::Gradient && b.fhat != 0)
    accumulate(b.anchor, b.R_ball, b.fhat);
  if (need_grad && !init)
    out.g = m.zero(x);
  return out;
}

template <Manifold M> long double bump_value(const M &m, const Bump<M> &b, const typename M::Point &x) {
  return bump_eval(m, b, x, false).f;
}

template <Manifold M>
typename M::Tangent bump_grad(const M &m, const Bump<M> &b, const typename M::Point &x) {
  return bump_eval(m, b, x, true).g;
}

} // namespace resist
