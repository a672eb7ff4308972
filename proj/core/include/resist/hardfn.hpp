#pragma once

#include "resist/bump.hpp"

#include <optional>
#include <vector>

namespace resist {

template <Manifold M> struct Extension {
  typename M::Point x_ref;
  long double r = 0;
  long double Rcal = 0;
};

// f(x) = dist(x, z)^2 / 2 + sum of bumps, optionally blended into
// dist(x, x_ref)^2 / 2 outside B(x_ref, r).
template <Manifold M> struct HardFunction {
  typename M::Point minimizer;
  std::vector<Bump<M>> bumps;
  std::optional<Extension<M>> ext;
};

template <Manifold M> struct Eval {
  long double f = 0;
  typename M::Tangent g;
};

template <Manifold M> long double sqdist_value(const M &m, const typename M::Point &z, const typename M::Point &x) {
  const long double d = m.dist(x, z);
  return d * d / 2;
}

template <Manifold M>
typename M::Tangent sqdist_grad(const M &m, const typename M::Point &z, const typename M::Point &x) {
  return m.scale(m.log(x, z), -1.0L);
}

// Value and gradient without the extension. When `near` is given, only bumps
// whose anchor_id is flagged there are evaluated (the caller guarantees the
// other supports miss x).
template <Manifold M>
Eval<M> eval_base(const M &m, const HardFunction<M> &h, const typename M::Point &x,
                  const std::vector<char> *near = nullptr, bool need_grad = true) {
  Eval<M> out;
  const long double d = m.dist(x, h.minimizer);
  out.f = d * d / 2;
  if (need_grad)
    out.g = sqdist_grad(m, h.minimizer, x);
  for (const auto &b : h.bumps) {
    if (near && b.anchor_id >= 0 &&
        (static_cast<std::size_t>(b.anchor_id) >= near->size() || !(*near)[static_cast<std::size_t>(b.anchor_id)]))
      continue;
    BumpEval<M> e = bump_eval(m, b, x, need_grad);
    if (!e.touched)
      continue;
    out.f += e.f;
    if (need_grad)
      out.g = m.add(out.g, e.g);
  }
  return out;
}

struct StepValues {
  long double s = 1;
  long double ds = 0;
};

// s_{r,R}(D) and its derivative in D.
inline StepValues extension_step(long double D, long double r, long double Rcal) {
  const long double lo = r * r / 2, span = Rcal * Rcal / 2 - r * r / 2;
  const long double tau = (D - lo) / span;
  return {step_t(tau), step_t_d1(tau) / span};
}

template <Manifold M> void check_extension(const M &m, long double r, long double Rcal) {
  if (!(Rcal >= 2048 * r))
    throw std::invalid_argument("smooth extension: requires Rcal >= 2^11 r");
  if (!(r * m.sqrt_neg_k() >= 8))
    throw std::invalid_argument("smooth extension: requires r sqrt(-K) >= 8");
}

// Blend of a base answer (f, grad f) at x into the extension.
template <Manifold M>
Eval<M> extend_answer(const M &m, const Extension<M> &e, const typename M::Point &x, const Eval<M> &base,
                      long double dist_ref) {
  if (dist_ref <= e.r)
    return base;
  const long double D = dist_ref * dist_ref / 2;
  typename M::Tangent gD = m.scale(m.log(x, e.x_ref), -1.0L);
  if (dist_ref >= e.Rcal)
    return {D, gD};
  const StepValues st = extension_step(D, e.r, e.Rcal);
  Eval<M> out;
  out.f = st.s * base.f + (1 - st.s) * D;
  out.g = m.add(m.scale(gD, st.ds * (base.f - D) + (1 - st.s)), m.scale(base.g, st.s));
  return out;
}

template <Manifold M>
Eval<M> eval(const M &m, const HardFunction<M> &h, const typename M::Point &x, const std::vector<char> *near = nullptr) {
  if (!h.ext)
    return eval_base(m, h, x, near, true);
  const long double dr = m.dist(x, h.ext->x_ref);
  if (dr >= h.ext->Rcal) {
    const long double D = dr * dr / 2;
    return {D, m.scale(m.log(x, h.ext->x_ref), -1.0L)};
  }
  return extend_answer(m, *h.ext, x, eval_base(m, h, x, near, true), dr);
}

template <Manifold M> long double hard_value(const M &m, const HardFunction<M> &h, const typename M::Point &x) {
  if (!h.ext)
    return eval_base(m, h, x, nullptr, false).f;
  return eval(m, h, x).f;
}

template <Manifold M>
typename M::Tangent hard_grad(const M &m, const HardFunction<M> &h, const typename M::Point &x) {
  return eval(m, h, x).g;
}

template <Manifold M>
HardFunction<M> smooth_extension(const M &m, HardFunction<M> h, const typename M::Point &x_ref, long double r,
                                 long double Rcal) {
  check_extension(m, r, Rcal);
  h.ext = Extension<M>{x_ref, r, Rcal};
  return h;
}

template <Manifold M>
long double smooth_extension_value(const M &m, const HardFunction<M> &h, const typename M::Point &x_ref, long double r,
                                   long double Rcal, const typename M::Point &x) {
  HardFunction<M> base = h;
  base.ext.reset();
  return hard_value(m, smooth_extension(m, std::move(base), x_ref, r, Rcal), x);
}

template <Manifold M>
typename M::Tangent smooth_extension_grad(const M &m, const HardFunction<M> &h, const typename M::Point &x_ref,
                                          long double r, long double Rcal, const typename M::Point &x) {
  HardFunction<M> base = h;
  base.ext.reset();
  return hard_grad(m, smooth_extension(m, std::move(base), x_ref, r, Rcal), x);
}

} // namespace resist
