#include "resist/scalar_fns.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resist {

long double phi(long double R, long double t) {
  const long double R2 = R * R;
  if (!(t < R2 / 2))
    return 0.0L;
  return std::exp(2 * t / (2 * t - R2));
}

long double phi_d1(long double R, long double t) {
  const long double R2 = R * R;
  if (!(t < R2 / 2))
    return 0.0L;
  const long double u = R2 - 2 * t;
  return -phi(R, t) * 2 * R2 / (u * u);
}

long double phi_d2(long double R, long double t) {
  const long double R2 = R * R;
  if (!(t < R2 / 2))
    return 0.0L;
  const long double u = R2 - 2 * t;
  const long double u2 = u * u;
  return 4 * R2 * phi(R, t) * (R2 - 2 * u) / (u2 * u2);
}

long double a_of(long double R, long double sk) {
  if (R <= 0)
    return 0.0L;
  return R / (4 * (4 * sk + 55 / R));
}

long double g_norm(long double R, long double sk) {
  return 8 * R / (std::exp(1.0L / 3) * (1485 + 72 * R * sk));
}

long double g_norm_sup(long double sk) {
  if (sk <= 0)
    return std::numeric_limits<long double>::infinity();
  return 1 / (9 * std::exp(1.0L / 3) * sk);
}

long double g_norm_inv(long double y, long double sk) {
  if (!(y >= 0) || !(y < g_norm_sup(sk)))
    throw std::invalid_argument("g_norm_inv: argument outside [0, sup g_norm)");
  if (y == 0)
    return 0.0L;
  long double lo = 0;
  long double hi = sk > 0 ? 1e6L / sk : std::max(1e6L, 2 * y * std::exp(1.0L / 3) * 1485 / 8);
  while (g_norm(hi, sk) < y) {
    hi *= 2;
    if (!std::isfinite(hi))
      throw std::invalid_argument("g_norm_inv: argument too close to the supremum");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-19L * hi; ++it) {
    const long double mid = (lo + hi) / 2;
    if (g_norm(mid, sk) < y)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2;
}

namespace {
// t = 1 / (1 + e^z), z = 1/(1 - tau) - 1/tau
long double z_of(long double tau) { return 1 / (1 - tau) - 1 / tau; }
} // namespace

long double step_t(long double tau) {
  if (tau <= 0)
    return 1.0L;
  if (tau >= 1)
    return 0.0L;
  return 1 / (1 + std::exp(z_of(tau)));
}

long double step_t_d1(long double tau) {
  if (tau <= 0 || tau >= 1)
    return 0.0L;
  const long double z = z_of(tau);
  const long double t = 1 / (1 + std::exp(z));
  const long double one_minus_t = 1 / (1 + std::exp(-z));
  const long double dz = 1 / ((1 - tau) * (1 - tau)) + 1 / (tau * tau);
  return -t * one_minus_t * dz;
}

long double step_t_d2(long double tau) {
  if (tau <= 0 || tau >= 1)
    return 0.0L;
  const long double z = z_of(tau);
  const long double t = 1 / (1 + std::exp(z));
  const long double one_minus_t = 1 / (1 + std::exp(-z));
  const long double dz = 1 / ((1 - tau) * (1 - tau)) + 1 / (tau * tau);
  const long double ddz = 2 / ((1 - tau) * (1 - tau) * (1 - tau)) - 2 / (tau * tau * tau);
  const long double s = t * one_minus_t;
  const long double ds = -s * dz * (1 - 2 * t);
  return -(ds * dz + s * ddz);
}

long double t_inequality_bound(long double c) { return -2 * std::exp(-std::sqrt(c / 2)); }

long double t_inequality_check(long double c, int grid) {
  if (!(c >= 9))
    throw std::invalid_argument("t_inequality_check: requires c >= 9");
  if (grid < 1)
    throw std::invalid_argument("t_inequality_check: empty grid");
  long double worst = std::numeric_limits<long double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const long double tau = 0.5L * (i + 0.5L) / grid;
    const long double v = 1 - step_t(tau) - std::fabs(step_t_d1(tau)) / c;
    worst = std::min(worst, v);
  }
  return worst;
}

} // namespace resist
