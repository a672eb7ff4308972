#pragma once

// Scalar building blocks of the bump and extension constructions. All take
// sk = sqrt(-K_lo) explicitly; sk = 0 is the flat limit.
namespace resist {

// phi_R(t) = exp(2t / (2t - R^2)) for t < R^2/2, zero beyond.
long double phi(long double R, long double t);
long double phi_d1(long double R, long double t);
long double phi_d2(long double R, long double t);

long double a_of(long double R, long double sk);
long double g_norm(long double R, long double sk);
// Supremum of g_norm over R >= 0 (infinite when sk = 0).
long double g_norm_sup(long double sk);
long double g_norm_inv(long double y, long double sk);

// Smooth step: 1 for tau <= 0, 0 for tau >= 1.
long double step_t(long double tau);
long double step_t_d1(long double tau);
long double step_t_d2(long double tau);

// min over a uniform tau grid in (0, 1/2) of 1 - t(tau) - |t'(tau)| / c.
long double t_inequality_check(long double c, int grid = 100000);
long double t_inequality_bound(long double c);

} // namespace resist
