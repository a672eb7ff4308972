#include "resist/constants.hpp"

#include "resist/jsonio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resist {

double default_unbounded_rcal(double r, double sk) {
  const double l = std::log(r * sk);
  return 512.0 * r * l * l;
}

ConstantsReport compute_constants(const ConstantsInput &in) {
  ConstantsReport c;
  const double s2 = std::sqrt(2.0);
  if (in.manifold == "hyperbolic" || in.manifold == "flat") {
    if (in.manifold == "flat")
      throw std::invalid_argument("constants: flat space has no negative-curvature constants");
    if (!(in.K < 0) || in.d < 2)
      throw std::invalid_argument("constants: hyperbolic space needs K < 0 and d >= 2");
    c.dim = in.d;
    c.sqrt_neg_k = std::sqrt(-in.K);
    c.c_tilde = in.d * c.sqrt_neg_k / 8;
    c.r_tilde = 4 / c.sqrt_neg_k;
    c.theorem = (in.full || in.unbounded) ? Theorem::Full : Theorem::GradientOnly;
  } else if (in.manifold == "spd") {
    if (in.n < 2)
      throw std::invalid_argument("constants: spd needs n >= 2");
    c.dim = in.det_one ? in.n * (in.n + 1) / 2 - 1 : in.n * (in.n + 1) / 2;
    c.sqrt_neg_k = 1 / s2;
    if (in.n == 2) {
      c.c_tilde = 1 / (4 * s2);
      c.r_tilde = 4 * s2;
    } else {
      c.c_tilde = (in.n - 1) / (16 * s2);
      c.r_tilde = 8 * s2;
    }
    c.theorem = Theorem::SPD;
  } else {
    throw std::invalid_argument("constants: unknown manifold " + in.manifold);
  }
  const double sk = c.sqrt_neg_k;
  if ((in.r > 0) == (in.kappa > 0))
    throw std::invalid_argument("constants: give exactly one of r and kappa");
  if (in.r > 0) {
    c.r = in.r;
  } else {
    switch (c.theorem) {
    case Theorem::GradientOnly: c.r = (in.kappa - 3) / (4 * sk); break;
    case Theorem::Full: c.r = (in.kappa - 9) / (12 * sk); break;
    case Theorem::SPD: c.r = (in.kappa - 9) / (6 * s2); break;
    }
  }
  c.kappa_gradient = 4 * c.r * sk + 3;
  c.kappa_full = 12 * c.r * sk + 9;
  c.kappa_spd = 6 * c.r * s2 + 9;
  c.kappa = c.theorem == Theorem::GradientOnly ? c.kappa_gradient
            : c.theorem == Theorem::Full       ? c.kappa_full
                                               : c.kappa_spd;
  if (in.kappa > 0)
    c.kappa = in.kappa;

  c.Rcal = in.Rcal > 0 ? in.Rcal : (in.unbounded ? default_unbounded_rcal(c.r, sk) : c.r);
  c.log_N_floor = c.c_tilde * c.r;
  c.N_floor = std::exp(c.log_N_floor);

  const int d = c.dim;
  double lead;
  if (c.theorem == Theorem::GradientOnly) {
    lead = 0.5 * c.c_tilde * c.r / d;
    c.w = c.c_tilde * c.r / (4.0 * d);
  } else {
    lead = c.c_tilde * c.r / (d + 2);
    c.w = lead;
  }
  const double arg = 2000 * lead * (3 * c.Rcal * sk + 2);
  c.T = arg > 1 ? static_cast<long>(std::floor(lead / std::log(arg))) : 0;

  c.r_min = std::max({c.r_tilde, 8 / sk, 4.0 * (d + 2) / c.c_tilde});
  c.precondition_ok = c.r >= c.r_min;
  c.overflow_regime = c.r * sk > 600;
  return c;
}

std::string to_json_string(const ConstantsReport &c) {
  nlohmann::json j;
  j["theorem"] = c.theorem == Theorem::GradientOnly ? "gradient-only" : c.theorem == Theorem::Full ? "full" : "spd";
  j["dim"] = c.dim;
  j["sqrt_neg_k"] = c.sqrt_neg_k;
  j["r"] = c.r;
  j["kappa"] = c.kappa;
  j["kappa_gradient_only"] = c.kappa_gradient;
  j["kappa_full"] = c.kappa_full;
  j["kappa_spd"] = c.kappa_spd;
  j["r_tilde"] = c.r_tilde;
  j["c_tilde"] = c.c_tilde;
  j["log_N_floor"] = c.log_N_floor;
  j["N_floor"] = std::isfinite(c.N_floor) ? nlohmann::json(c.N_floor) : nlohmann::json("inf");
  j["w"] = c.w;
  j["Rcal"] = c.Rcal;
  j["T"] = c.T;
  j["r_min"] = c.r_min;
  j["overflow_regime"] = c.overflow_regime;
  j["precondition_ok"] = c.precondition_ok;
  return dump17(j, 2);
}

} // namespace resist
