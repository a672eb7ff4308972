#pragma once

#include <string>

namespace resist {

enum class Theorem { GradientOnly, Full, SPD };

struct ConstantsInput {
  std::string manifold = "hyperbolic"; // hyperbolic | spd | flat
  int d = 2;                           // hyperbolic / flat dimension
  double K = -1;                       // hyperbolic curvature
  int n = 2;                           // spd matrix size
  bool det_one = true;
  // value mode or unbounded domain use the full-information constants
  bool full = false;
  bool unbounded = false;
  double r = 0;     // one of r / kappa must be positive
  double kappa = 0;
  double Rcal = 0;  // 0 selects the default rule
};

struct ConstantsReport {
  Theorem theorem = Theorem::GradientOnly;
  int dim = 0;
  double sqrt_neg_k = 0;
  double r = 0;
  double kappa = 0;
  double kappa_gradient = 0; // 4 r sk + 3
  double kappa_full = 0;     // 12 r sk + 9
  double kappa_spd = 0;      // 6 sqrt(2) r + 9
  double r_tilde = 0;
  double c_tilde = 0;
  double log_N_floor = 0; // c~ r
  double N_floor = 0;     // e^{c~ r} (inf when unrepresentable)
  double w = 0;
  double Rcal = 0;
  long T = 0;
  double r_min = 0;
  bool overflow_regime = false;
  bool precondition_ok = true;
  bool feasible() const { return !overflow_regime && precondition_ok; }
};

ConstantsReport compute_constants(const ConstantsInput &in);

double default_unbounded_rcal(double r, double sk);

std::string to_json_string(const ConstantsReport &c);

} // namespace resist
