#pragma once

#include "resist/mp.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace resist {

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ambient Minkowski coordinates (d + 1 entries).
struct HPoint {
  std::vector<hp::Real> c;
};

// Ambient coordinates of a tangent vector; the base point is supplied by the
// caller of every operation.
struct HTangent {
  std::vector<hp::Real> c;
};

// Hyperboloid model of H^d with curvature K < 0. `reach` bounds the geodesic
// radius (around the origin) the space must represent; it fixes the working
// precision of every operation.
class HyperbolicSpace {
public:
  using Point = HPoint;
  using Tangent = HTangent;

  HyperbolicSpace(int d, double K, double reach = 64.0);

  int dim() const { return d_; }
  double curvature() const { return K_; }
  long double sqrt_neg_k() const { return sk_; }
  double reach() const { return reach_; }
  long bits() const { return bits_; }

  Point origin() const;
  Point point(const std::vector<hp::Real> &ambient) const;
  Tangent tangent(const std::vector<hp::Real> &ambient) const;

  hp::Real minkowski(const std::vector<hp::Real> &u, const std::vector<hp::Real> &v) const;

  long double dist(const Point &x, const Point &y) const;
  bool dist_less(const Point &x, const Point &y, long double R) const;
  Point exp(const Point &x, const Tangent &v) const;
  Tangent log(const Point &x, const Point &y) const;
  Tangent transport(const Point &x, const Point &y, const Tangent &v) const;
  Point project_ball(const Point &center, long double radius, const Point &y) const;

  long double inner(const Point &x, const Tangent &u, const Tangent &v) const;
  long double norm(const Point &x, const Tangent &v) const;
  Tangent zero(const Point &x) const;
  Tangent add(const Tangent &u, const Tangent &v) const;
  Tangent sub(const Tangent &u, const Tangent &v) const;
  Tangent scale(const Tangent &v, long double a) const;
  Tangent scale(const Tangent &v, const hp::Real &a) const;

  // Coordinates in the orthonormal frame obtained by transporting the
  // standard basis from the origin to x.
  Eigen::VectorXd coords(const Point &x, const Tangent &v) const;
  std::vector<hp::Real> coords_mp(const Point &x, const Tangent &v) const;
  Tangent from_coords(const Point &x, const Eigen::VectorXd &c) const;
  Tangent from_coords_mp(const Point &x, const std::vector<hp::Real> &c) const;

  bool same_point(const Point &x, const Point &y) const;

  // Residuals of the model invariants: |K<x,x> - 1| and |<x,v>| scaled.
  long double point_residual(const Point &x) const;
  long double tangent_residual(const Point &x, const Tangent &v) const;

  nlohmann::json descriptor() const;
  nlohmann::json to_json(const Point &x) const;
  nlohmann::json to_json(const Tangent &v) const;
  Point point_from_json(const nlohmann::json &j) const;
  Tangent tangent_from_json(const nlohmann::json &j) const;

private:
  void check_reach(const std::vector<hp::Real> &x) const;
  Point normalized(std::vector<hp::Real> y) const;

  int d_;
  double K_;
  long double sk_;
  double reach_;
  long bits_;
};

// Distance between exp(x, v1) and exp(x, v2) for two tangents of norm s at
// angle exactly theta = e^{1 - (2/3) s sqrt(-K)}.
long double geodesics_diverge_gap(const HyperbolicSpace &H, const HPoint &x, long double s);

struct HPacking {
  std::vector<HPoint> points;
  long double theta = 0;
  long double min_dist = 0;
  std::size_t target = 0;
  bool truncated = false;
  // When not every pair was measured, the measured pairs and a lower bound
  // on the distance of every other pair.
  bool all_pairs_checked = true;
  std::vector<std::pair<int, int>> checked_pairs;
  long double far_pair_bound = 0;
};

// Points exp(x_ref, v_j), |v_j| = 3r/4, pairwise at least r/2 apart. When
// ceil(e^{(d/8) r sqrt(-K)}) exceeds max_count (> 0) only a cluster of
// max_count points at the proof's angular spacing is returned.
HPacking ball_packing(const HyperbolicSpace &H, const HPoint &x_ref, long double r,
                      std::size_t max_count = 0);

} // namespace resist
