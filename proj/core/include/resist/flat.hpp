#pragma once

#include <Eigen/Dense>
#include <json.hpp>

namespace resist {

// Euclidean R^d, the K = 0 limit used to check the optimizers.
class FlatSpace {
public:
  using Point = Eigen::VectorXd;
  using Tangent = Eigen::VectorXd;

  explicit FlatSpace(int d);

  int dim() const { return d_; }
  long double sqrt_neg_k() const { return 0.0L; }
  Point origin() const { return Eigen::VectorXd::Zero(d_); }

  long double dist(const Point &x, const Point &y) const;
  bool dist_less(const Point &x, const Point &y, long double R) const { return dist(x, y) < R; }
  Point exp(const Point &x, const Tangent &v) const { return x + v; }
  Tangent log(const Point &x, const Point &y) const { return y - x; }
  Tangent transport(const Point &, const Point &, const Tangent &v) const { return v; }
  Point project_ball(const Point &center, long double radius, const Point &y) const;

  long double inner(const Point &, const Tangent &u, const Tangent &v) const;
  long double norm(const Point &, const Tangent &v) const;
  Tangent zero(const Point &) const { return Eigen::VectorXd::Zero(d_); }
  Tangent add(const Tangent &u, const Tangent &v) const { return u + v; }
  Tangent sub(const Tangent &u, const Tangent &v) const { return u - v; }
  Tangent scale(const Tangent &v, long double a) const { return v * static_cast<double>(a); }

  Eigen::VectorXd coords(const Point &, const Tangent &v) const { return v; }
  Tangent from_coords(const Point &, const Eigen::VectorXd &c) const { return c; }
  bool same_point(const Point &x, const Point &y) const { return x == y; }

  nlohmann::json descriptor() const;
  nlohmann::json to_json(const Eigen::VectorXd &v) const;
  Eigen::VectorXd point_from_json(const nlohmann::json &j) const;
  Eigen::VectorXd tangent_from_json(const nlohmann::json &j) const { return point_from_json(j); }

private:
  int d_;
};

} // namespace resist
