#pragma once

#include "resist/hyperbolic.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <utility>
#include <vector>

namespace resist {

struct SymEig {
  Eigen::VectorXd values; // ascending
  Eigen::MatrixXd vectors;
  int sweeps = 0;
};

// Cyclic Jacobi eigensolver for symmetric matrices (threshold 1e-14 relative
// to the Frobenius norm, at most 50 sweeps).
SymEig jacobi_eigen(const Eigen::MatrixXd &A);

template <class F> Eigen::MatrixXd sym_apply(const SymEig &e, F &&f) {
  Eigen::VectorXd fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

Eigen::MatrixXd sym_expm(const Eigen::MatrixXd &X);
Eigen::MatrixXd sym_logm(const Eigen::MatrixXd &P);

// Affine-invariant geometry of positive definite n x n matrices, or of the
// determinant-one slice when det_one is set.
class SPDSpace {
public:
  using Point = Eigen::MatrixXd;
  using Tangent = Eigen::MatrixXd;

  SPDSpace(int n, bool det_one);

  int n() const { return n_; }
  bool det_one() const { return det_one_; }
  int dim() const { return n_ * (n_ + 1) / 2 - (det_one_ ? 1 : 0); }
  // Sectional curvatures lie in [-1/2, 0].
  long double sqrt_neg_k() const;

  Point origin() const { return Eigen::MatrixXd::Identity(n_, n_); }
  void check_point(const Point &P) const;

  long double dist(const Point &A, const Point &B) const;
  bool dist_less(const Point &A, const Point &B, long double R) const { return dist(A, B) < R; }
  Point exp(const Point &A, const Tangent &X) const;
  Tangent log(const Point &A, const Point &B) const;
  Tangent transport(const Point &A, const Point &B, const Tangent &X) const;
  Point project_ball(const Point &center, long double radius, const Point &y) const;

  long double inner(const Point &P, const Tangent &X, const Tangent &Y) const;
  long double norm(const Point &P, const Tangent &X) const;
  Tangent zero(const Point &) const { return Eigen::MatrixXd::Zero(n_, n_); }
  Tangent add(const Tangent &u, const Tangent &v) const { return u + v; }
  Tangent sub(const Tangent &u, const Tangent &v) const { return u - v; }
  Tangent scale(const Tangent &v, long double a) const { return v * static_cast<double>(a); }

  Eigen::VectorXd coords(const Point &P, const Tangent &X) const;
  Tangent from_coords(const Point &P, const Eigen::VectorXd &c) const;
  bool same_point(const Point &A, const Point &B) const { return A == B; }

  // Orthonormal basis of Sym(n) (traceless part when det_one) for the
  // Frobenius inner product.
  const std::vector<Eigen::MatrixXd> &basis() const { return basis_; }

  long double curvature_4tensor(const Point &P, const Tangent &W, const Tangent &X,
                                const Tangent &Y, const Tangent &Z) const;
  long double sectional_curvature(const Point &P, const Tangent &X1, const Tangent &X2) const;

  nlohmann::json descriptor() const;
  nlohmann::json to_json(const Eigen::MatrixXd &M) const;
  Eigen::MatrixXd point_from_json(const nlohmann::json &j) const;
  Eigen::MatrixXd tangent_from_json(const nlohmann::json &j) const;

private:
  struct Roots {
    Eigen::MatrixXd half, inv_half;
  };
  Roots roots(const Point &P) const;

  int n_;
  bool det_one_;
  std::vector<Eigen::MatrixXd> basis_;
};

// Bordered tangent [[0, s], [s^T, 0]] at the identity.
Eigen::MatrixXd hyperbolic_submanifold_tangent(const Eigen::VectorXd &s);

struct SPDPacking {
  std::vector<Eigen::MatrixXd> points;
  long double min_dist = 0;
  std::size_t target = 0;
  bool truncated = false;
};

// Packing transported from the totally geodesic hyperbolic submanifold
// (H^2 with K = -1/2 for n = 2, H^{n-1} with K = -1/8 otherwise).
SPDPacking spd_ball_packing(const SPDSpace &S, const Eigen::MatrixXd &x_ref, long double r,
                            std::size_t max_count = 0);

// Embedding of a tangent vector at the origin of the model hyperbolic space
// into Sym(n) at the identity, isometric for the affine-invariant metric.
Eigen::MatrixXd spd_embed_tangent(int n, const Eigen::VectorXd &v);

} // namespace resist
