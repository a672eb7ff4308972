#include "resist/spd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace resist {

SymEig jacobi_eigen(const Eigen::MatrixXd &A0) {
  const int n = static_cast<int>(A0.rows());
  if (A0.cols() != n)
    throw std::invalid_argument("jacobi_eigen: matrix is not square");
  Eigen::MatrixXd A = 0.5 * (A0 + A0.transpose());
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(A.norm(), std::numeric_limits<double>::min());
  const double tol = 1e-14 * scale;
  SymEig out;
  auto off = [&] {
    double s = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        s += 2 * A(p, q) * A(p, q);
    return std::sqrt(s);
  };
  int sweep = 0;
  for (; sweep < 50 && off() > tol; ++sweep) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0)
          continue;
        const double th = (A(q, q) - A(p, p)) / (2 * apq);
        const double t = (th >= 0 ? 1.0 : -1.0) / (std::fabs(th) + std::sqrt(th * th + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q)
            continue;
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = A(p, k) = c * akp - s * akq;
          A(k, q) = A(q, k) = s * akp + c * akq;
        }
        A(p, p) -= t * apq;
        A(q, q) += t * apq;
        A(p, q) = A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  if (off() > tol)
    throw std::runtime_error("jacobi_eigen: no convergence within 50 sweeps");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) < A(b, b); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = A(order[i], order[i]);
    out.vectors.col(i) = V.col(order[i]);
  }
  out.sweeps = sweep;
  return out;
}

Eigen::MatrixXd sym_expm(const Eigen::MatrixXd &X) {
  return sym_apply(jacobi_eigen(X), [](double v) { return std::exp(v); });
}

Eigen::MatrixXd sym_logm(const Eigen::MatrixXd &P) {
  SymEig e = jacobi_eigen(P);
  if (e.values[0] <= 0)
    throw InvariantError("matrix logarithm of a non positive definite matrix");
  return sym_apply(e, [](double v) { return std::log(v); });
}

namespace {
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd &M) { return 0.5 * (M + M.transpose()); }
} // namespace

SPDSpace::SPDSpace(int n, bool det_one) : n_(n), det_one_(det_one) {
  if (n < 2)
    throw std::invalid_argument("SPD space: n must be >= 2");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
      B(i, j) = B(j, i) = 1 / std::sqrt(2.0);
      basis_.push_back(B);
    }
  if (det_one) {
    for (int k = 1; k < n; ++k) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
      const double c = 1 / std::sqrt(static_cast<double>(k) * (k + 1));
      for (int i = 0; i < k; ++i)
        B(i, i) = c;
      B(k, k) = -k * c;
      basis_.push_back(B);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
      B(i, i) = 1;
      basis_.push_back(B);
    }
  }
}

long double SPDSpace::sqrt_neg_k() const { return std::sqrt(0.5L); }

void SPDSpace::check_point(const Point &P) const {
  if (P.rows() != n_ || P.cols() != n_)
    throw std::invalid_argument("SPD point: wrong shape");
  if ((P - P.transpose()).norm() > 1e-12 * std::max(1.0, P.norm()))
    throw InvariantError("SPD point is not symmetric");
  SymEig e = jacobi_eigen(P);
  if (e.values[0] <= 0)
    throw InvariantError("SPD point is not positive definite");
  if (det_one_) {
    const double logdet = e.values.array().log().sum();
    if (std::fabs(logdet) > 1e-10)
      throw InvariantError("SPD point is off the determinant-one slice");
  }
}

SPDSpace::Roots SPDSpace::roots(const Point &P) const {
  SymEig e = jacobi_eigen(P);
  if (e.values[0] <= 0)
    throw InvariantError("SPD point is not positive definite");
  Roots r;
  r.half = sym_apply(e, [](double v) { return std::sqrt(v); });
  r.inv_half = sym_apply(e, [](double v) { return 1 / std::sqrt(v); });
  return r;
}

long double SPDSpace::dist(const Point &A, const Point &B) const {
  Roots ra = roots(A);
  SymEig e = jacobi_eigen(symmetrize(ra.inv_half * B * ra.inv_half));
  if (e.values[0] <= 0)
    throw InvariantError("SPD point is not positive definite");
  long double s = 0;
  for (int i = 0; i < n_; ++i) {
    const long double l = std::log(static_cast<long double>(e.values[i]));
    s += l * l;
  }
  return std::sqrt(s);
}

SPDSpace::Point SPDSpace::exp(const Point &A, const Tangent &X) const {
  Roots ra = roots(A);
  Eigen::MatrixXd Q = symmetrize(ra.half * sym_expm(symmetrize(ra.inv_half * X * ra.inv_half)) * ra.half);
  if (det_one_) {
    SymEig e = jacobi_eigen(Q);
    const double logdet = e.values.array().log().sum();
    Q *= std::exp(-logdet / n_);
  }
  return Q;
}

SPDSpace::Tangent SPDSpace::log(const Point &A, const Point &B) const {
  Roots ra = roots(A);
  return symmetrize(ra.half * sym_logm(symmetrize(ra.inv_half * B * ra.inv_half)) * ra.half);
}

SPDSpace::Tangent SPDSpace::transport(const Point &A, const Point &B, const Tangent &X) const {
  Roots ra = roots(A);
  SymEig e = jacobi_eigen(symmetrize(ra.inv_half * B * ra.inv_half));
  Eigen::MatrixXd mid = sym_apply(e, [](double v) { return std::sqrt(v); });
  Eigen::MatrixXd E = ra.half * mid * ra.inv_half;
  return symmetrize(E * X * E.transpose());
}

SPDSpace::Point SPDSpace::project_ball(const Point &center, long double radius, const Point &y) const {
  const long double dd = dist(center, y);
  if (dd <= radius)
    return y;
  return exp(center, log(center, y) * static_cast<double>(radius / dd));
}

long double SPDSpace::inner(const Point &P, const Tangent &X, const Tangent &Y) const {
  Roots r = roots(P);
  Eigen::MatrixXd a = r.inv_half * X * r.inv_half;
  Eigen::MatrixXd b = r.inv_half * Y * r.inv_half;
  return static_cast<long double>((a.array() * b.array()).sum());
}

long double SPDSpace::norm(const Point &P, const Tangent &X) const {
  return std::sqrt(std::max(0.0L, inner(P, X, X)));
}

Eigen::VectorXd SPDSpace::coords(const Point &P, const Tangent &X) const {
  Roots r = roots(P);
  Eigen::MatrixXd S = symmetrize(r.inv_half * X * r.inv_half);
  Eigen::VectorXd c(static_cast<Eigen::Index>(basis_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = (basis_[i].array() * S.array()).sum();
  return c;
}

SPDSpace::Tangent SPDSpace::from_coords(const Point &P, const Eigen::VectorXd &c) const {
  if (c.size() != static_cast<Eigen::Index>(basis_.size()))
    throw std::invalid_argument("from_coords: wrong number of coordinates");
  Roots r = roots(P);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n_, n_);
  for (std::size_t i = 0; i < basis_.size(); ++i)
    S += c[static_cast<Eigen::Index>(i)] * basis_[i];
  return symmetrize(r.half * S * r.half);
}

long double SPDSpace::curvature_4tensor(const Point &P, const Tangent &W, const Tangent &X,
                                        const Tangent &Y, const Tangent &Z) const {
  Eigen::MatrixXd Pi = P.inverse();
  Eigen::MatrixXd w = Pi * W, x = Pi * X, y = Pi * Y, z = Pi * Z;
  Eigen::MatrixXd c1 = w * x - x * w;
  Eigen::MatrixXd c2 = y * z - z * y;
  return -0.25L * static_cast<long double>((c1 * c2).trace());
}

long double SPDSpace::sectional_curvature(const Point &P, const Tangent &X1, const Tangent &X2) const {
  const long double a = inner(P, X1, X1), b = inner(P, X2, X2), c = inner(P, X1, X2);
  const long double gram = a * b - c * c;
  if (gram < 1e-14L)
    throw std::invalid_argument("sectional_curvature: degenerate plane");
  return curvature_4tensor(P, X1, X2, X2, X1) / gram;
}

nlohmann::json SPDSpace::descriptor() const {
  return {{"manifold", "spd"}, {"n", n_}, {"det_one", det_one_}};
}

nlohmann::json SPDSpace::to_json(const Eigen::MatrixXd &M) const {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      j.push_back(M(i, k));
  return j;
}

Eigen::MatrixXd SPDSpace::tangent_from_json(const nlohmann::json &j) const {
  if (j.size() != static_cast<std::size_t>(n_ * n_))
    throw std::invalid_argument("SPD matrix: wrong number of entries");
  Eigen::MatrixXd M(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k)
      M(i, k) = j[static_cast<std::size_t>(i * n_ + k)].get<double>();
  return M;
}

Eigen::MatrixXd SPDSpace::point_from_json(const nlohmann::json &j) const {
  Eigen::MatrixXd M = tangent_from_json(j);
  check_point(M);
  return M;
}

Eigen::MatrixXd hyperbolic_submanifold_tangent(const Eigen::VectorXd &s) {
  const int m = static_cast<int>(s.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(m + 1, m + 1);
  X.block(0, m, m, 1) = s;
  X.block(m, 0, 1, m) = s.transpose();
  return X;
}

Eigen::MatrixXd spd_embed_tangent(int n, const Eigen::VectorXd &v) {
  if (n == 2) {
    if (v.size() != 2)
      throw std::invalid_argument("spd_embed_tangent: n = 2 needs a 2-vector");
    Eigen::MatrixXd X(2, 2);
    X << v[0], v[1], v[1], -v[0];
    return X / std::sqrt(2.0);
  }
  if (v.size() != n - 1)
    throw std::invalid_argument("spd_embed_tangent: needs an (n-1)-vector");
  return hyperbolic_submanifold_tangent(v / std::sqrt(2.0));
}

SPDPacking spd_ball_packing(const SPDSpace &S, const Eigen::MatrixXd &x_ref, long double r,
                            std::size_t max_count) {
  const int n = S.n();
  const long double r_min = (n == 2 ? 4 : 8) * std::sqrt(2.0L);
  if (!(r >= r_min * (1 - 1e-12L)))
    throw std::invalid_argument("spd_ball_packing: radius below the packing threshold");
  const int dh = n == 2 ? 2 : n - 1;
  const double kh = n == 2 ? -0.5 : -0.125;
  HyperbolicSpace H(dh, kh, static_cast<double>(r));
  const HPoint o = H.origin();
  HPacking hpk = ball_packing(H, o, r, max_count);

  SPDPacking out;
  out.target = hpk.target;
  out.truncated = hpk.truncated;
  SymEig e = jacobi_eigen(x_ref);
  Eigen::MatrixXd root = sym_apply(e, [](double v) { return std::sqrt(v); });
  for (const auto &z : hpk.points) {
    Eigen::VectorXd v = H.coords(o, H.log(o, z));
    Eigen::MatrixXd Q = sym_expm(spd_embed_tangent(n, v));
    out.points.push_back(symmetrize(root * Q * root));
  }
  const long double half = r / 2;
  long double mn = std::numeric_limits<long double>::infinity();
  if (hpk.all_pairs_checked) {
    for (std::size_t i = 0; i < out.points.size(); ++i)
      for (std::size_t j = i + 1; j < out.points.size(); ++j)
        mn = std::min(mn, S.dist(out.points[i], out.points[j]));
  } else {
    for (auto [i, j] : hpk.checked_pairs)
      mn = std::min(mn, S.dist(out.points[i], out.points[j]));
    mn = std::min(mn, hpk.far_pair_bound);
  }
  out.min_dist = mn;
  if (!(mn >= half * (1 - 1e-9L)))
    throw std::runtime_error("spd_ball_packing: pairwise separation r/2 violated in double precision");
  return out;
}

} // namespace resist
