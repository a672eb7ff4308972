#include "resist/hyperbolic.hpp"

#include "resist/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace resist {

namespace {

constexpr long kTranscendentalBits = 160;

using Vec = std::vector<hp::Real>;

// acosh(1 + delta) / sqrt(delta (2 + delta)) and acosh(1 + delta), delta >= 0,
// at reduced precision; the argument itself carries no cancellation.
struct AcoshParts {
  hp::Real acosh;
  hp::Real ratio;
};

AcoshParts acosh_parts(const hp::Real &delta) {
  hp::Precision p(kTranscendentalBits);
  AcoshParts out;
  if (delta.sign() <= 0) {
    out.acosh = hp::Real(0);
    out.ratio = hp::Real(1);
    return out;
  }
  hp::Real dd = hp::rounded(delta, kTranscendentalBits);
  hp::Real root = hp::sqrt(dd * (dd + 2.0));
  out.acosh = hp::log1p(dd + root);
  out.ratio = out.acosh / root;
  return out;
}

// Copy of y at the current working precision, rescaled onto the hyperboloid.
// Long steps amplify the normal component of stored rounding error, so
// exp and log renormalize their inputs at a guard precision first.
Vec on_sheet(const Vec &y, double K) {
  Vec out;
  out.reserve(y.size());
  const long bl = hp::working_bits();
  for (const auto &c : y)
    out.push_back(hp::rounded(c, bl));
  hp::Real n2 = -(out[0] * out[0]);
  for (std::size_t i = 1; i < out.size(); ++i)
    n2 += out[i] * out[i];
  const hp::Real inv = hp::Real(1) / hp::sqrt(n2 * K);
  for (auto &c : out)
    c = c * inv;
  return out;
}

} // namespace

HyperbolicSpace::HyperbolicSpace(int d, double K, double reach) : d_(d), K_(K), reach_(reach) {
  if (d < 2)
    throw std::invalid_argument("hyperbolic space: dimension must be >= 2");
  if (!(K < 0))
    throw std::invalid_argument("hyperbolic space: curvature must be negative");
  if (!(reach > 0))
    throw std::invalid_argument("hyperbolic space: reach must be positive");
  sk_ = std::sqrt(static_cast<long double>(-K));
  const double need = std::ceil(2.0 * reach * static_cast<double>(sk_) / std::numbers::ln2) + 96;
  bits_ = std::max(128L, static_cast<long>(need));
}

hp::Real HyperbolicSpace::minkowski(const Vec &u, const Vec &v) const {
  hp::Real s = -(u[0] * v[0]);
  for (int i = 1; i <= d_; ++i)
    s += u[i] * v[i];
  return s;
}

void HyperbolicSpace::check_reach(const Vec &x) const {
  const long limit = (bits_ - 64) / 2;
  for (const auto &c : x) {
    if (!c.is_finite())
      throw OverflowError("hyperbolic point is not finite");
    if (c.exponent() > limit)
      throw OverflowError("hyperbolic point beyond the configured reach " + std::to_string(reach_) +
                          "; construct the space with a larger reach");
  }
}

HPoint HyperbolicSpace::normalized(Vec y) const {
  hp::Precision p(bits_);
  hp::Real n2 = minkowski(y, y) * K_;
  if (n2.sign() <= 0 || y[0].sign() <= 0)
    throw InvariantError("vector is not on the upper sheet of the hyperboloid");
  hp::Real inv = hp::Real(1) / hp::sqrt(n2);
  for (auto &c : y)
    c = c * inv;
  check_reach(y);
  return HPoint{std::move(y)};
}

HPoint HyperbolicSpace::origin() const {
  hp::Precision p(bits_);
  Vec x(d_ + 1);
  x[0] = hp::Real(1) / hp::sqrt(hp::Real(-K_));
  return HPoint{std::move(x)};
}

HPoint HyperbolicSpace::point(const Vec &ambient) const {
  if (static_cast<int>(ambient.size()) != d_ + 1)
    throw std::invalid_argument("hyperbolic point: wrong number of coordinates");
  hp::Precision p(bits_);
  Vec y;
  y.reserve(ambient.size());
  for (const auto &c : ambient)
    y.push_back(hp::rounded(c, bits_));
  return normalized(std::move(y));
}

HTangent HyperbolicSpace::tangent(const Vec &ambient) const {
  if (static_cast<int>(ambient.size()) != d_ + 1)
    throw std::invalid_argument("hyperbolic tangent: wrong number of coordinates");
  HTangent v;
  for (const auto &c : ambient)
    v.c.push_back(hp::rounded(c, bits_));
  return v;
}

long double HyperbolicSpace::dist(const HPoint &x, const HPoint &y) const {
  hp::Real delta;
  {
    hp::Precision p(bits_);
    delta = minkowski(x.c, y.c) * K_ - 1.0;
  }
  if (delta.d() < -1e-9)
    throw InvariantError("arccosh argument below 1: points off the hyperboloid");
  if (same_point(x, y))
    return 0.0L;
  return acosh_parts(delta).acosh.ld() / sk_;
}

bool HyperbolicSpace::dist_less(const HPoint &x, const HPoint &y, long double R) const {
  if (!(R > 0))
    return false;
  const long double h = std::sinh(R * sk_ / 2);
  const long double threshold = 2 * h * h;
  if (!std::isfinite(threshold))
    return true;
  hp::Precision p(bits_);
  hp::Real delta = minkowski(x.c, y.c) * K_ - 1.0;
  return delta < hp::Real(threshold);
}

HPoint HyperbolicSpace::exp(const HPoint &x, const HTangent &v) const {
  long double t;
  hp::Real nv;
  {
    hp::Precision p(bits_);
    hp::Real n2 = minkowski(v.c, v.c);
    if (n2.sign() <= 0)
      return x;
    nv = hp::sqrt(n2);
    t = nv.ld() * sk_;
  }
  if (t > 2.0L * reach_ * sk_ + 64)
    throw OverflowError("exp step of length " + std::to_string(static_cast<double>(t / sk_)) +
                        " leaves the configured reach");
  // cosh(t) x and sinh(t) v cancel down to the result: the guard and the
  // precision of cosh cover the growth of the step and the size of x.
  const long bx = std::max(0L, x.c[0].exponent());
  const long bl = bits_ + static_cast<long>(std::ceil(1.45L * t)) + bx + 64;
  hp::Precision p(bl);
  const Vec xc = on_sheet(x.c, K_);
  Vec vc(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    vc[i] = hp::rounded(v.c[i], bl);
  const hp::Real off = minkowski(xc, vc) * K_;
  for (int i = 0; i <= d_; ++i)
    vc[i] -= off * xc[i];
  const hp::Real nt = hp::sqrt(minkowski(vc, vc));
  const long bt = std::min(bl, static_cast<long>(std::ceil(2.9L * t)) + 2 * bx + 128);
  hp::Real ch, sh_over_t;
  {
    hp::Precision q(bt);
    const hp::Real tt = hp::rounded(nt, bt) * hp::sqrt(hp::Real(-K_));
    ch = hp::cosh(tt);
    sh_over_t = hp::sinh(tt) / tt;
  }
  Vec y(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    y[i] = ch * xc[i] + sh_over_t * vc[i];
  hp::Real inv = hp::Real(1) / hp::sqrt(minkowski(y, y) * K_);
  hp::Precision q(bits_);
  for (auto &c : y)
    c = hp::rounded(c * inv, bits_);
  return normalized(std::move(y));
}

HTangent HyperbolicSpace::log(const HPoint &x, const HPoint &y) const {
  if (same_point(x, y))
    return zero(x);
  const long bl = bits_ + 64;
  hp::Precision p(bl);
  const Vec xc = on_sheet(x.c, K_), yc = on_sheet(y.c, K_);
  const hp::Real c = minkowski(xc, yc) * K_;
  const hp::Real delta = c - 1.0;
  if (delta.d() < -1e-9)
    throw InvariantError("arccosh argument below 1: points off the hyperboloid");
  if (delta.sign() <= 0)
    return zero(x);
  AcoshParts a = acosh_parts(delta);
  HTangent u;
  u.c.resize(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    u.c[i] = hp::rounded((yc[i] - c * xc[i]) * a.ratio, bits_);
  return u;
}

HTangent HyperbolicSpace::transport(const HPoint &x, const HPoint &y, const HTangent &v) const {
  if (same_point(x, y))
    return v;
  hp::Precision p(bits_);
  hp::Real coef = minkowski(y.c, v.c) * K_ / (minkowski(x.c, y.c) * K_ + 1.0);
  HTangent w;
  w.c.resize(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    w.c[i] = v.c[i] - coef * (x.c[i] + y.c[i]);
  hp::Real back = minkowski(y.c, w.c) * K_;
  for (int i = 0; i <= d_; ++i)
    w.c[i] -= back * y.c[i];
  return w;
}

HPoint HyperbolicSpace::project_ball(const HPoint &center, long double radius,
                                     const HPoint &y) const {
  if (!(radius > 0))
    throw std::invalid_argument("project_ball: radius must be positive");
  const long double dd = dist(center, y);
  if (dd <= radius)
    return y;
  HTangent u = log(center, y);
  return exp(center, scale(u, hp::Real(radius) / hp::Real(dd)));
}

long double HyperbolicSpace::inner(const HPoint &, const HTangent &u, const HTangent &v) const {
  hp::Precision p(bits_);
  return minkowski(u.c, v.c).ld();
}

long double HyperbolicSpace::norm(const HPoint &, const HTangent &v) const {
  hp::Precision p(bits_);
  hp::Real n2 = minkowski(v.c, v.c);
  if (n2.sign() <= 0)
    return 0.0L;
  return hp::sqrt(n2).ld();
}

HTangent HyperbolicSpace::zero(const HPoint &) const {
  hp::Precision p(bits_);
  return HTangent{Vec(d_ + 1)};
}

HTangent HyperbolicSpace::add(const HTangent &u, const HTangent &v) const {
  hp::Precision p(bits_);
  HTangent w;
  w.c.reserve(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    w.c.push_back(u.c[i] + v.c[i]);
  return w;
}

HTangent HyperbolicSpace::sub(const HTangent &u, const HTangent &v) const {
  hp::Precision p(bits_);
  HTangent w;
  w.c.reserve(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    w.c.push_back(u.c[i] - v.c[i]);
  return w;
}

HTangent HyperbolicSpace::scale(const HTangent &v, long double a) const {
  hp::Precision p(bits_);
  return scale(v, hp::Real(a));
}

HTangent HyperbolicSpace::scale(const HTangent &v, const hp::Real &a) const {
  hp::Precision p(bits_);
  HTangent w;
  w.c.reserve(d_ + 1);
  for (int i = 0; i <= d_; ++i)
    w.c.push_back(v.c[i] * a);
  return w;
}

std::vector<hp::Real> HyperbolicSpace::coords_mp(const HPoint &x, const HTangent &v) const {
  hp::Precision p(bits_);
  hp::Real sk = hp::sqrt(hp::Real(-K_));
  hp::Real f = sk * v.c[0] / (sk * x.c[0] + 1.0);
  Vec c(d_);
  for (int i = 0; i < d_; ++i)
    c[i] = v.c[i + 1] - f * x.c[i + 1];
  return c;
}

Eigen::VectorXd HyperbolicSpace::coords(const HPoint &x, const HTangent &v) const {
  Vec c = coords_mp(x, v);
  Eigen::VectorXd out(d_);
  for (int i = 0; i < d_; ++i)
    out[i] = c[i].d();
  return out;
}

HTangent HyperbolicSpace::from_coords_mp(const HPoint &x, const Vec &c) const {
  if (static_cast<int>(c.size()) != d_)
    throw std::invalid_argument("from_coords: wrong number of coordinates");
  hp::Precision p(bits_);
  hp::Real sk = hp::sqrt(hp::Real(-K_));
  hp::Real s;
  for (int i = 0; i < d_; ++i)
    s += c[i] * x.c[i + 1];
  hp::Real f = s * hp::Real(-K_) / (sk * x.c[0] + 1.0);
  HTangent v;
  v.c.resize(d_ + 1);
  v.c[0] = f * (x.c[0] + hp::Real(1) / sk);
  for (int i = 0; i < d_; ++i)
    v.c[i + 1] = c[i] + f * x.c[i + 1];
  return v;
}

HTangent HyperbolicSpace::from_coords(const HPoint &x, const Eigen::VectorXd &c) const {
  hp::Precision p(bits_);
  Vec cc;
  cc.reserve(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i)
    cc.emplace_back(c[i]);
  return from_coords_mp(x, cc);
}

bool HyperbolicSpace::same_point(const HPoint &x, const HPoint &y) const {
  for (int i = 0; i <= d_; ++i)
    if (x.c[i] != y.c[i])
      return false;
  return true;
}

long double HyperbolicSpace::point_residual(const HPoint &x) const {
  hp::Precision p(bits_);
  return hp::abs(minkowski(x.c, x.c) * K_ - 1.0).ld();
}

long double HyperbolicSpace::tangent_residual(const HPoint &x, const HTangent &v) const {
  hp::Precision p(bits_);
  const long double nv = norm(x, v);
  if (nv == 0)
    return 0.0L;
  return hp::abs(minkowski(x.c, v.c)).ld() * sk_ / nv;
}

nlohmann::json HyperbolicSpace::descriptor() const {
  return {{"manifold", "hyperbolic"}, {"d", d_}, {"K", K_}, {"reach", reach_}};
}

nlohmann::json HyperbolicSpace::to_json(const HPoint &x) const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &c : x.c)
    j.push_back(c.str());
  return j;
}

nlohmann::json HyperbolicSpace::to_json(const HTangent &v) const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &c : v.c)
    j.push_back(c.str());
  return j;
}

namespace {
Vec parse_reals(const nlohmann::json &j, long bits) {
  hp::Precision p(bits);
  Vec out;
  for (const auto &e : j) {
    if (e.is_string())
      out.emplace_back(e.get<std::string>());
    else
      out.emplace_back(e.get<double>());
  }
  return out;
}
} // namespace

HPoint HyperbolicSpace::point_from_json(const nlohmann::json &j) const {
  Vec c = parse_reals(j, bits_);
  if (static_cast<int>(c.size()) != d_ + 1)
    throw std::invalid_argument("hyperbolic point: wrong number of coordinates");
  check_reach(c);
  return HPoint{std::move(c)};
}

HTangent HyperbolicSpace::tangent_from_json(const nlohmann::json &j) const {
  Vec c = parse_reals(j, bits_);
  if (static_cast<int>(c.size()) != d_ + 1)
    throw std::invalid_argument("hyperbolic tangent: wrong number of coordinates");
  return HTangent{std::move(c)};
}

long double geodesics_diverge_gap(const HyperbolicSpace &H, const HPoint &x, long double s) {
  const long double sk = H.sqrt_neg_k();
  if (!(s * sk >= 3))
    throw std::invalid_argument("geodesics_diverge_gap: requires s sqrt(-K) >= 3");
  hp::Precision p(H.bits());
  hp::Real theta = hp::exp(hp::Real(1) - hp::Real(s) * hp::sqrt(hp::Real(-H.curvature())) * (2.0 / 3.0));
  Vec c1(H.dim()), c2(H.dim());
  c1[0] = hp::Real(s);
  c2[0] = hp::Real(s) * hp::cos(theta);
  c2[1] = hp::Real(s) * hp::sin(theta);
  HPoint z1 = H.exp(x, H.from_coords_mp(x, c1));
  HPoint z2 = H.exp(x, H.from_coords_mp(x, c2));
  return H.dist(z1, z2);
}

namespace {

// Lattice points of Z^m ordered by norm then lexicographically, first n.
std::vector<std::vector<int>> nearest_lattice_points(int m, std::size_t n) {
  std::vector<std::vector<int>> pts;
  int rad = 0;
  while (true) {
    pts.clear();
    std::vector<int> v(m, -rad);
    while (true) {
      pts.push_back(v);
      int i = 0;
      while (i < m && v[i] == rad)
        v[i++] = -rad;
      if (i == m)
        break;
      ++v[i];
    }
    std::size_t inside = 0;
    for (const auto &q : pts) {
      long n2 = 0;
      for (int a : q)
        n2 += static_cast<long>(a) * a;
      if (n2 <= static_cast<long>(rad) * rad)
        ++inside;
    }
    if (inside >= n)
      break;
    ++rad;
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto &a, const auto &b) {
    long na = 0, nb = 0;
    for (int v : a)
      na += static_cast<long>(v) * v;
    for (int v : b)
      nb += static_cast<long>(v) * v;
    if (na != nb)
      return na < nb;
    return a < b;
  });
  pts.resize(n);
  return pts;
}

} // namespace

HPacking ball_packing(const HyperbolicSpace &H, const HPoint &x_ref, long double r,
                      std::size_t max_count) {
  const long double sk = H.sqrt_neg_k();
  const int d = H.dim();
  if (!(r * sk >= 4 - 1e-12L))
    throw std::invalid_argument("ball_packing: requires r >= 4 / sqrt(-K)");
  const long double s = 0.75L * r;
  const long double half = r / 2;
  const long double log_target = static_cast<long double>(d) / 8 * r * sk;

  HPacking out;
  out.theta = std::exp(1 - 2.0L / 3 * s * sk);
  const bool cluster = max_count > 0 && log_target > std::log(static_cast<long double>(max_count));
  out.target = log_target < 60 ? static_cast<std::size_t>(std::ceil(std::exp(log_target) - 1e-12L))
                               : std::numeric_limits<std::size_t>::max();

  hp::Precision p(H.bits());
  if (cluster) {
    out.truncated = true;
    const auto lattice = nearest_lattice_points(d - 1, max_count);
    hp::Real theta = hp::exp(hp::Real(1) - hp::Real(s) * hp::sqrt(hp::Real(-H.curvature())) * (2.0 / 3.0));
    for (int attempt = 0; attempt < 50; ++attempt) {
      hp::Real step = theta * (1.0 + 0.02 * attempt);
      out.points.clear();
      for (const auto &q : lattice) {
        hp::Real rho2;
        for (int a : q)
          rho2 += hp::Real(a) * hp::Real(a);
        std::vector<hp::Real> c(d);
        if (rho2.is_zero()) {
          c[0] = hp::Real(s);
        } else {
          hp::Real rho = hp::sqrt(rho2) * step;
          hp::Real sr = hp::sin(rho) / hp::sqrt(rho2);
          c[0] = hp::Real(s) * hp::cos(rho);
          for (int i = 1; i < d; ++i)
            c[i] = hp::Real(s) * sr * hp::Real(q[i - 1]);
        }
        out.points.push_back(H.exp(x_ref, H.from_coords_mp(x_ref, c)));
      }
      long double mn = std::numeric_limits<long double>::infinity();
      for (std::size_t i = 0; i < out.points.size(); ++i)
        for (std::size_t j = i + 1; j < out.points.size(); ++j)
          mn = std::min(mn, H.dist(out.points[i], out.points[j]));
      out.min_dist = mn;
      if (mn >= half)
        return out;
    }
    throw std::runtime_error("ball_packing: cluster spacing could not be verified");
  }

  long double theta_used;
  if (d == 2)
    theta_used = std::max(out.theta, std::min(std::numbers::pi_v<long double> / 2,
                                              2 * std::numbers::pi_v<long double> / out.target));
  else
    theta_used = std::max(out.theta, std::min(std::numbers::pi_v<long double> / 2,
                                              std::pow(static_cast<long double>(out.target),
                                                       -1.0L / (d - 1))));
  const auto dirs = sphere_net(d, static_cast<double>(theta_used), out.target);
  for (const auto &u : dirs)
    out.points.push_back(H.exp(x_ref, H.from_coords(x_ref, static_cast<double>(s) * u)));

  // Distance of two points at radius s is increasing in their angle; pairs
  // whose directions are farther apart than the chord h need no check.
  long double mn = std::numeric_limits<long double>::infinity();
  const std::size_t n = out.points.size();
  if (n <= 1500) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        mn = std::min(mn, H.dist(out.points[i], out.points[j]));
  } else {
    hp::Real sks = hp::Real(s) * hp::sqrt(hp::Real(-H.curvature()));
    hp::Real sh = hp::sinh(sks);
    hp::Real cos_star = (hp::cosh(sks) * hp::cosh(sks) - hp::cosh(hp::Real(half * sk))) / (sh * sh);
    const double alpha_star = std::acos(std::clamp(cos_star.d(), -1.0, 1.0));
    const double h = std::max(2 * std::sin(alpha_star / 2) * 1.01, 1e-9);
    out.all_pairs_checked = false;
    out.checked_pairs = close_pairs(dirs, h);
    for (auto [i, j] : out.checked_pairs)
      mn = std::min(mn, H.dist(out.points[i], out.points[j]));
    hp::Real ca(std::cos(2 * std::asin(std::min(1.0, h / 2))));
    hp::Real cd = hp::cosh(sks) * hp::cosh(sks) - sh * sh * ca;
    out.far_pair_bound = hp::log(cd + hp::sqrt(cd * cd - 1.0)).ld() / sk;
    mn = std::min(mn, out.far_pair_bound);
  }
  out.min_dist = mn;
  if (!(mn >= half))
    throw std::runtime_error("ball_packing: pairwise separation r/2 violated");
  return out;
}

} // namespace resist
