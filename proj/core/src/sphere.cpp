#include "resist/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace resist {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

class Grid {
public:
  Grid(int dim, double h) : dim_(dim), h_(h) {}

  void insert(const Eigen::VectorXd &p, int id) { cells_[key(cell_of(p))].push_back(id); }

  template <class F> void for_neighbours(const Eigen::VectorXd &p, F &&f) const {
    std::vector<long> base = cell_of(p);
    std::vector<long> c(dim_);
    std::vector<int> off(dim_, -1);
    while (true) {
      for (int i = 0; i < dim_; ++i)
        c[i] = base[i] + off[i];
      auto it = cells_.find(key(c));
      if (it != cells_.end())
        for (int id : it->second)
          if (!f(id))
            return;
      int i = 0;
      while (i < dim_ && off[i] == 1)
        off[i++] = -1;
      if (i == dim_)
        break;
      ++off[i];
    }
  }

private:
  std::vector<long> cell_of(const Eigen::VectorXd &p) const {
    std::vector<long> c(dim_);
    for (int i = 0; i < dim_; ++i)
      c[i] = static_cast<long>(std::floor(p[i] / h_));
    return c;
  }
  static std::uint64_t key(const std::vector<long> &c) {
    std::uint64_t k = 1469598103934665603ULL;
    for (long v : c) {
      k ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (k << 6) + (k >> 2);
      k *= 1099511628211ULL;
    }
    return k;
  }

  int dim_;
  double h_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

constexpr int kMaxGridDim = 6;

} // namespace

double halton(std::uint64_t index, int axis) {
  if (axis < 0 || axis >= static_cast<int>(std::size(kPrimes)))
    throw std::invalid_argument("halton: axis out of range");
  const std::uint64_t b = kPrimes[axis];
  double f = 1.0, r = 0.0;
  std::uint64_t i = index;
  while (i > 0) {
    f /= static_cast<double>(b);
    r += f * static_cast<double>(i % b);
    i /= b;
  }
  return r;
}

Eigen::VectorXd halton_point(std::uint64_t index, int dim) {
  Eigen::VectorXd p(dim);
  for (int a = 0; a < dim; ++a)
    p[a] = halton(index, a);
  return p;
}

std::vector<Eigen::VectorXd> ball_samples(int dim, std::size_t count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (std::uint64_t i = seed + 1; out.size() < count; ++i) {
    Eigen::VectorXd p = 2.0 * halton_point(i, dim) - Eigen::VectorXd::Ones(dim);
    if (p.squaredNorm() <= 1.0)
      out.push_back(std::move(p));
  }
  return out;
}

std::size_t sphere_net_min_count(int d, double theta) {
  return static_cast<std::size_t>(std::ceil(std::pow(theta, -(d - 1)) * (1 - 1e-12)));
}

std::vector<Eigen::VectorXd> sphere_net(int d, double theta, std::size_t stop_at) {
  if (d < 2)
    throw std::invalid_argument("sphere_net: dimension must be >= 2");
  if (!(theta > 0) || theta > std::numbers::pi / 2 + 1e-15)
    throw std::invalid_argument("sphere_net: theta must lie in (0, pi/2]");
  const std::size_t target = sphere_net_min_count(d, theta);
  std::vector<Eigen::VectorXd> net;

  if (d == 2) {
    auto n = static_cast<std::size_t>(std::floor(2 * std::numbers::pi / theta + 1e-9));
    if (stop_at > 0)
      n = std::min(n, std::max(stop_at, target));
    for (std::size_t k = 0; k < n; ++k) {
      const double a = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      Eigen::VectorXd u(2);
      u << std::cos(a), std::sin(a);
      net.push_back(u);
    }
  } else {
    // chord with a small safety factor so rounding never admits an angle < theta
    const double chord = 2 * std::sin(theta / 2) * (1 + 1e-12);
    const double chord2 = chord * chord;
    const std::size_t samples =
        std::clamp<std::size_t>(200 * target, 20000, std::size_t{1} << 22);
    const bool use_grid = d <= kMaxGridDim;
    Grid grid(d, chord);
    std::uint64_t idx = 1;
    for (std::size_t taken = 0; taken < samples; ++idx) {
      Eigen::VectorXd p = 2.0 * halton_point(idx, d) - Eigen::VectorXd::Ones(d);
      const double n2 = p.squaredNorm();
      if (n2 > 1.0 || n2 < 1e-6)
        continue;
      ++taken;
      p /= std::sqrt(n2);
      bool ok = true;
      auto check = [&](int id) {
        if ((net[id] - p).squaredNorm() < chord2) {
          ok = false;
          return false;
        }
        return true;
      };
      if (use_grid) {
        grid.for_neighbours(p, check);
      } else {
        for (int id = 0; id < static_cast<int>(net.size()) && ok; ++id)
          check(id);
      }
      if (!ok)
        continue;
      if (use_grid)
        grid.insert(p, static_cast<int>(net.size()));
      net.push_back(std::move(p));
      if (stop_at > 0 && net.size() >= stop_at)
        break;
    }
  }
  if (net.size() < target)
    throw std::runtime_error("sphere_net: produced " + std::to_string(net.size()) +
                             " vectors, below the required " + std::to_string(target));
  return net;
}

double min_pairwise_angle(const std::vector<Eigen::VectorXd> &dirs) {
  double best = std::numbers::pi;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      // atan2 form is accurate for tiny and near-pi angles alike
      const double s = (dirs[i] - dirs[j]).norm();
      const double c = (dirs[i] + dirs[j]).norm();
      best = std::min(best, 2 * std::atan2(s, c));
    }
  return best;
}

std::vector<std::pair<int, int>> close_pairs(const std::vector<Eigen::VectorXd> &pts, double h) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(pts.size());
  if (n == 0)
    return out;
  const int dim = static_cast<int>(pts[0].size());
  if (dim > kMaxGridDim) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        out.emplace_back(i, j);
    return out;
  }
  Grid grid(dim, h);
  for (int i = 0; i < n; ++i)
    grid.insert(pts[i], i);
  for (int i = 0; i < n; ++i)
    grid.for_neighbours(pts[i], [&](int j) {
      if (j > i)
        out.emplace_back(i, j);
      return true;
    });
  return out;
}

} // namespace resist
