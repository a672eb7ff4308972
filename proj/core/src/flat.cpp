#include "resist/flat.hpp"

#include <cmath>
#include <stdexcept>

namespace resist {

FlatSpace::FlatSpace(int d) : d_(d) {
  if (d < 1)
    throw std::invalid_argument("flat space: dimension must be >= 1");
}

long double FlatSpace::dist(const Point &x, const Point &y) const {
  long double s = 0;
  for (int i = 0; i < d_; ++i) {
    const long double t = static_cast<long double>(x[i]) - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

FlatSpace::Point FlatSpace::project_ball(const Point &center, long double radius, const Point &y) const {
  const long double dd = dist(center, y);
  if (dd <= radius)
    return y;
  return center + (y - center) * static_cast<double>(radius / dd);
}

long double FlatSpace::inner(const Point &, const Tangent &u, const Tangent &v) const {
  long double s = 0;
  for (int i = 0; i < d_; ++i)
    s += static_cast<long double>(u[i]) * v[i];
  return s;
}

long double FlatSpace::norm(const Point &x, const Tangent &v) const { return std::sqrt(inner(x, v, v)); }

nlohmann::json FlatSpace::descriptor() const { return {{"manifold", "flat"}, {"d", d_}}; }

nlohmann::json FlatSpace::to_json(const Eigen::VectorXd &v) const {
  nlohmann::json j = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i)
    j.push_back(v[i]);
  return j;
}

Eigen::VectorXd FlatSpace::point_from_json(const nlohmann::json &j) const {
  if (j.size() != static_cast<std::size_t>(d_))
    throw std::invalid_argument("flat point: wrong number of coordinates");
  Eigen::VectorXd v(d_);
  for (int i = 0; i < d_; ++i)
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

} // namespace resist
