#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <concepts>

namespace resist {

template <class M>
concept Manifold = requires(const M &m, const typename M::Point &x, const typename M::Tangent &v,
                            long double a, const Eigen::VectorXd &c, const nlohmann::json &j) {
  { m.dim() } -> std::convertible_to<int>;
  { m.sqrt_neg_k() } -> std::convertible_to<long double>;
  { m.origin() } -> std::same_as<typename M::Point>;
  { m.dist(x, x) } -> std::convertible_to<long double>;
  { m.dist_less(x, x, a) } -> std::convertible_to<bool>;
  { m.exp(x, v) } -> std::same_as<typename M::Point>;
  { m.log(x, x) } -> std::same_as<typename M::Tangent>;
  { m.transport(x, x, v) } -> std::same_as<typename M::Tangent>;
  { m.project_ball(x, a, x) } -> std::same_as<typename M::Point>;
  { m.inner(x, v, v) } -> std::convertible_to<long double>;
  { m.norm(x, v) } -> std::convertible_to<long double>;
  { m.zero(x) } -> std::same_as<typename M::Tangent>;
  { m.add(v, v) } -> std::same_as<typename M::Tangent>;
  { m.sub(v, v) } -> std::same_as<typename M::Tangent>;
  { m.scale(v, a) } -> std::same_as<typename M::Tangent>;
  { m.coords(x, v) } -> std::convertible_to<Eigen::VectorXd>;
  { m.from_coords(x, c) } -> std::same_as<typename M::Tangent>;
  { m.same_point(x, x) } -> std::convertible_to<bool>;
  { m.descriptor() } -> std::convertible_to<nlohmann::json>;
  { m.to_json(x) } -> std::convertible_to<nlohmann::json>;
  { m.point_from_json(j) } -> std::same_as<typename M::Point>;
  { m.tangent_from_json(j) } -> std::same_as<typename M::Tangent>;
};

} // namespace resist
