#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace resist {

// Component `axis` of the Halton point with the given index, in [0, 1).
double halton(std::uint64_t index, int axis);
Eigen::VectorXd halton_point(std::uint64_t index, int dim);

// Deterministic quasi-uniform points of the unit ball in R^dim (rejection
// from the cube), starting from sequence offset `seed`.
std::vector<Eigen::VectorXd> ball_samples(int dim, std::size_t count, std::uint64_t seed = 0);

// Unit vectors in R^d with pairwise angle >= theta and at least
// ceil(theta^-(d-1)) members. d = 2 uses equally spaced directions; d >= 3
// inserts quasi-uniform sphere samples greedily. Stops early once `stop_at`
// vectors are accepted (0 = no early stop).
std::vector<Eigen::VectorXd> sphere_net(int d, double theta, std::size_t stop_at = 0);

std::size_t sphere_net_min_count(int d, double theta);

// Smallest pairwise angle of a set of unit vectors (brute force).
double min_pairwise_angle(const std::vector<Eigen::VectorXd> &dirs);

// Pairs (i < j) of points whose Euclidean distance is below h; points far
// apart in every cell neighbourhood are skipped. Uses a hash grid of pitch h.
std::vector<std::pair<int, int>> close_pairs(const std::vector<Eigen::VectorXd> &pts, double h);

} // namespace resist
