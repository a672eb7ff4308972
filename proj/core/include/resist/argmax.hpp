#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace resist {

struct ArgmaxInput {
  // Ball centers in a common Euclidean chart, all with radius q.
  std::vector<Eigen::VectorXd> centers;
  double q = 0;
  // Enclosing ball B_k used for low-discrepancy sampling.
  Eigen::VectorXd enc_center;
  double enc_radius = 0;
  // Value mode: one closed interval per ball (empty = gradient mode).
  std::vector<std::pair<long double, long double>> intervals;
  int samples = 4096;
  std::uint64_t seed = 0;
  // Dense-grid refinement (d <= 3 only).
  bool refine = false;
  long cell_cap = 4000000;
  // Membership uses radius q * shrink so rounding never admits an
  // over-budget selection.
  double shrink = 1 - 1e-9;
};

struct ArgmaxResult {
  Eigen::VectorXd point;
  long double value = 0;
  std::vector<int> members; // ascending ball indices
  std::string source;       // center, midpoint, vertex, sample, grid
  std::size_t candidates = 0;
};

// Point of maximal membership over a composite candidate set: all centers,
// pairwise midpoints, circle-intersection vertices (d = 2), low-discrepancy
// samples of the enclosing ball and, when requested, a dense grid.
ArgmaxResult candidate_argmax(const ArgmaxInput &in);

// Membership of one point (and, in value mode, the best stabbing value).
ArgmaxResult evaluate_candidate(const ArgmaxInput &in, const Eigen::VectorXd &x);

// Exhaustive membership maximum over a grid of the given pitch covering the
// union of the balls (test oracle).
std::size_t grid_max_membership(const std::vector<Eigen::VectorXd> &centers, double q, double pitch);

} // namespace resist
