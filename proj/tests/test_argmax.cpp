#include "resist/argmax.hpp"
#include "resist/sphere.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace resist;
using namespace testutil;

TEST(Argmax, EmptyInputRejected) {
  ArgmaxInput in;
  in.q = 1;
  EXPECT_THROW(candidate_argmax(in), std::invalid_argument);
}

TEST(Argmax, MisalignedIntervalsRejected) {
  ArgmaxInput in;
  in.q = 1;
  in.centers = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)};
  in.intervals = {{0, 1}};
  EXPECT_THROW(candidate_argmax(in), std::invalid_argument);
}

TEST(Argmax, OneBallReturnsCenter) {
  ArgmaxInput in;
  in.q = 0.5;
  in.centers = {Eigen::Vector2d(3, -1)};
  const ArgmaxResult r = candidate_argmax(in);
  EXPECT_EQ(r.members, std::vector<int>{0});
  EXPECT_EQ(r.point, in.centers[0]);
  EXPECT_EQ(r.source, "center");
}

TEST(Argmax, TwoDisjointBallsReturnFirstCenter) {
  ArgmaxInput in;
  in.q = 0.5;
  in.centers = {Eigen::Vector2d(0, 0), Eigen::Vector2d(5, 0)};
  const ArgmaxResult r = candidate_argmax(in);
  EXPECT_EQ(r.members, std::vector<int>{0});
  EXPECT_EQ(r.point, in.centers[0]);
}

TEST(Argmax, OverlappingPairUsesMidpoint) {
  ArgmaxInput in;
  in.q = 1;
  in.centers = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1.5, 0)};
  const ArgmaxResult r = candidate_argmax(in);
  EXPECT_EQ(r.members, (std::vector<int>{0, 1}));
  EXPECT_EQ(r.source, "midpoint");
}

TEST(Argmax, TriangleNeedsVertex) {
  // three unit disks whose pairwise midpoints each miss the third disk but
  // share a common point near the centroid
  ArgmaxInput in;
  in.q = 1;
  const double s = 1.7;
  for (int i = 0; i < 3; ++i) {
    const double a = 2 * std::numbers::pi * i / 3;
    in.centers.push_back(Eigen::Vector2d(s / std::sqrt(3.0) * std::cos(a), s / std::sqrt(3.0) * std::sin(a)));
  }
  in.samples = 0;
  const ArgmaxResult r = candidate_argmax(in);
  EXPECT_EQ(r.members.size(), 3u);
}

TEST(Argmax, FourCompassBalls) {
  // gradients of four equidistant candidates seen from the reference point
  ArgmaxInput in;
  in.q = 0.3;
  in.centers = {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, -1)};
  in.enc_center = Eigen::Vector2d(0, 0);
  in.enc_radius = 1.3;
  const ArgmaxResult r = candidate_argmax(in);
  // no two balls intersect, so one survivor and an exact center
  EXPECT_EQ(r.members.size(), 1u);
  in.q = 0.75;
  const ArgmaxResult r2 = candidate_argmax(in);
  EXPECT_EQ(r2.members.size(), 2u);
  in.q = 1.01;
  const ArgmaxResult r3 = candidate_argmax(in);
  EXPECT_EQ(r3.members.size(), 4u);
  EXPECT_LT(r3.point.norm(), 0.2);
}

TEST(Argmax, ValueModeRequiresCommonValue) {
  ArgmaxInput in;
  in.q = 1;
  in.centers = {Eigen::Vector2d(0, 0), Eigen::Vector2d(0.1, 0), Eigen::Vector2d(0.2, 0)};
  in.intervals = {{0, 1}, {2, 3}, {0.5, 2.5}};
  const ArgmaxResult r = candidate_argmax(in);
  EXPECT_EQ(r.members.size(), 2u);
  for (int j : r.members) {
    EXPECT_LE(in.intervals[j].first, r.value);
    EXPECT_LE(r.value, in.intervals[j].second);
  }
}

TEST(Argmax, MembershipIsHonest) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    ArgmaxInput in;
    in.q = uniform(rng, 0.1, 0.8);
    for (int i = 0; i < 20; ++i)
      in.centers.push_back(gaussian(rng, 3) * 0.6);
    in.enc_center = Eigen::VectorXd::Zero(3);
    in.enc_radius = 2;
    in.samples = 512;
    in.seed = static_cast<std::uint64_t>(t);
    const ArgmaxResult r = candidate_argmax(in);
    ASSERT_GE(r.members.size(), 1u);
    for (std::size_t j = 0; j < in.centers.size(); ++j) {
      const bool inside = (in.centers[j] - r.point).norm() <= in.q;
      const bool listed = std::find(r.members.begin(), r.members.end(), static_cast<int>(j)) != r.members.end();
      if (listed)
        EXPECT_TRUE(inside);
    }
  }
}

TEST(Argmax, Deterministic) {
  Rng rng(2);
  ArgmaxInput in;
  in.q = 0.4;
  for (int i = 0; i < 30; ++i)
    in.centers.push_back(gaussian(rng, 2));
  in.enc_center = Eigen::VectorXd::Zero(2);
  in.enc_radius = 3;
  const ArgmaxResult a = candidate_argmax(in), b = candidate_argmax(in);
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.members, b.members);
}

TEST(Argmax, VolumeFloorUnderRefinement) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    ArgmaxInput in;
    const int n = 12;
    const double rr = 1.0;
    in.q = uniform(rng, 0.15, 0.6);
    for (int i = 0; i < n; ++i)
      in.centers.push_back(unit(rng, 2) * std::sqrt(uniform(rng, 0, 1)) * rr);
    in.enc_center = Eigen::VectorXd::Zero(2);
    in.enc_radius = rr + in.q;
    in.refine = true;
    in.samples = 256;
    const ArgmaxResult r = candidate_argmax(in);
    const double enc = rr + in.q;
    EXPECT_GE(static_cast<double>(r.members.size()), std::ceil(n * in.q * in.q / (enc * enc) - 1e-12));
    EXPECT_GE(r.members.size() + 0, grid_max_membership(in.centers, in.q * in.shrink, in.q / 20))
        << "refined search below the exhaustive grid";
  }
}

TEST(Halton, LowDiscrepancySamplesInBall) {
  const auto pts = ball_samples(3, 1000, 7);
  EXPECT_EQ(pts.size(), 1000u);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (const auto &p : pts) {
    EXPECT_LE(p.norm(), 1.0);
    mean += p;
  }
  EXPECT_LT((mean / 1000).norm(), 0.02);
  EXPECT_EQ(halton(1, 0), 0.5);
  EXPECT_NEAR(halton(1, 1), 1.0 / 3, 1e-16);
}
