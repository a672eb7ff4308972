#include "resist/argmax.hpp"
#include "resist/bump.hpp"
#include "resist/hyperbolic.hpp"
#include "resist/oracle.hpp"
#include "resist/spd.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace resist;

namespace {

HPoint point_at(const HyperbolicSpace &H, double t, double angle) {
  const HPoint o = H.origin();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(H.dim());
  v[0] = t * std::cos(angle);
  v[1] = t * std::sin(angle);
  return H.exp(o, H.from_coords(o, v));
}

void BM_HyperbolicDist(benchmark::State &st) {
  const double reach = static_cast<double>(st.range(0));
  HyperbolicSpace H(2, -1.0, reach);
  const HPoint x = point_at(H, 0.4 * reach, 0.3), y = point_at(H, 0.5 * reach, 2.0);
  for (auto _ : st)
    benchmark::DoNotOptimize(H.dist(x, y));
}
BENCHMARK(BM_HyperbolicDist)->Arg(16)->Arg(128)->Arg(1024);

void BM_HyperbolicExpLog(benchmark::State &st) {
  const double reach = static_cast<double>(st.range(0));
  HyperbolicSpace H(2, -1.0, reach);
  const HPoint x = point_at(H, 0.4 * reach, 0.3), y = point_at(H, 0.5 * reach, 2.0);
  for (auto _ : st) {
    const HTangent v = H.log(x, y);
    benchmark::DoNotOptimize(H.exp(x, v));
  }
}
BENCHMARK(BM_HyperbolicExpLog)->Arg(16)->Arg(128)->Arg(1024);

void BM_SPDDist(benchmark::State &st) {
  const int n = static_cast<int>(st.range(0));
  SPDSpace S(n, false);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0, 1);
  auto rnd = [&] {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n * n; ++i)
      A.data()[i] = N(rng);
    return Eigen::MatrixXd(A * A.transpose() + Eigen::MatrixXd::Identity(n, n));
  };
  const Eigen::MatrixXd A = rnd(), B = rnd();
  for (auto _ : st)
    benchmark::DoNotOptimize(S.dist(A, B));
}
BENCHMARK(BM_SPDDist)->Arg(3)->Arg(8);

void BM_BumpEval(benchmark::State &st) {
  HyperbolicSpace H(2, -1.0, 40);
  const HPoint x = point_at(H, 3, 0.5);
  const long double R = 2, w = 4;
  const HTangent g = H.from_coords(x, Eigen::Vector2d(0.5, 0.5).normalized() * 0.5 *
                                         static_cast<double>(gradient_budget(H, R, w)));
  const Bump<HyperbolicSpace> b = bump_from_gradient(H, x, R, w, g);
  const HPoint y = point_at(H, 3.3, 0.6);
  for (auto _ : st)
    benchmark::DoNotOptimize(bump_eval(H, b, y).f);
}
BENCHMARK(BM_BumpEval);

void BM_CandidateArgmax(benchmark::State &st) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  ArgmaxInput in;
  in.q = 0.3;
  for (int i = 0; i < st.range(0); ++i)
    in.centers.push_back(Eigen::Vector2d(U(rng), U(rng)) * 0.7);
  in.enc_center = Eigen::VectorXd::Zero(2);
  in.enc_radius = 1.3;
  in.samples = 1024;
  for (auto _ : st)
    benchmark::DoNotOptimize(candidate_argmax(in).members.size());
}
BENCHMARK(BM_CandidateArgmax)->Arg(8)->Arg(32)->Arg(64);

void BM_OracleAnswer(benchmark::State &st) {
  const double r = 64;
  HyperbolicSpace H(2, -1.0, 2 * r);
  OracleConfig<HyperbolicSpace> cfg;
  cfg.x_ref = H.origin();
  cfg.r = r;
  cfg.Rcal = r;
  cfg.w = 2;
  cfg.samples = 512;
  cfg.candidates = ball_packing(H, cfg.x_ref, r, static_cast<std::size_t>(st.range(0))).points;
  int k = 0;
  for (auto _ : st) {
    st.PauseTiming();
    Oracle<HyperbolicSpace> o(H, cfg);
    st.ResumeTiming();
    for (int i = 0; i < 8; ++i)
      benchmark::DoNotOptimize(o.answer(point_at(H, 5 + 3 * i, 0.7 * (i + k))).g);
    ++k;
  }
}
BENCHMARK(BM_OracleAnswer)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
