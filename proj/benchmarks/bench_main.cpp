#include <benchmark/benchmark.h>

#include "scq/acceptance.hpp"
#include "scq/fiber.hpp"
#include "scq/modal.hpp"
#include "scq/window.hpp"

namespace {

const scq::QuadratureCovariance& fixture_c() {
  static const auto c = scq::acceptance::load_fixture(scq::acceptance::default_fixture_dir(), "5mw").c;
  return c;
}

void BM_Reconstruct(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) + 0.01 * Eigen::MatrixXd::Ones(n, n);
  const auto scan = scq::predict_complete_scan(scq::PhotonCovariance(m));
  for (auto _ : state) benchmark::DoNotOptimize(scq::reconstruct_covariance(scan));
}
BENCHMARK(BM_Reconstruct)->Arg(5)->Arg(10)->Arg(19)->Unit(benchmark::kMicrosecond);

void BM_InclusionExclusion(benchmark::State& state) {
  const auto scan = scq::predict_complete_scan(scq::denormalize_covariance(fixture_c(), scq::ShotNoiseLevels::uniform(19)));
  for (auto _ : state) benchmark::DoNotOptimize(scq::inclusion_exclusion_reconstruct(scan));
}
BENCHMARK(BM_InclusionExclusion)->Unit(benchmark::kMicrosecond);

void BM_Diagonalize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scq::diagonalize(fixture_c()));
}
BENCHMARK(BM_Diagonalize)->Unit(benchmark::kMicrosecond);

void BM_SimulateScan(benchmark::State& state) {
  const auto shot = scq::acceptance::illustrative_shot_levels(19);
  scq::MeasurementNoiseParams noise;
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(scq::simulate_window_scan(fixture_c(), shot, noise, stream++));
}
BENCHMARK(BM_SimulateScan)->Unit(benchmark::kMicrosecond);

void BM_Propagate(benchmark::State& state) {
  scq::FiberParams p;
  p.n_bins = 19;
  p.n_steps = static_cast<std::size_t>(state.range(0));
  for (std::size_t i = 0; i < 9; ++i) p.kerr_tms.push_back({i, 18 - i, 0.01});
  for (std::size_t i = 0; i + 1 < 19; ++i) p.kerr_mix.push_back({i, i + 1, 0.02});
  p.raman = {{18, 0.01, 0.1}};
  const auto channel = scq::build_fiber_channel(p);
  const auto input = scq::coherent_input(Eigen::VectorXd::Constant(19, 1000.0));
  for (auto _ : state) benchmark::DoNotOptimize(scq::propagate(input, channel, p));
}
BENCHMARK(BM_Propagate)->Arg(1)->Arg(10)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
