#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "scq/acceptance.hpp"
#include "scq/error.hpp"
#include "scq/fiber.hpp"
#include "scq/modal.hpp"

namespace {

using scq::FiberParams;
using scq::GaussianState;

Eigen::MatrixXd x_sector(const GaussianState& s) {
  const auto n = static_cast<Eigen::Index>(s.n_modes());
  Eigen::MatrixXd x(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) x(a, b) = s.cov()(2 * a, 2 * b);
  }
  return x;
}

Eigen::VectorXd spectrum(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

GaussianState thermal_state(std::size_t n, double nu) {
  return {n, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n)), nu * Eigen::MatrixXd::Identity(2 * n, 2 * n)};
}

TEST(FiberChannel, EmptyParamsGiveIdentityChannel) {
  FiberParams p;
  p.n_bins = 3;
  const auto ch = scq::build_fiber_channel(p);
  EXPECT_TRUE(ch.ops.empty());
  const GaussianState in = scq::coherent_input(Eigen::Vector3d(1, 2, 3));
  const GaussianState out = scq::propagate(in, ch, p);
  EXPECT_EQ(out.cov(), in.cov());
  EXPECT_EQ(out.mean(), in.mean());
}

TEST(FiberChannel, SingleSqueezerOneStep) {
  FiberParams p;
  p.n_bins = 2;
  p.kerr_tms = {{0, 1, 0.3}};
  const auto ch = scq::build_fiber_channel(p);
  ASSERT_EQ(ch.ops.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<scq::SymplecticMatrix>(ch.ops[0]));
}

TEST(FiberChannel, TwoStepsEqualDoubleSqueezing) {
  FiberParams two;
  two.n_bins = 2;
  two.n_steps = 2;
  two.kerr_tms = {{0, 1, 0.25}};
  FiberParams one = two;
  one.n_steps = 1;
  one.kerr_tms = {{0, 1, 0.5}};
  const GaussianState vac = scq::make_vacuum_state(2);
  const auto a = spectrum(x_sector(scq::propagate(vac, scq::build_fiber_channel(two), two)));
  const auto b = spectrum(x_sector(scq::propagate(vac, scq::build_fiber_channel(one), one)));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(b(0), std::exp(-1.0), 1e-12);
  EXPECT_NEAR(b(1), std::exp(1.0), 1e-12);
}

TEST(FiberChannel, SqueezingSpreadsXSpectrum) {
  for (double r : {0.05, 0.3, 1.0}) {
    FiberParams p;
    p.n_bins = 3;
    p.kerr_tms = {{0, 2, r}};
    const auto ev = spectrum(x_sector(scq::propagate(scq::make_vacuum_state(3), scq::build_fiber_channel(p), p)));
    EXPECT_LT(ev.minCoeff(), 1.0);
    EXPECT_GT(ev.maxCoeff(), 1.0);
  }
}

TEST(FiberChannel, ValidationErrors) {
  FiberParams p;
  p.n_bins = 2;
  p.kerr_tms = {{0, 2, 0.1}};
  EXPECT_THROW(p.validate(), scq::InputError);
  p.kerr_tms.clear();
  p.raman = {{0, 1.5, 0.0}};
  EXPECT_THROW(p.validate(), scq::InputError);
  p.raman = {{0, 0.5, -1.0}};
  EXPECT_THROW(p.validate(), scq::InputError);
  p.raman.clear();
  p.n_steps = 0;
  EXPECT_THROW(p.validate(), scq::InputError);
}

TEST(RamanChannel, Examples) {
  const GaussianState vac = scq::make_vacuum_state(2, (Eigen::VectorXd(4) << 2, 0, 1, 0).finished());
  const GaussianState same = scq::raman_channel(vac, 0, 0.0, 3.0);
  EXPECT_EQ(same.cov(), vac.cov());
  EXPECT_EQ(same.mean(), vac.mean());

  GaussianState sq = scq::apply_symplectic(vac, scq::two_mode_squeezer(0.4, 0, 1, 2));
  const GaussianState replaced = scq::raman_channel(sq, 0, 1.0, 0.0);
  EXPECT_TRUE(replaced.mode_block(0).isApprox(Eigen::Matrix2d::Identity(), 1e-12));
  EXPECT_NEAR(replaced.cov()(0, 2), 0.0, 1e-12);

  const GaussianState heated = scq::raman_channel(scq::make_vacuum_state(1), 0, 0.5, 1.0);
  EXPECT_NEAR(heated.cov()(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(heated.cov()(1, 1), 2.0, 1e-12);
}

TEST(RamanChannel, TwiceEqualsCombinedCoupling) {
  const double eta = 0.3;
  const double n_bar = 0.7;
  for (double nu : {0.4, 1.0, 5.0}) {
    const Eigen::Vector4d d(nu, 1 / nu, 2.0, 3.0);
    const GaussianState s(2, Eigen::VectorXd::Zero(4), d.asDiagonal());
    const GaussianState twice = scq::raman_channel(scq::raman_channel(s, 0, eta, n_bar), 0, eta, n_bar);
    const GaussianState once = scq::raman_channel(s, 0, 1 - (1 - eta) * (1 - eta), n_bar);
    EXPECT_LT((twice.cov().diagonal() - once.cov().diagonal()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(RamanChannel, FloorAndPhysicality) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double r = 2 * u(rng) - 1;
    GaussianState s = scq::apply_symplectic(scq::make_vacuum_state(2), scq::two_mode_squeezer(r, 0, 1, 2));
    s = scq::apply_symplectic(s, scq::phase_shift(6 * u(rng), 0, 2));
    const double eta = u(rng);
    const double n_bar = 3 * u(rng);
    const GaussianState out = scq::raman_channel(s, 0, eta, n_bar);
    EXPECT_TRUE(out.is_physical());
    for (int k = 0; k < 2; ++k) EXPECT_GE(out.cov()(k, k), std::min(s.cov()(k, k), 2 * n_bar + 1) - 1e-12);
  }
}

TEST(Propagate, KerrMixingPreservesXSpectrum) {
  FiberParams p;
  p.n_bins = 3;
  p.kerr_mix = {{0, 1, 0.4}, {1, 2, -1.1}};
  p.n_steps = 3;
  const Eigen::VectorXd d = (Eigen::VectorXd(6) << 0.5, 2, 1.5, 1 / 1.5, 3, 1 / 3.0).finished();
  const GaussianState s(3, Eigen::VectorXd::Zero(6), d.asDiagonal());
  const GaussianState out = scq::propagate(s, scq::build_fiber_channel(p), p);
  EXPECT_LT((spectrum(x_sector(out)) - spectrum(x_sector(s))).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagate, RamanOnlyRaisesNoise) {
  FiberParams p;
  p.n_bins = 3;
  p.raman = {{0, 0.2, 0.5}, {2, 0.6, 1.0}};
  const GaussianState out = scq::propagate(scq::make_vacuum_state(3), scq::build_fiber_channel(p), p);
  EXPECT_GT(out.cov()(0, 0), 1.0);
  EXPECT_GT(out.cov()(4, 4), 1.0);
  EXPECT_DOUBLE_EQ(out.cov()(2, 2), 1.0);
}

TEST(Propagate, MixedChannelsStayPhysical) {
  FiberParams p;
  p.n_bins = 4;
  p.n_steps = 5;
  p.kerr_tms = {{0, 3, 0.1}, {1, 2, 0.15}};
  p.kerr_mix = {{0, 1, 0.2}, {2, 3, 0.3}};
  p.raman = {{3, 0.05, 0.2}};
  GaussianState s = scq::coherent_input(Eigen::Vector4d(100, 200, 300, 150));
  for (const auto& op : scq::build_fiber_channel(p).ops) {
    if (const auto* sym = std::get_if<scq::SymplecticMatrix>(&op)) {
      s = scq::apply_symplectic(s, *sym);
    } else {
      const auto& c = std::get<scq::RamanStep>(op).coupling;
      s = scq::raman_channel(s, c.mode, c.eta, c.n_bar);
    }
    EXPECT_TRUE(s.is_physical());
  }
}

TEST(CoherentInput, ShotLevelsAreSquaredAmplitudes) {
  const auto shot = scq::shot_levels_of(scq::coherent_input(Eigen::Vector3d(10, 2, 0.5)));
  EXPECT_TRUE(shot.levels().isApprox(Eigen::Vector3d(100, 4, 0.25)));
}

TEST(RoundSignificant, Digits) {
  EXPECT_DOUBLE_EQ(scq::round_significant(123456.0, 3), 123000.0);
  EXPECT_DOUBLE_EQ(scq::round_significant(-0.0012345, 2), -0.0012);
  EXPECT_DOUBLE_EQ(scq::round_significant(0.1 + 0.2, 17), 0.1 + 0.2);
  EXPECT_DOUBLE_EQ(scq::round_significant(0.0, 3), 0.0);
}

class SimulatedScan : public ::testing::Test {
 protected:
  scq::QuadratureCovariance c = scq::acceptance::load_fixture(scq::acceptance::default_fixture_dir(), "5mw").c;
  scq::ShotNoiseLevels shot = scq::acceptance::illustrative_shot_levels(19);
};

TEST_F(SimulatedScan, NoiselessLimitRoundTrips) {
  scq::MeasurementNoiseParams noise;
  noise.electronic_snr_db = std::numeric_limits<double>::infinity();
  noise.significant_digits = 15;
  const auto scan = scq::simulate_window_scan(c, shot, noise);
  EXPECT_EQ(scan.size(), 190u);
  const auto back = scq::normalize_covariance(scq::reconstruct_covariance(scan), shot);
  EXPECT_LT((back.entries() - c.entries()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST_F(SimulatedScan, SeedDeterminesScan) {
  scq::MeasurementNoiseParams noise;
  noise.rng_seed = 7;
  const auto a = scq::simulate_window_scan(c, shot, noise);
  const auto b = scq::simulate_window_scan(c, shot, noise);
  noise.rng_seed = 8;
  const auto other = scq::simulate_window_scan(c, shot, noise);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.records()[i].variance, b.records()[i].variance);
    differs = differs || a.records()[i].variance != other.records()[i].variance;
  }
  EXPECT_TRUE(differs);
}

TEST_F(SimulatedScan, StandardErrorShrinksAsInverseRootRuns) {
  scq::MeasurementNoiseParams noise;
  noise.rng_seed = 99;
  const auto small = scq::monte_carlo_reconstruction(c, shot, noise, 250);
  const auto large = scq::monte_carlo_reconstruction(c, shot, noise, 1000);
  const double ratio = small.standard_error.mean() / large.standard_error.mean();
  EXPECT_NEAR(ratio, 2.0, 0.2);
  // Unbiased: mean squared z-score near 1.
  const Eigen::MatrixXd z = (large.mean - c.entries()).cwiseQuotient(large.standard_error);
  EXPECT_NEAR(z.squaredNorm() / static_cast<double>(z.size()), 1.0, 0.3);
}

// Bias shrinks with SNR: per-entry mean error at 20, 41, 80 dB.
TEST_F(SimulatedScan, BiasFallsWithSnr) {
  std::vector<double> errors;
  for (double snr : {20.0, 41.0, 80.0}) {
    scq::MeasurementNoiseParams noise;
    noise.electronic_snr_db = snr;
    noise.significant_digits = 17;
    noise.rng_seed = 5;
    const auto mc = scq::monte_carlo_reconstruction(c, shot, noise, 200);
    errors.push_back((mc.mean - c.entries()).cwiseAbs().maxCoeff());
  }
  EXPECT_GT(errors[0], errors[1]);
  EXPECT_GT(errors[1], errors[2]);
  // 39 dB apart in power is ~89x in amplitude.
  EXPECT_GT(errors[1] / errors[2], 20.0);
  EXPECT_LT(errors[2], 1e-3);
}

TEST(MeasuredShotLevels, CmrrLeak) {
  scq::MeasurementNoiseParams noise;
  noise.cmrr_db = 20;
  const scq::ShotNoiseLevels shot(Eigen::Vector2d(100, 200));
  const scq::PhotonCovariance photon((Eigen::Matrix2d() << 300, 0, 0, 200).finished());
  const auto measured = scq::measured_shot_levels(photon, shot, noise);
  EXPECT_NEAR(measured.levels()(0), 102.0, 1e-12);
  EXPECT_NEAR(measured.levels()(1), 200.0, 1e-12);
}

TEST(NoiseParams, Validation) {
  scq::MeasurementNoiseParams noise;
  noise.significant_digits = 0;
  EXPECT_THROW(noise.validate(), scq::InputError);
  noise.significant_digits = 3;
  noise.electronic_snr_db = -1;
  EXPECT_THROW(noise.validate(), scq::InputError);
}

}  // namespace
