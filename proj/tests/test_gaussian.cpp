#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "scq/covariance.hpp"
#include "scq/error.hpp"
#include "scq/gaussian.hpp"

namespace {

using scq::GaussianState;
using scq::SymplecticMatrix;

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double orthogonality_defect(const SymplecticMatrix& s) {
  const Eigen::MatrixXd& e = s.entries();
  return inf_norm(e * e.transpose() - Eigen::MatrixXd::Identity(e.rows(), e.cols()));
}

// Sorted eigenvalues of a symmetric matrix.
Eigen::VectorXd spectrum(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

TEST(VacuumState, SingleMode) {
  const GaussianState s = scq::make_vacuum_state(1, Eigen::Vector2d::Zero());
  EXPECT_TRUE(s.cov().isApprox(Eigen::Matrix2d::Identity()));
  EXPECT_TRUE(s.is_physical());
}

TEST(VacuumState, CoherentDisplacementKeepsIdentityCovariance) {
  Eigen::VectorXd mean(4);
  mean << 3, 0, 0, 0;
  const GaussianState s = scq::make_vacuum_state(2, mean);
  EXPECT_TRUE(s.cov().isApprox(Eigen::MatrixXd::Identity(4, 4)));
  EXPECT_EQ(s.mean(), mean);
  EXPECT_DOUBLE_EQ(s.mean_field(0).real(), 1.5);
}

TEST(VacuumState, NineteenModes) {
  const GaussianState s = scq::make_vacuum_state(19);
  EXPECT_EQ(s.cov().rows(), 38);
  EXPECT_EQ(s.cov(), Eigen::MatrixXd::Identity(38, 38));
}

TEST(GaussianState, RejectsBadShapesAndAsymmetry) {
  EXPECT_THROW(GaussianState(2, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(4, 4)), scq::InputError);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
  cov(0, 1) = 0.1;
  EXPECT_THROW(GaussianState(1, Eigen::VectorXd::Zero(2), cov), scq::InputError);
}

TEST(GaussianState, SubVacuumStateIsUnphysical) {
  const GaussianState s(1, Eigen::VectorXd::Zero(2), 0.5 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_FALSE(s.is_physical());
  EXPECT_NEAR(s.min_symplectic_eigenvalue(), 0.5, 1e-12);
}

TEST(TwoModeSqueezer, ZeroIsIdentity) {
  EXPECT_EQ(scq::two_mode_squeezer(0.0, 0, 1, 3).entries(), Eigen::MatrixXd::Identity(6, 6));
}

TEST(TwoModeSqueezer, MarginalVarianceIsCoshTwoR) {
  const GaussianState out = scq::apply_symplectic(scq::make_vacuum_state(2), scq::two_mode_squeezer(0.5, 0, 1, 2));
  // S I S^T by hand: x1 variance = cosh^2 r + sinh^2 r.
  const double expected = std::cosh(0.5) * std::cosh(0.5) + std::sinh(0.5) * std::sinh(0.5);
  EXPECT_NEAR(expected, 1.5431, 1e-4);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(out.cov()(k, k), expected, 1e-12);
}

TEST(TwoModeSqueezer, XBlockEigenvaluesAreExpPlusMinusR) {
  const Eigen::MatrixXd s = scq::two_mode_squeezer(0.5, 0, 1, 2).entries();
  Eigen::Matrix2d xb;
  xb << s(0, 0), s(0, 2), s(2, 0), s(2, 2);
  const Eigen::Vector2d plus = Eigen::Vector2d(1, 1) / std::sqrt(2.0);
  const Eigen::Vector2d minus = Eigen::Vector2d(1, -1) / std::sqrt(2.0);
  EXPECT_NEAR(plus.dot(xb * plus), std::exp(0.5), 1e-12);
  EXPECT_NEAR(minus.dot(xb * minus), std::exp(-0.5), 1e-12);
  EXPECT_TRUE((xb * plus).isApprox(std::exp(0.5) * plus, 1e-12));
}

TEST(TwoModeSqueezer, RejectsEqualOrOutOfRangeModes) {
  EXPECT_THROW(scq::two_mode_squeezer(0.1, 1, 1, 3), scq::InputError);
  EXPECT_THROW(scq::two_mode_squeezer(0.1, 0, 3, 3), scq::InputError);
}

TEST(TwoModeSqueezer, InverseIsNegativeR) {
  const SymplecticMatrix s = scq::two_mode_squeezer(0.7, 0, 2, 3);
  const SymplecticMatrix inv = scq::two_mode_squeezer(-0.7, 0, 2, 3);
  EXPECT_LT(inf_norm((s * inv).entries() - Eigen::MatrixXd::Identity(6, 6)), 1e-12);
}

TEST(BeamSplitter, ZeroIsIdentity) {
  EXPECT_EQ(scq::beam_splitter(0.0, 0, 1, 2).entries(), Eigen::MatrixXd::Identity(4, 4));
}

TEST(BeamSplitter, QuarterTurnSwapsModes) {
  Eigen::VectorXd mean(4);
  mean << 1, 2, 3, 4;
  const GaussianState s(2, mean, Eigen::MatrixXd::Identity(4, 4));
  const GaussianState out = scq::apply_symplectic(s, scq::beam_splitter(std::numbers::pi / 2, 0, 1, 2));
  EXPECT_NEAR(std::abs(out.mean()(0)), 3, 1e-12);
  EXPECT_NEAR(std::abs(out.mean()(1)), 4, 1e-12);
  EXPECT_NEAR(std::abs(out.mean()(2)), 1, 1e-12);
  EXPECT_NEAR(std::abs(out.mean()(3)), 2, 1e-12);
}

TEST(BeamSplitter, EqualMixingAveragesXVariances) {
  const Eigen::VectorXd d = (Eigen::VectorXd(4) << 2, 2, 1, 1).finished();
  const GaussianState s(2, Eigen::VectorXd::Zero(4), d.asDiagonal());
  const GaussianState out = scq::apply_symplectic(s, scq::beam_splitter(std::numbers::pi / 4, 0, 1, 2));
  EXPECT_NEAR(out.cov()(0, 0), 1.5, 1e-12);
  EXPECT_NEAR(out.cov()(2, 2), 1.5, 1e-12);
}

TEST(PhaseShift, ZeroIsIdentityAndPiNegates) {
  EXPECT_EQ(scq::phase_shift(0.0, 0, 1).entries(), Eigen::MatrixXd::Identity(2, 2));
  const GaussianState s(1, Eigen::Vector2d(1, 2), Eigen::MatrixXd::Identity(2, 2));
  const GaussianState out = scq::apply_symplectic(s, scq::phase_shift(std::numbers::pi, 0, 1));
  EXPECT_TRUE(out.mean().isApprox(Eigen::Vector2d(-1, -2), 1e-12));
  EXPECT_TRUE(out.cov().isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-12));
}

TEST(PhaseShift, QuarterTurnSwapsSqueezedVariances) {
  const double e = std::numbers::e;
  const GaussianState s(1, Eigen::Vector2d::Zero(), Eigen::Vector2d(e, 1 / e).asDiagonal());
  const GaussianState out = scq::apply_symplectic(s, scq::phase_shift(std::numbers::pi / 2, 0, 1));
  EXPECT_NEAR(out.cov()(0, 0), 1 / e, 1e-12);
  EXPECT_NEAR(out.cov()(1, 1), e, 1e-12);
  EXPECT_NEAR(out.cov()(0, 1), 0, 1e-12);
}

TEST(ApplySymplectic, IdentityLeavesStateUnchanged) {
  const GaussianState s = scq::apply_symplectic(scq::make_vacuum_state(2), scq::two_mode_squeezer(0.2, 0, 1, 2));
  const GaussianState out = scq::apply_symplectic(s, SymplecticMatrix::identity(2));
  EXPECT_EQ(out.cov(), s.cov());
  EXPECT_EQ(out.mean(), s.mean());
}

TEST(ApplySymplectic, SqueezedVacuumStaysPure) {
  const GaussianState out = scq::apply_symplectic(scq::make_vacuum_state(2), scq::two_mode_squeezer(0.3, 0, 1, 2));
  EXPECT_TRUE(out.is_physical());
  EXPECT_NEAR(out.min_symplectic_eigenvalue(), 1.0, 1e-10);
}

TEST(ApplySymplectic, BeamSplitterPreservesSpectrum) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(6, 6);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  const Eigen::MatrixXd cov = a * a.transpose() + Eigen::MatrixXd::Identity(6, 6);
  const GaussianState s(3, Eigen::VectorXd::Zero(6), cov);
  const GaussianState out = scq::apply_symplectic(s, scq::beam_splitter(std::numbers::pi / 4, 0, 2, 3));
  EXPECT_LT((spectrum(out.cov()) - spectrum(cov)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ApplySymplectic, DimensionMismatchThrows) {
  EXPECT_THROW(scq::apply_symplectic(scq::make_vacuum_state(2), SymplecticMatrix::identity(3)), scq::InputError);
}

TEST(SymplecticMatrix, RejectsNonSymplectic) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 0) = 2.0;
  EXPECT_THROW(SymplecticMatrix(1, m), scq::InputError);
}

// Property: random compositions stay symplectic, orthogonal generators stay
// orthogonal, and vacuum inputs stay physical.
TEST(GaussianProperties, RandomCompositions) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(-0.6, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    std::uniform_int_distribution<std::size_t> mode(0, n - 1);
    SymplecticMatrix s = SymplecticMatrix::identity(n);
    for (int g = 0; g < 8; ++g) {
      std::size_t i = mode(rng);
      std::size_t j = mode(rng);
      while (j == i) j = mode(rng);
      switch (g % 3) {
        case 0: s = scq::two_mode_squeezer(squeeze(rng), i, j, n) * s; break;
        case 1: {
          const SymplecticMatrix b = scq::beam_splitter(angle(rng), i, j, n);
          EXPECT_LT(orthogonality_defect(b), 1e-10);
          s = b * s;
          break;
        }
        default: {
          const SymplecticMatrix p = scq::phase_shift(angle(rng), i, n);
          EXPECT_LT(orthogonality_defect(p), 1e-10);
          s = p * s;
        }
      }
    }
    EXPECT_LT(s.symplectic_defect(), 1e-10);
    EXPECT_TRUE(scq::apply_symplectic(scq::make_vacuum_state(n), s).is_physical());
  }
}

TEST(AmplitudeQuadrature, CoherentStateGivesIdentity) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(6);
  mean << 3, 0, 0, 2, -1, 1;
  const auto c = scq::amplitude_quadrature_covariance(scq::make_vacuum_state(3, mean));
  EXPECT_TRUE(c.entries().isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
}

TEST(AmplitudeQuadrature, MeanAlongSqueezedAxis) {
  const double r = 0.4;
  GaussianState s = scq::apply_symplectic(scq::make_vacuum_state(1), scq::single_mode_squeezer(r, 0, 1));
  s = GaussianState(1, Eigen::Vector2d(5, 0), s.cov());
  EXPECT_NEAR(scq::amplitude_quadrature_covariance(s).entries()(0, 0), std::exp(-2 * r), 1e-12);
}

TEST(AmplitudeQuadrature, AlignmentFollowsMeanPhase) {
  const double r = 0.4;
  const Eigen::Vector2d diag(std::exp(2 * r), std::exp(-2 * r));
  const GaussianState s(1, Eigen::Vector2d(0, 5), diag.asDiagonal());
  EXPECT_NEAR(scq::amplitude_quadrature_covariance(s).entries()(0, 0), std::exp(-2 * r), 1e-12);
}

TEST(AmplitudeQuadrature, VanishingMeanNamesMode) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  mean(0) = 1.0;
  try {
    scq::amplitude_quadrature_covariance(scq::make_vacuum_state(2, mean));
    FAIL() << "expected InputError";
  } catch (const scq::InputError& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

}  // namespace
