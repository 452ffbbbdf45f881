#include "scq/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scq/covariance.hpp"
#include "scq/error.hpp"

namespace scq {
namespace {

void check_mode(std::size_t mode, std::size_t n_modes, const char* what) {
  if (mode >= n_modes) {
    throw InputError(std::string(what) + ": mode index " + std::to_string(mode) + " out of range for " +
                     std::to_string(n_modes) + " modes");
  }
}

void check_pair(std::size_t i, std::size_t j, std::size_t n_modes, const char* what) {
  check_mode(i, n_modes, what);
  check_mode(j, n_modes, what);
  if (i == j) {
    throw InputError(std::string(what) + ": modes must differ (got " + std::to_string(i) + " twice)");
  }
}

// Places a 2x2 x-block and p-block on modes (i, j) of an identity.
Eigen::MatrixXd two_mode_embedding(const Eigen::Matrix2d& x_block, const Eigen::Matrix2d& p_block,
                                   std::size_t i, std::size_t j, std::size_t n_modes) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const std::size_t idx[2] = {i, j};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      s(2 * idx[a], 2 * idx[b]) = x_block(a, b);
      s(2 * idx[a] + 1, 2 * idx[b] + 1) = p_block(a, b);
    }
  }
  return s;
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

GaussianState::GaussianState(std::size_t n_modes, Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : n_modes_(n_modes), mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  if (n_modes == 0) throw InputError("GaussianState: need at least one mode");
  if (mean_.size() != dim) {
    throw InputError("GaussianState: mean has length " + std::to_string(mean_.size()) + ", expected " +
                     std::to_string(dim));
  }
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw InputError("GaussianState: covariance must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (max_asymmetry(cov_) > kStateSymmetryTolerance * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
    throw InputError("GaussianState: covariance is not symmetric");
  }
  cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
}

std::complex<double> GaussianState::mean_field(std::size_t mode) const {
  check_mode(mode, n_modes_, "mean_field");
  return {0.5 * mean_(2 * mode), 0.5 * mean_(2 * mode + 1)};
}

Eigen::Matrix2d GaussianState::mode_block(std::size_t mode) const {
  check_mode(mode, n_modes_, "mode_block");
  return cov_.block<2, 2>(2 * mode, 2 * mode);
}

double GaussianState::min_uncertainty_eigenvalue() const {
  const Eigen::MatrixXcd h =
      cov_.cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * symplectic_form(n_modes_).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("physicality check: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double GaussianState::min_symplectic_eigenvalue() const {
  // Eigenvalues of i*Omega*sigma come in pairs +-nu.
  const Eigen::MatrixXd m = symplectic_form(n_modes_) * cov_;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("symplectic spectrum: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().minCoeff();
}

bool GaussianState::is_physical(double tolerance) const { return min_uncertainty_eigenvalue() >= -tolerance; }

SymplecticMatrix::SymplecticMatrix(std::size_t n_modes, Eigen::MatrixXd entries)
    : n_modes_(n_modes), entries_(std::move(entries)) {
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  if (n_modes == 0) throw InputError("SymplecticMatrix: need at least one mode");
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw InputError("SymplecticMatrix: expected " + std::to_string(dim) + "x" + std::to_string(dim) + " entries");
  }
  // Round-off in S Omega S^T grows with the squared entry scale.
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if (symplectic_defect() >= kSymplecticTolerance * scale * scale) {
    throw InputError("SymplecticMatrix: S Omega S^T != Omega (defect " + std::to_string(symplectic_defect()) + ")");
  }
}

SymplecticMatrix SymplecticMatrix::identity(std::size_t n_modes) {
  return {n_modes, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

double SymplecticMatrix::symplectic_defect() const {
  const Eigen::MatrixXd omega = symplectic_form(n_modes_);
  return (entries_ * omega * entries_.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticMatrix SymplecticMatrix::then_after(const SymplecticMatrix& rhs) const {
  if (rhs.n_modes_ != n_modes_) throw InputError("SymplecticMatrix: composing different mode counts");
  return {n_modes_, entries_ * rhs.entries_};
}

PhononRegister::PhononRegister(std::vector<double> occupancy) : occupancy_(std::move(occupancy)) {
  for (std::size_t i = 0; i < occupancy_.size(); ++i) {
    if (!(occupancy_[i] >= 0.0)) {
      throw InputError("PhononRegister: occupancy of phonon " + std::to_string(i) + " must be >= 0");
    }
  }
}

GaussianState make_vacuum_state(std::size_t n_modes, const Eigen::VectorXd& mean) {
  if (n_modes == 0) throw InputError("make_vacuum_state: need at least one mode");
  return {n_modes, mean, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState make_vacuum_state(std::size_t n_modes) {
  return make_vacuum_state(n_modes, Eigen::VectorXd::Zero(2 * n_modes));
}

SymplecticMatrix two_mode_squeezer(double r, std::size_t i, std::size_t j, std::size_t n_modes) {
  check_pair(i, j, n_modes, "two_mode_squeezer");
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Eigen::Matrix2d x_block;
  x_block << c, s, s, c;
  Eigen::Matrix2d p_block;
  p_block << c, -s, -s, c;
  return {n_modes, two_mode_embedding(x_block, p_block, i, j, n_modes)};
}

SymplecticMatrix single_mode_squeezer(double r, std::size_t i, std::size_t n_modes) {
  check_mode(i, n_modes, "single_mode_squeezer");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  s(2 * i, 2 * i) = std::exp(-r);
  s(2 * i + 1, 2 * i + 1) = std::exp(r);
  return {n_modes, std::move(s)};
}

SymplecticMatrix beam_splitter(double theta, std::size_t i, std::size_t j, std::size_t n_modes) {
  check_pair(i, j, n_modes, "beam_splitter");
  const Eigen::Matrix2d rot = rotation(theta);
  return {n_modes, two_mode_embedding(rot, rot, i, j, n_modes)};
}

SymplecticMatrix phase_shift(double phi, std::size_t i, std::size_t n_modes) {
  check_mode(i, n_modes, "phase_shift");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  s.block<2, 2>(2 * i, 2 * i) = rotation(phi);
  return {n_modes, std::move(s)};
}

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& s) {
  if (s.n_modes() != state.n_modes()) {
    throw InputError("apply_symplectic: state has " + std::to_string(state.n_modes()) + " modes, map has " +
                     std::to_string(s.n_modes()));
  }
  const Eigen::MatrixXd& m = s.entries();
  Eigen::MatrixXd cov = m * state.cov() * m.transpose();
  cov = (0.5 * (cov + cov.transpose())).eval();
  return {state.n_modes(), m * state.mean(), std::move(cov)};
}

QuadratureCovariance amplitude_quadrature_covariance(const GaussianState& state) {
  const std::size_t n = state.n_modes();
  // Block-diagonal rotation by -arg(A_m) on every mode.
  Eigen::MatrixXd align = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::complex<double> a = state.mean_field(m);
    if (std::abs(a) < kAmplitudeFloor) {
      throw InputError("amplitude_quadrature_covariance: mode " + std::to_string(m + 1) +
                       " has mean amplitude below the linearization floor");
    }
    align.block<2, 2>(2 * m, 2 * m) = rotation(-std::arg(a));
  }
  const Eigen::MatrixXd rotated = align * state.cov() * align.transpose();
  Eigen::MatrixXd x_sector(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) x_sector(a, b) = rotated(2 * a, 2 * b);
  }
  return QuadratureCovariance::symmetrized(x_sector);
}

}  // namespace scq
