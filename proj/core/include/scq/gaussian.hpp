#pragma once

// Gaussian states and symplectic maps over N optical modes.
//
// Quadratures are interleaved (x1, p1, ..., xN, pN) in shot-noise units: the
// vacuum has unit variance in every quadrature and a = (x + ip) / 2.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace scq {

class QuadratureCovariance;

inline constexpr double kSymplecticTolerance = 1e-10;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kStateSymmetryTolerance = 1e-12;
inline constexpr double kAmplitudeFloor = 1e-6;

// Block-diagonal symplectic form with [[0, 1], [-1, 0]] per mode.
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

class GaussianState {
 public:
  // Throws InputError on dimension mismatch or an asymmetric covariance.
  GaussianState(std::size_t n_modes, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t n_modes() const { return n_modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  // Complex mean field A_m = (<x_m> + i<p_m>) / 2 of mode m (0-based).
  std::complex<double> mean_field(std::size_t mode) const;

  // 2x2 covariance block of one mode.
  Eigen::Matrix2d mode_block(std::size_t mode) const;

  // Smallest eigenvalue of the Hermitian matrix cov + i*Omega.
  double min_uncertainty_eigenvalue() const;
  // Smallest symplectic eigenvalue (1 for pure states).
  double min_symplectic_eigenvalue() const;
  bool is_physical(double tolerance = kPhysicalityTolerance) const;

 private:
  std::size_t n_modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

class SymplecticMatrix {
 public:
  // Throws InputError unless the matrix is 2N x 2N and S Omega S^T = Omega.
  SymplecticMatrix(std::size_t n_modes, Eigen::MatrixXd entries);

  static SymplecticMatrix identity(std::size_t n_modes);

  std::size_t n_modes() const { return n_modes_; }
  const Eigen::MatrixXd& entries() const { return entries_; }

  // Max-norm of S Omega S^T - Omega.
  double symplectic_defect() const;

  // this * rhs, i.e. rhs acts first.
  SymplecticMatrix then_after(const SymplecticMatrix& rhs) const;
  friend SymplecticMatrix operator*(const SymplecticMatrix& lhs, const SymplecticMatrix& rhs) {
    return lhs.then_after(rhs);
  }

 private:
  std::size_t n_modes_;
  Eigen::MatrixXd entries_;
};

// Mean thermal occupation of the phonon modes a Raman channel couples to.
class PhononRegister {
 public:
  PhononRegister() = default;
  explicit PhononRegister(std::vector<double> occupancy);

  const std::vector<double>& occupancy() const { return occupancy_; }
  std::size_t size() const { return occupancy_.size(); }

 private:
  std::vector<double> occupancy_;
};

GaussianState make_vacuum_state(std::size_t n_modes, const Eigen::VectorXd& mean);
GaussianState make_vacuum_state(std::size_t n_modes);

// Mode indices are 0-based.
SymplecticMatrix two_mode_squeezer(double r, std::size_t i, std::size_t j, std::size_t n_modes);
// diag(e^-r, e^r) on mode i: r > 0 squeezes x.
SymplecticMatrix single_mode_squeezer(double r, std::size_t i, std::size_t n_modes);
SymplecticMatrix beam_splitter(double theta, std::size_t i, std::size_t j, std::size_t n_modes);
SymplecticMatrix phase_shift(double phi, std::size_t i, std::size_t n_modes);

GaussianState apply_symplectic(const GaussianState& state, const SymplecticMatrix& s);

// Rotates every mode so x aligns with its mean-field phase, then returns the
// N x N x-sector covariance. Throws InputError naming the first mode whose
// |A_m| is below kAmplitudeFloor.
QuadratureCovariance amplitude_quadrature_covariance(const GaussianState& state);

}  // namespace scq
