#pragma once

// Matrix value types shared by reconstruction, modal analysis and the
// forward model. Bins are 0-based in memory and 1-based in every file and
// report.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scq {

inline constexpr double kMatrixSymmetryTolerance = 1e-12;

// Per-bin shot-noise level |A_m|^2 (photon-number units), all strictly positive.
class ShotNoiseLevels {
 public:
  explicit ShotNoiseLevels(Eigen::VectorXd levels);
  static ShotNoiseLevels uniform(std::size_t n_bins, double level = 1.0);

  std::size_t n_bins() const { return static_cast<std::size_t>(levels_.size()); }
  const Eigen::VectorXd& levels() const { return levels_; }
  Eigen::VectorXd amplitudes() const { return levels_.cwiseSqrt(); }

 private:
  Eigen::VectorXd levels_;
};

// Symmetric N x N matrix of photon-number covariances <n_m, n_m'>.
class PhotonCovariance {
 public:
  // Throws InputError if not square or asymmetric beyond 1e-12 (relative to
  // max(1, max |entry|)).
  explicit PhotonCovariance(Eigen::MatrixXd entries);

  std::size_t n_bins() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

// Shot-noise-normalized amplitude-quadrature covariance C (vacuum = identity).
class QuadratureCovariance {
 public:
  // Throws InputError if not square or asymmetric beyond 1e-12.
  explicit QuadratureCovariance(Eigen::MatrixXd entries);

  // Accepts any square matrix, stores (M + M^T) / 2 and reports the largest
  // |M - M^T| entry it removed.
  static QuadratureCovariance symmetrized(const Eigen::MatrixXd& m, double* max_asymmetry = nullptr);

  static QuadratureCovariance identity(std::size_t n_bins);

  std::size_t n_bins() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  // Non-fatal data-quality notes, e.g. a non-positive diagonal entry.
  std::vector<std::string> warnings() const;

 private:
  Eigen::MatrixXd entries_;
};

// Result of clipping negative eigenvalues of C at zero.
struct PsdProjection {
  QuadratureCovariance projected;
  double clipped_mass;  // sum of |negative eigenvalues| removed
};

PsdProjection project_to_psd(const QuadratureCovariance& c);

// Max-norm of M - M^T.
double max_asymmetry(const Eigen::MatrixXd& m);

}  // namespace scq
