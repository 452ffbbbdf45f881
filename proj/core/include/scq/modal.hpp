#pragma once

// Supermode analysis of a shot-noise-normalized covariance matrix:
// C = U^T diag(v) U with rows of U the eigenmodes (x' = U x) and
// v ascending.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "scq/covariance.hpp"

namespace scq {

inline constexpr double kDiagonalizeSymmetryTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-9;
inline constexpr double kMarginalBandDb = 0.05;

struct ModeShapes {
  Eigen::MatrixXd raw;         // row m: U_mj * sqrt(shot_j)
  Eigen::MatrixXd normalized;  // raw rows scaled to unit Euclidean norm
};

struct ModalDecomposition {
  Eigen::MatrixXd u;             // orthogonal, rows are eigenmodes
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::VectorXd squeezing_db;  // 10 log10(v); -inf for v <= 0
  ModeShapes mode_shapes;        // unit amplitudes until weighted

  std::size_t n_bins() const { return static_cast<std::size_t>(eigenvalues.size()); }
  // U^T diag(v) U.
  Eigen::MatrixXd reconstruct() const;
};

// Throws NumericalError if the eigensolver does not converge.
ModalDecomposition diagonalize(const QuadratureCovariance& c);
// Raw-matrix entry point; throws InputError when asymmetric beyond 1e-9.
ModalDecomposition diagonalize(const Eigen::MatrixXd& c);

// Flips each row so its largest-|.| entry is positive (ties: lowest index).
Eigen::MatrixXd canonicalize_signs(const Eigen::MatrixXd& u);

// 10 log10(v_m); non-positive eigenvalues map to -infinity.
Eigen::VectorXd squeezing_levels_db(const ModalDecomposition& decomp);
Eigen::VectorXd squeezing_levels_db(const Eigen::VectorXd& eigenvalues);

// Indices (0-based) of eigenvalues <= 0, which squeezing_levels_db cannot
// represent.
std::vector<std::size_t> non_positive_modes(const ModalDecomposition& decomp);

std::size_t count_squeezed_modes(const ModalDecomposition& decomp, double threshold_db = 0.0);

// 0-based indices of modes whose level lies within +-kMarginalBandDb of 0 dB.
std::vector<std::size_t> marginal_modes(const ModalDecomposition& decomp);

// Throws InputError on a bin-count mismatch.
ModeShapes eigenmode_spectral_amplitude(const ModalDecomposition& decomp, const ShotNoiseLevels& shot);

// U C U^T; throws InputError unless U is orthogonal within 1e-9.
QuadratureCovariance transform_basis(const QuadratureCovariance& c, const Eigen::MatrixXd& u);

}  // namespace scq
