#include "scq/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scq/error.hpp"

namespace scq {
namespace {

void require_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InputError(std::string(what) + ": matrix must be square and non-empty (got " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) + ")");
  }
}

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
  require_square(m, what);
  // Relative to the entry scale so photon-number matrices (|A|^2 ~ 1e6) pass.
  const double asym = max_asymmetry(m);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!(asym <= kMatrixSymmetryTolerance * scale)) {
    throw InputError(std::string(what) + ": matrix is not symmetric (max |M - M^T| = " + std::to_string(asym) + ")");
  }
}

}  // namespace

double max_asymmetry(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

ShotNoiseLevels::ShotNoiseLevels(Eigen::VectorXd levels) : levels_(std::move(levels)) {
  if (levels_.size() == 0) throw InputError("shot-noise levels: empty");
  for (Eigen::Index m = 0; m < levels_.size(); ++m) {
    if (!(levels_(m) > 0.0) || !std::isfinite(levels_(m))) {
      throw InputError("shot-noise level of bin " + std::to_string(m + 1) + " must be a positive finite number");
    }
  }
}

ShotNoiseLevels ShotNoiseLevels::uniform(std::size_t n_bins, double level) {
  return ShotNoiseLevels(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n_bins), level));
}

PhotonCovariance::PhotonCovariance(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_symmetric(entries_, "PhotonCovariance");
  entries_ = (0.5 * (entries_ + entries_.transpose())).eval();
}

QuadratureCovariance::QuadratureCovariance(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  require_symmetric(entries_, "QuadratureCovariance");
  entries_ = (0.5 * (entries_ + entries_.transpose())).eval();
}

QuadratureCovariance QuadratureCovariance::symmetrized(const Eigen::MatrixXd& m, double* max_asym) {
  require_square(m, "QuadratureCovariance");
  if (max_asym != nullptr) *max_asym = max_asymmetry(m);
  return QuadratureCovariance(0.5 * (m + m.transpose()));
}

QuadratureCovariance QuadratureCovariance::identity(std::size_t n_bins) {
  const auto n = static_cast<Eigen::Index>(n_bins);
  return QuadratureCovariance(Eigen::MatrixXd::Identity(n, n));
}

std::vector<std::string> QuadratureCovariance::warnings() const {
  std::vector<std::string> out;
  for (Eigen::Index m = 0; m < entries_.rows(); ++m) {
    if (!(entries_(m, m) > 0.0)) {
      out.push_back("bin " + std::to_string(m + 1) + ": non-positive diagonal entry " + std::to_string(entries_(m, m)));
    }
  }
  return out;
}

PsdProjection project_to_psd(const QuadratureCovariance& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c.entries());
  if (solver.info() != Eigen::Success) throw NumericalError("project_to_psd: eigensolver failed");
  Eigen::VectorXd values = solver.eigenvalues();
  double clipped = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < 0.0) {
      clipped += -values(i);
      values(i) = 0.0;
    }
  }
  const Eigen::MatrixXd& q = solver.eigenvectors();
  Eigen::MatrixXd projected = q * values.asDiagonal() * q.transpose();
  return {QuadratureCovariance::symmetrized(projected), clipped};
}

}  // namespace scq
