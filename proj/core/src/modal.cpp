#include "scq/modal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scq/error.hpp"

namespace scq {
namespace {

constexpr double kSignTieTolerance = 1e-12;
constexpr double kSignificantCoefficient = 1e-9;

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double norm = out.row(r).norm();
    if (norm > 0.0) out.row(r) /= norm;
  }
  return out;
}

Eigen::Index first_significant(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > kSignificantCoefficient) return i;
  }
  return v.size();
}

// Replaces the columns [begin, end) of q, which span one degenerate
// eigenspace, by the Gram-Schmidt orthonormalization of the projected unit
// vectors e_1, e_2, ... so the basis no longer depends on the solver.
void canonicalize_eigenspace(Eigen::MatrixXd& q, Eigen::Index begin, Eigen::Index end) {
  const Eigen::Index dim = end - begin;
  const Eigen::MatrixXd span = q.middleCols(begin, dim);
  const Eigen::MatrixXd projector = span * span.transpose();
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index i = 0; i < q.rows() && static_cast<Eigen::Index>(basis.size()) < dim; ++i) {
    Eigen::VectorXd v = projector.col(i);
    for (const auto& b : basis) v -= b.dot(v) * b;
    const double norm = v.norm();
    if (norm > 1e-6) basis.push_back(v / norm);
  }
  if (static_cast<Eigen::Index>(basis.size()) != dim) {
    throw NumericalError("diagonalize: could not rebuild a degenerate eigenspace basis");
  }
  std::stable_sort(basis.begin(), basis.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return first_significant(a) < first_significant(b);
  });
  for (Eigen::Index k = 0; k < dim; ++k) q.col(begin + k) = basis[static_cast<std::size_t>(k)];
}

}  // namespace

Eigen::MatrixXd ModalDecomposition::reconstruct() const { return u.transpose() * eigenvalues.asDiagonal() * u; }

Eigen::MatrixXd canonicalize_signs(const Eigen::MatrixXd& u) {
  Eigen::MatrixXd out = u;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double peak = out.row(r).cwiseAbs().maxCoeff();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
      if (std::abs(out(r, c)) >= peak - kSignTieTolerance) {
        if (out(r, c) < 0.0) out.row(r) *= -1.0;
        break;
      }
    }
  }
  return out;
}

ModalDecomposition diagonalize(const Eigen::MatrixXd& c) {
  if (c.rows() == 0 || c.rows() != c.cols()) throw InputError("diagonalize: matrix must be square and non-empty");
  const double asym = max_asymmetry(c);
  if (!(asym <= kDiagonalizeSymmetryTolerance)) {
    throw InputError("diagonalize: matrix is not symmetric (max |C - C^T| = " + std::to_string(asym) + ")");
  }
  const Eigen::MatrixXd sym = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver did not converge");

  const Eigen::VectorXd values = solver.eigenvalues();  // ascending
  Eigen::MatrixXd q = solver.eigenvectors();
  for (Eigen::Index begin = 0; begin < values.size();) {
    Eigen::Index end = begin + 1;
    while (end < values.size() && values(end) - values(end - 1) < kDegeneracyTolerance) ++end;
    if (end - begin > 1) canonicalize_eigenspace(q, begin, end);
    begin = end;
  }

  ModalDecomposition out;
  out.u = canonicalize_signs(q.transpose());
  out.eigenvalues = values;
  out.squeezing_db = squeezing_levels_db(values);
  out.mode_shapes = {out.u, normalize_rows(out.u)};
  return out;
}

ModalDecomposition diagonalize(const QuadratureCovariance& c) { return diagonalize(c.entries()); }

Eigen::VectorXd squeezing_levels_db(const Eigen::VectorXd& eigenvalues) {
  Eigen::VectorXd out(eigenvalues.size());
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out(i) = eigenvalues(i) > 0.0 ? 10.0 * std::log10(eigenvalues(i)) : -std::numeric_limits<double>::infinity();
  }
  return out;
}

Eigen::VectorXd squeezing_levels_db(const ModalDecomposition& decomp) { return squeezing_levels_db(decomp.eigenvalues); }

std::vector<std::size_t> non_positive_modes(const ModalDecomposition& decomp) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < decomp.eigenvalues.size(); ++i) {
    if (!(decomp.eigenvalues(i) > 0.0)) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

std::size_t count_squeezed_modes(const ModalDecomposition& decomp, double threshold_db) {
  const Eigen::VectorXd levels = squeezing_levels_db(decomp);
  return static_cast<std::size_t>((levels.array() < threshold_db).count());
}

std::vector<std::size_t> marginal_modes(const ModalDecomposition& decomp) {
  const Eigen::VectorXd levels = squeezing_levels_db(decomp);
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < levels.size(); ++i) {
    if (std::abs(levels(i)) < kMarginalBandDb) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

ModeShapes eigenmode_spectral_amplitude(const ModalDecomposition& decomp, const ShotNoiseLevels& shot) {
  if (shot.n_bins() != decomp.n_bins()) {
    throw InputError("eigenmode_spectral_amplitude: " + std::to_string(shot.n_bins()) + " shot levels for " +
                     std::to_string(decomp.n_bins()) + " modes");
  }
  Eigen::MatrixXd raw = decomp.u * shot.amplitudes().asDiagonal();
  Eigen::MatrixXd normalized = normalize_rows(raw);
  return {std::move(raw), std::move(normalized)};
}

QuadratureCovariance transform_basis(const QuadratureCovariance& c, const Eigen::MatrixXd& u) {
  const auto n = static_cast<Eigen::Index>(c.n_bins());
  if (u.rows() != n || u.cols() != n) throw InputError("transform_basis: U must match the covariance dimension");
  const double defect = (u * u.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(defect < 1e-9)) {
    throw InputError("transform_basis: U is not orthogonal (max |U U^T - I| = " + std::to_string(defect) + ")");
  }
  return QuadratureCovariance::symmetrized(u * c.entries() * u.transpose());
}

}  // namespace scq
