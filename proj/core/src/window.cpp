#include "scq/window.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "scq/error.hpp"

namespace scq {
namespace {

std::string describe(const SpectralWindow& w) {
  return "(k=" + std::to_string(w.k) + ", l=" + std::to_string(w.l) + ")";
}

Eigen::MatrixXd unpack_upper(const Eigen::VectorXd& unknowns, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(size, size);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const double v = unknowns(static_cast<Eigen::Index>(unknown_index(a, b, n)));
      m(a, b) = v;
      m(b, a) = v;
    }
  }
  return m;
}

}  // namespace

WindowScan::WindowScan(std::size_t n_bins, std::vector<WindowRecord> records)
    : n_bins_(n_bins), records_(std::move(records)) {
  if (n_bins_ == 0) throw InputError("window scan: n_bins must be at least 1");
  if (records_.empty()) throw InputError("window scan: no records");
  std::set<SpectralWindow> seen;
  for (const auto& rec : records_) {
    if (!rec.window.fits(n_bins_)) {
      throw InputError("window scan: window " + describe(rec.window) + " does not fit " + std::to_string(n_bins_) +
                       " bins");
    }
    if (!seen.insert(rec.window).second) {
      throw InputError("window scan: duplicate window " + describe(rec.window));
    }
    if (!std::isfinite(rec.variance)) {
      throw InputError("window scan: variance of window " + describe(rec.window) + " must be finite");
    }
    if (rec.sigma && !(*rec.sigma > 0.0 && std::isfinite(*rec.sigma))) {
      throw InputError("window scan: sigma of window " + describe(rec.window) + " must be positive");
    }
  }
}

bool WindowScan::has_uncertainties() const {
  for (const auto& rec : records_) {
    if (rec.sigma) return true;
  }
  return false;
}

std::optional<double> WindowScan::variance(std::size_t first, std::size_t last) const {
  for (const auto& rec : records_) {
    if (rec.window.first() == first && rec.window.last() == last) return rec.variance;
  }
  return std::nullopt;
}

std::size_t unknown_index(std::size_t row, std::size_t col, std::size_t n_bins) {
  if (row > col) std::swap(row, col);
  // Rows before `row` contribute n + (n-1) + ... + (n-row+1) unknowns.
  return row * n_bins - row * (row - 1) / 2 + (col - row);
}

std::vector<SpectralWindow> enumerate_windows(std::size_t n_bins) {
  std::vector<SpectralWindow> out;
  out.reserve(triangle_size(n_bins));
  for (std::size_t k = 1; k <= n_bins; ++k) {
    for (std::size_t l = 0; k + l <= n_bins; ++l) out.push_back({k, l});
  }
  return out;
}

double predict_window_variance(const PhotonCovariance& cov, const SpectralWindow& w) {
  if (!w.fits(cov.n_bins())) {
    throw InputError("predict_window_variance: window " + describe(w) + " outside " + std::to_string(cov.n_bins()) +
                     " bins");
  }
  const auto first = static_cast<Eigen::Index>(w.k - 1);
  const auto width = static_cast<Eigen::Index>(w.l + 1);
  return cov.entries().block(first, first, width, width).sum();
}

WindowScan predict_complete_scan(const PhotonCovariance& cov) {
  std::vector<WindowRecord> records;
  for (const auto& w : enumerate_windows(cov.n_bins())) {
    records.push_back({w, predict_window_variance(cov, w), std::nullopt});
  }
  return {cov.n_bins(), std::move(records)};
}

Eigen::MatrixXd build_design_matrix(const std::vector<SpectralWindow>& windows, std::size_t n_bins) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(windows.size()),
                                            static_cast<Eigen::Index>(triangle_size(n_bins)));
  for (std::size_t r = 0; r < windows.size(); ++r) {
    const auto& w = windows[r];
    if (!w.fits(n_bins)) throw InputError("build_design_matrix: window " + describe(w) + " out of range");
    for (std::size_t a_bin = w.k - 1; a_bin < w.last(); ++a_bin) {
      for (std::size_t b_bin = a_bin; b_bin < w.last(); ++b_bin) {
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(unknown_index(a_bin, b_bin, n_bins))) =
            a_bin == b_bin ? 1.0 : 2.0;
      }
    }
  }
  return a;
}

PhotonCovariance reconstruct_covariance(const WindowScan& scan) {
  const std::size_t n = scan.n_bins();
  std::vector<SpectralWindow> windows;
  windows.reserve(scan.size());
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(scan.size()));
  for (std::size_t r = 0; r < scan.size(); ++r) {
    windows.push_back(scan.records()[r].window);
    rhs(static_cast<Eigen::Index>(r)) = scan.records()[r].variance;
  }
  Eigen::MatrixXd a = build_design_matrix(windows, n);

  if (scan.has_uncertainties()) {
    // Rows without a sigma get unit weight.
    for (std::size_t r = 0; r < scan.size(); ++r) {
      const double w = 1.0 / scan.records()[r].sigma.value_or(1.0);
      a.row(static_cast<Eigen::Index>(r)) *= w;
      rhs(static_cast<Eigen::Index>(r)) *= w;
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < a.cols()) {
    const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(a).kernel();
    std::ostringstream msg;
    msg << "reconstruct_covariance: window set is rank deficient (rank " << qr.rank() << " of " << a.cols()
        << "); unconstrained entries:";
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t col = row; col < n; ++col) {
        const auto idx = static_cast<Eigen::Index>(unknown_index(row, col, n));
        if (kernel.cols() > 0 && kernel.row(idx).cwiseAbs().maxCoeff() > 1e-8) {
          msg << " (" << row + 1 << "," << col + 1 << ")";
        }
      }
    }
    throw NumericalError(msg.str());
  }
  const Eigen::VectorXd unknowns = qr.solve(rhs);
  return PhotonCovariance(unpack_upper(unknowns, n));
}

PhotonCovariance inclusion_exclusion_reconstruct(const WindowScan& scan) {
  const std::size_t n = scan.n_bins();
  // w(a, b): variance of bins a..b (1-based), zero for the empty window.
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + 2), static_cast<Eigen::Index>(n + 2));
  Eigen::MatrixXi present = Eigen::MatrixXi::Zero(w.rows(), w.cols());
  for (const auto& rec : scan.records()) {
    w(static_cast<Eigen::Index>(rec.window.first()), static_cast<Eigen::Index>(rec.window.last())) = rec.variance;
    present(static_cast<Eigen::Index>(rec.window.first()), static_cast<Eigen::Index>(rec.window.last())) = 1;
  }
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = a; b <= n; ++b) {
      if (!present(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))) {
        throw InputError("inclusion_exclusion_reconstruct: scan is missing window (k=" + std::to_string(a) +
                         ", l=" + std::to_string(b - a) + ")");
      }
    }
  }
  auto at = [&](std::size_t a, std::size_t b) {
    return a > b ? 0.0 : w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd c(size, size);
  for (std::size_t i = 1; i <= n; ++i) {
    c(i - 1, i - 1) = at(i, i);
    for (std::size_t j = i + 1; j <= n; ++j) {
      const double v = 0.5 * (at(i, j) - at(i + 1, j) - at(i, j - 1) + at(i + 1, j - 1));
      c(i - 1, j - 1) = v;
      c(j - 1, i - 1) = v;
    }
  }
  return PhotonCovariance(std::move(c));
}

QuadratureCovariance normalize_covariance(const PhotonCovariance& photon_cov, const ShotNoiseLevels& shot) {
  if (shot.n_bins() != photon_cov.n_bins()) {
    throw InputError("normalize_covariance: " + std::to_string(shot.n_bins()) + " shot levels for " +
                     std::to_string(photon_cov.n_bins()) + " bins");
  }
  const Eigen::VectorXd amp = shot.amplitudes();
  const Eigen::VectorXd inv = amp.cwiseInverse();
  return QuadratureCovariance(inv.asDiagonal() * photon_cov.entries() * inv.asDiagonal());
}

PhotonCovariance denormalize_covariance(const QuadratureCovariance& c, const ShotNoiseLevels& shot) {
  if (shot.n_bins() != c.n_bins()) {
    throw InputError("denormalize_covariance: " + std::to_string(shot.n_bins()) + " shot levels for " +
                     std::to_string(c.n_bins()) + " bins");
  }
  const Eigen::VectorXd amp = shot.amplitudes();
  return PhotonCovariance(amp.asDiagonal() * c.entries() * amp.asDiagonal());
}

}  // namespace scq
