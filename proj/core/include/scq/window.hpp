#pragma once

// Reconstruction of the photon-number covariance matrix from variances of
// contiguous spectral windows.
//
// A window T = {k, ..., k+l} over bins 1..N has photon-number variance
//   W(T) = sum_{m, m' in T} <n_m, n_m'>,
// which is linear in the N(N+1)/2 upper-triangle unknowns. The complete set
// of contiguous windows makes the system square and invertible.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "scq/covariance.hpp"

namespace scq {

// Window over bins k..k+l, 1-based.
struct SpectralWindow {
  std::size_t k = 1;
  std::size_t l = 0;

  std::size_t first() const { return k; }
  std::size_t last() const { return k + l; }
  bool contains(std::size_t bin) const { return bin >= k && bin <= k + l; }
  bool fits(std::size_t n_bins) const { return k >= 1 && k + l <= n_bins; }

  friend bool operator==(const SpectralWindow&, const SpectralWindow&) = default;
  friend auto operator<=>(const SpectralWindow&, const SpectralWindow&) = default;
};

struct WindowRecord {
  SpectralWindow window;
  double variance = 0.0;
  std::optional<double> sigma;  // measurement uncertainty, same units as variance
};

class WindowScan {
 public:
  // Throws InputError on out-of-range or duplicate windows, non-finite
  // variances and non-positive sigmas. Negative variances are accepted: noisy
  // or synthetic (non-PSD) data produce them.
  WindowScan(std::size_t n_bins, std::vector<WindowRecord> records);

  std::size_t n_bins() const { return n_bins_; }
  const std::vector<WindowRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool has_uncertainties() const;

  // Variance of window a..b (1-based, inclusive); nullopt if not in the scan.
  std::optional<double> variance(std::size_t first, std::size_t last) const;

 private:
  std::size_t n_bins_;
  std::vector<WindowRecord> records_;
};

inline constexpr std::size_t triangle_size(std::size_t n) { return n * (n + 1) / 2; }

// Position of upper-triangle unknown (row, col), 0-based with row <= col,
// in the row-major unknown vector (c11, c12, ..., c1N, c22, ...).
std::size_t unknown_index(std::size_t row, std::size_t col, std::size_t n_bins);

// All contiguous windows, ascending k then l.
std::vector<SpectralWindow> enumerate_windows(std::size_t n_bins);

// Throws InputError if the window does not fit the matrix.
double predict_window_variance(const PhotonCovariance& cov, const SpectralWindow& w);

// Window variances for every contiguous window of cov.
WindowScan predict_complete_scan(const PhotonCovariance& cov);

Eigen::MatrixXd build_design_matrix(const std::vector<SpectralWindow>& windows, std::size_t n_bins);

// Least-squares solve (weighted by 1/sigma^2 when sigmas are present).
// Throws NumericalError listing unconstrained entries when the window set is
// rank deficient.
PhotonCovariance reconstruct_covariance(const WindowScan& scan);

// Closed-form inclusion-exclusion solution; requires the complete contiguous
// window set and throws InputError otherwise.
PhotonCovariance inclusion_exclusion_reconstruct(const WindowScan& scan);

// C_mm' = <n_m, n_m'> / sqrt(shot_m shot_m').
QuadratureCovariance normalize_covariance(const PhotonCovariance& photon_cov, const ShotNoiseLevels& shot);

// Inverse of normalize_covariance.
PhotonCovariance denormalize_covariance(const QuadratureCovariance& c, const ShotNoiseLevels& shot);

}  // namespace scq
