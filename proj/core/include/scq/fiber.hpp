#pragma once

// Phenomenological Gaussian forward model of nonlinear fiber propagation:
// Kerr two-mode squeezing, Kerr mode mixing and Raman coupling to a thermal
// phonon bath, followed by a simulated knife-edge window scan.
//
// Interaction strengths are free parameters. Nothing here is calibrated to a
// particular pump power.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "scq/covariance.hpp"
#include "scq/gaussian.hpp"
#include "scq/window.hpp"

namespace scq {

// Mode indices are 0-based in memory; config files use 1-based bins.
struct KerrSqueezing {
  std::size_t i = 0;
  std::size_t j = 0;
  double r = 0.0;
};

struct KerrMixing {
  std::size_t i = 0;
  std::size_t j = 0;
  double theta = 0.0;
};

struct RamanCoupling {
  std::size_t mode = 0;
  double eta = 0.0;    // in [0, 1]
  double n_bar = 0.0;  // phonon occupancy, >= 0
};

struct Dispersion {
  double beta2 = 0.0;  // ps^2/km
  double beta3 = 0.0;  // ps^3/km
  double beta4 = 0.0;  // ps^4/km
};

struct FiberParams {
  std::size_t n_bins = 1;
  std::vector<KerrSqueezing> kerr_tms;
  std::vector<KerrMixing> kerr_mix;
  std::vector<RamanCoupling> raman;
  std::size_t n_steps = 1;
  Dispersion dispersion;  // metadata only

  // Throws InputError on bad indices, eta outside [0,1], n_bar < 0 or zero steps.
  void validate() const;
  PhononRegister phonons() const;
};

struct MeasurementNoiseParams {
  double electronic_snr_db = 41.0;  // +inf disables additive noise
  double cmrr_db = 20.0;
  int significant_digits = 3;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct RamanStep {
  RamanCoupling coupling;
};

using ChannelOp = std::variant<SymplecticMatrix, RamanStep>;

struct FiberChannel {
  std::size_t n_modes = 0;
  std::vector<ChannelOp> ops;  // applied in order
};

// Per step: every Kerr two-mode squeezer, then every Kerr mixer, then every
// Raman coupling.
FiberChannel build_fiber_channel(const FiberParams& params);

// Mode block -> (1-eta) block + eta (2 n_bar + 1) I; the mode's mean and its
// cross-covariances scale by sqrt(1-eta).
GaussianState raman_channel(const GaussianState& state, std::size_t mode, double eta, double n_bar);

GaussianState propagate(const GaussianState& state, const FiberChannel& channel, const FiberParams& params);

// Coherent input with real mean fields |A_m| (x_m = 2|A_m|).
GaussianState coherent_input(const Eigen::VectorXd& amplitudes);

// |A_m|^2 of every mode of a state.
ShotNoiseLevels shot_levels_of(const GaussianState& state);

// Complete contiguous window scan of C de-normalized by shot, each variance
// perturbed by N(0, (W 10^(-snr/20))^2) and rounded to the configured
// significant digits. The stream is derived from (rng_seed, stream).
WindowScan simulate_window_scan(const QuadratureCovariance& true_c, const ShotNoiseLevels& shot,
                                const MeasurementNoiseParams& noise, std::uint64_t stream = 0);

// Shot level read through a balanced detector with finite CMRR: the
// rejected common-mode photon-number excess leaks in at 10^(-cmrr/10).
ShotNoiseLevels measured_shot_levels(const PhotonCovariance& photon_cov, const ShotNoiseLevels& shot,
                                     const MeasurementNoiseParams& noise);

// Rounds to the given number of significant decimal digits.
double round_significant(double value, int digits);

struct MonteCarloSummary {
  std::size_t runs = 0;
  Eigen::MatrixXd mean;            // mean reconstructed C
  Eigen::MatrixXd standard_error;  // sample std / sqrt(runs)
};

// Reconstructs and normalizes `runs` independent simulated scans of true_c.
// Run i uses stream i.
MonteCarloSummary monte_carlo_reconstruction(const QuadratureCovariance& true_c, const ShotNoiseLevels& shot,
                                             const MeasurementNoiseParams& noise, std::size_t runs);

}  // namespace scq
