#include "scq/fiber.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include "scq/error.hpp"

namespace scq {
namespace {

void check_index(std::size_t mode, std::size_t n_bins, const char* what) {
  if (mode >= n_bins) {
    throw InputError(std::string(what) + ": bin " + std::to_string(mode + 1) + " out of range for " +
                     std::to_string(n_bins) + " bins");
  }
}

void check_raman(double eta, double n_bar) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("raman: coupling eta must lie in [0, 1]");
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) throw InputError("raman: phonon occupancy must be >= 0");
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void FiberParams::validate() const {
  if (n_bins == 0) throw InputError("fiber: n_bins must be at least 1");
  if (n_steps == 0) throw InputError("fiber: n_steps must be at least 1");
  for (const auto& tms : kerr_tms) {
    check_index(tms.i, n_bins, "kerr_tms");
    check_index(tms.j, n_bins, "kerr_tms");
    if (tms.i == tms.j) throw InputError("kerr_tms: modes must differ");
  }
  for (const auto& mix : kerr_mix) {
    check_index(mix.i, n_bins, "kerr_mix");
    check_index(mix.j, n_bins, "kerr_mix");
    if (mix.i == mix.j) throw InputError("kerr_mix: modes must differ");
  }
  for (const auto& raman : this->raman) {
    check_index(raman.mode, n_bins, "raman");
    check_raman(raman.eta, raman.n_bar);
  }
}

PhononRegister FiberParams::phonons() const {
  std::vector<double> occupancy;
  occupancy.reserve(raman.size());
  for (const auto& r : raman) occupancy.push_back(r.n_bar);
  return PhononRegister(std::move(occupancy));
}

void MeasurementNoiseParams::validate() const {
  if (!(electronic_snr_db > 0.0)) throw InputError("noise: electronic_snr_db must be positive");
  if (std::isnan(cmrr_db)) throw InputError("noise: cmrr_db must be a number");
  if (significant_digits < 1) throw InputError("noise: significant_digits must be at least 1");
}

FiberChannel build_fiber_channel(const FiberParams& params) {
  params.validate();
  FiberChannel channel;
  channel.n_modes = params.n_bins;
  for (std::size_t step = 0; step < params.n_steps; ++step) {
    for (const auto& tms : params.kerr_tms) {
      channel.ops.emplace_back(two_mode_squeezer(tms.r, tms.i, tms.j, params.n_bins));
    }
    for (const auto& mix : params.kerr_mix) {
      channel.ops.emplace_back(beam_splitter(mix.theta, mix.i, mix.j, params.n_bins));
    }
    for (const auto& raman : params.raman) channel.ops.emplace_back(RamanStep{raman});
  }
  return channel;
}

GaussianState raman_channel(const GaussianState& state, std::size_t mode, double eta, double n_bar) {
  check_index(mode, state.n_modes(), "raman_channel");
  check_raman(eta, n_bar);
  const double keep = std::sqrt(1.0 - eta);
  const auto lo = static_cast<Eigen::Index>(2 * mode);

  Eigen::MatrixXd cov = state.cov();
  cov.middleRows(lo, 2) *= keep;
  cov.middleCols(lo, 2) *= keep;
  // The diagonal block picked up keep^2 = 1 - eta above.
  cov.block<2, 2>(lo, lo) += eta * (2.0 * n_bar + 1.0) * Eigen::Matrix2d::Identity();

  Eigen::VectorXd mean = state.mean();
  mean.segment(lo, 2) *= keep;
  return {state.n_modes(), std::move(mean), std::move(cov)};
}

GaussianState propagate(const GaussianState& state, const FiberChannel& channel, const FiberParams& params) {
  if (channel.n_modes != state.n_modes() || params.n_bins != state.n_modes()) {
    throw InputError("propagate: channel, parameters and state disagree on the number of modes");
  }
  GaussianState out = state;
  for (const auto& op : channel.ops) {
    if (const auto* s = std::get_if<SymplecticMatrix>(&op)) {
      out = apply_symplectic(out, *s);
    } else {
      const auto& raman = std::get<RamanStep>(op).coupling;
      out = raman_channel(out, raman.mode, raman.eta, raman.n_bar);
    }
  }
  return out;
}

GaussianState coherent_input(const Eigen::VectorXd& amplitudes) {
  const auto n = static_cast<std::size_t>(amplitudes.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(2 * amplitudes.size());
  for (Eigen::Index m = 0; m < amplitudes.size(); ++m) mean(2 * m) = 2.0 * amplitudes(m);
  return make_vacuum_state(n, mean);
}

ShotNoiseLevels shot_levels_of(const GaussianState& state) {
  Eigen::VectorXd levels(static_cast<Eigen::Index>(state.n_modes()));
  for (std::size_t m = 0; m < state.n_modes(); ++m) levels(static_cast<Eigen::Index>(m)) = std::norm(state.mean_field(m));
  return ShotNoiseLevels(std::move(levels));
}

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value) || digits >= 17) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, value);
  return std::strtod(buf, nullptr);
}

WindowScan simulate_window_scan(const QuadratureCovariance& true_c, const ShotNoiseLevels& shot,
                                const MeasurementNoiseParams& noise, std::uint64_t stream) {
  noise.validate();
  const PhotonCovariance photon = denormalize_covariance(true_c, shot);
  const double relative_sigma = std::isinf(noise.electronic_snr_db) ? 0.0 : std::pow(10.0, -noise.electronic_snr_db / 20.0);
  auto rng = make_stream(noise.rng_seed, stream);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<WindowRecord> records;
  for (const auto& w : enumerate_windows(true_c.n_bins())) {
    const double clean = predict_window_variance(photon, w);
    // Always draw so the stream position does not depend on the SNR.
    const double z = gauss(rng);
    const double noisy = clean + relative_sigma * std::abs(clean) * z;
    records.push_back({w, round_significant(noisy, noise.significant_digits), std::nullopt});
  }
  return {true_c.n_bins(), std::move(records)};
}

ShotNoiseLevels measured_shot_levels(const PhotonCovariance& photon_cov, const ShotNoiseLevels& shot,
                                     const MeasurementNoiseParams& noise) {
  noise.validate();
  if (photon_cov.n_bins() != shot.n_bins()) throw InputError("measured_shot_levels: dimension mismatch");
  const double leak = std::pow(10.0, -noise.cmrr_db / 10.0);
  Eigen::VectorXd levels = shot.levels();
  for (Eigen::Index m = 0; m < levels.size(); ++m) {
    const double measured = levels(m) + leak * (photon_cov.entries()(m, m) - levels(m));
    levels(m) = std::max(measured, levels(m) * 1e-6);
  }
  return ShotNoiseLevels(std::move(levels));
}

MonteCarloSummary monte_carlo_reconstruction(const QuadratureCovariance& true_c, const ShotNoiseLevels& shot,
                                             const MeasurementNoiseParams& noise, std::size_t runs) {
  if (runs < 2) throw InputError("monte_carlo_reconstruction: need at least two runs");
  const auto n = static_cast<Eigen::Index>(true_c.n_bins());
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t run = 0; run < runs; ++run) {
    const WindowScan scan = simulate_window_scan(true_c, shot, noise, run);
    const Eigen::MatrixXd c = normalize_covariance(reconstruct_covariance(scan), shot).entries();
    // Welford update.
    const Eigen::MatrixXd delta = c - mean;
    mean += delta / static_cast<double>(run + 1);
    m2 += delta.cwiseProduct(c - mean);
  }
  const double count = static_cast<double>(runs);
  Eigen::MatrixXd se = (m2 / (count - 1.0)).cwiseSqrt() / std::sqrt(count);
  return {runs, std::move(mean), std::move(se)};
}

}  // namespace scq
