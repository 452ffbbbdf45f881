#include "scq/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "scq/error.hpp"
#include "scq/fiber.hpp"
#include "scq/gaussian.hpp"
#include "scq/io.hpp"
#include "scq/modal.hpp"
#include "scq/window.hpp"

#ifndef SCQ_FIXTURE_DIR
#define SCQ_FIXTURE_DIR "data/fixtures"
#endif

namespace scq::acceptance {
namespace {

constexpr double kEigenvalueTolerance = 2e-3;
constexpr double kLevelToleranceDb = 0.02;
constexpr double kRoundTripTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-10;
constexpr double kPrintedMin5mW = 0.70382;
constexpr double kPrintedMin15mW = 0.60807;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// Runs body, turning library exceptions into a failed result.
template <typename Body>
CriterionResult run(int id, std::string name, Body&& body) {
  CriterionResult r{id, std::move(name), false, "", 0.0};
  Stopwatch watch;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = watch.seconds();
  return r;
}

Eigen::MatrixXd random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = a; b < size; ++b) {
      m(a, b) = u(rng);
      m(b, a) = m(a, b);
    }
  }
  return m;
}

CriterionResult check_eigenvalues(int id, const std::filesystem::path& dir, const std::string& power,
                                  const std::string& label) {
  return run(id, "fixture eigenvalues (" + label + ")", [&](CriterionResult& r) {
    const FixtureSet fx = load_fixture(dir, power);
    Stopwatch watch;
    const ModalDecomposition d = diagonalize(fx.c);
    const double elapsed = watch.seconds();
    const double err = (d.eigenvalues - fx.printed_eigenvalues).cwiseAbs().maxCoeff();
    r.passed = d.eigenvalues.size() == 19 && err < kEigenvalueTolerance && elapsed < 1.0;
    r.detail = fmt("19 eigenvalues, max |v - v_printed| = %.3g (tol 2e-3), v1 = %.6g, diagonalize %.3g s (limit 1 s)",
                   err, d.eigenvalues(0), elapsed);
  });
}

}  // namespace

std::filesystem::path default_fixture_dir() { return SCQ_FIXTURE_DIR; }

FixtureSet load_fixture(const std::filesystem::path& dir, const std::string& power) {
  const auto c = parse_covariance_fixture(dir / ("c_" + power + ".csv"));
  const Eigen::MatrixXd v = parse_matrix_csv(dir / ("v_" + power + ".csv"));
  Eigen::MatrixXd u = parse_matrix_csv(dir / ("u_" + power + ".csv"));
  if (v.rows() != v.cols() || v.rows() != static_cast<Eigen::Index>(c.c.n_bins()) || u.rows() != v.rows() ||
      u.cols() != v.cols()) {
    throw InputError("fixture " + power + ": C, V and U sizes disagree");
  }
  return {c.c, v.diagonal(), std::move(u)};
}

ShotNoiseLevels illustrative_shot_levels(std::size_t n_bins) {
  Eigen::VectorXd levels(static_cast<Eigen::Index>(n_bins));
  const double centre = 0.5 * (static_cast<double>(n_bins) + 1.0);
  const double width = std::max(1.0, static_cast<double>(n_bins) / 3.0);
  for (std::size_t m = 1; m <= n_bins; ++m) {
    const double x = (static_cast<double>(m) - centre) / width;
    levels(static_cast<Eigen::Index>(m - 1)) = 1e6 * (0.3 + std::exp(-x * x));
  }
  return ShotNoiseLevels(std::move(levels));
}

CriterionResult check_fixture_checksums(const std::filesystem::path& dir) {
  return run(0, "fixture transcription checksums", [&](CriterionResult& r) {
    std::ifstream sums(dir / "SHA256SUMS");
    if (!sums) throw InputError("missing " + (dir / "SHA256SUMS").string());
    std::string digest;
    std::string name;
    int checked = 0;
    int bad = 0;
    while (sums >> digest >> name) {
      if (sha256_file(dir / name) != digest) {
        ++bad;
        r.detail += name + " mismatch; ";
      }
      ++checked;
    }
    r.passed = checked == 6 && bad == 0;
    r.detail += std::to_string(checked) + " files checked, " + std::to_string(bad) + " mismatched";
  });
}

CriterionResult check_eigenvalues_5mw(const std::filesystem::path& dir) {
  return check_eigenvalues(1, dir, "5mw", "5 mW");
}

CriterionResult check_eigenvalues_15mw(const std::filesystem::path& dir) {
  return check_eigenvalues(2, dir, "15mw", "15 mW");
}

CriterionResult check_squeezed_counts(const std::filesystem::path& dir) {
  return run(3, "squeezed-mode counts", [&](CriterionResult& r) {
    const ModalDecomposition low = diagonalize(load_fixture(dir, "5mw").c);
    const ModalDecomposition high = diagonalize(load_fixture(dir, "15mw").c);
    const std::size_t low_count = count_squeezed_modes(low);
    const std::size_t high_count = count_squeezed_modes(high);
    const auto marginal = marginal_modes(low);
    const bool sixth_marginal = std::find(marginal.begin(), marginal.end(), std::size_t{5}) != marginal.end();
    r.passed = high_count == 1 && low_count >= 5 && sixth_marginal;
    r.detail = "15 mW: " + std::to_string(high_count) + " (need 1); 5 mW: " + std::to_string(low_count) +
               " (need >= 5); 5 mW mode 6 at " + format_number(low.squeezing_db(5)) + " dB " +
               (sixth_marginal ? "flagged marginal" : "NOT flagged marginal");
  });
}

CriterionResult check_squeezing_levels(const std::filesystem::path& dir) {
  return run(4, "minimum squeezing levels", [&](CriterionResult& r) {
    const double low = diagonalize(load_fixture(dir, "5mw").c).squeezing_db(0);
    const double high = diagonalize(load_fixture(dir, "15mw").c).squeezing_db(0);
    const double low_ref = 10.0 * std::log10(kPrintedMin5mW);
    const double high_ref = 10.0 * std::log10(kPrintedMin15mW);
    r.passed = std::abs(low - low_ref) < kLevelToleranceDb && std::abs(high - high_ref) < kLevelToleranceDb;
    r.detail = fmt("5 mW %.4f dB, 15 mW %.4f dB", low, high) +
               fmt(" (references %.4f, %.4f dB, tol 0.02 dB)", low_ref, high_ref);
  });
}

CriterionResult check_reconstruction_round_trip() {
  return run(5, "reconstruction round trip", [&](CriterionResult& r) {
    Stopwatch watch;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 18);
      const PhotonCovariance truth(random_symmetric(n, rng));
      const PhotonCovariance back = reconstruct_covariance(predict_complete_scan(truth));
      worst = std::max(worst, (back.entries() - truth.entries()).cwiseAbs().maxCoeff());
    }
    const double elapsed = watch.seconds();
    r.passed = worst < kRoundTripTolerance && elapsed < 10.0;
    r.detail = fmt("100 matrices, n = 2..19, max entry error %.3g (tol 1e-9), %.3g s (limit 10 s)", worst, elapsed);
  });
}

CriterionResult check_solver_oracle_equivalence() {
  return run(6, "solver / inclusion-exclusion equivalence", [&](CriterionResult& r) {
    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (std::size_t n = 1; n <= 19; ++n) {
      const WindowScan scan = predict_complete_scan(PhotonCovariance(random_symmetric(n, rng)));
      const double diff =
          (reconstruct_covariance(scan).entries() - inclusion_exclusion_reconstruct(scan).entries()).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
    }
    r.passed = worst < kOracleTolerance;
    r.detail = fmt("n = 1..19, max |least squares - closed form| = %.3g (tol 1e-10)", worst);
  });
}

CriterionResult check_gaussian_invariants() {
  return run(7, "gaussian-core invariants", [&](CriterionResult& r) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> kind(0, 2);
    double worst_defect = 0.0;
    double worst_physical = 1.0;
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      SymplecticMatrix s = SymplecticMatrix::identity(n);
      const int ops = 1 + trial % 8;
      for (int k = 0; k < ops; ++k) {
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        while (j == i) j = pick(rng);
        switch (kind(rng)) {
          case 0: s = two_mode_squeezer(unit(rng) - 0.5, i, j, n) * s; break;
          case 1: s = beam_splitter(2.0 * M_PI * unit(rng), i, j, n) * s; break;
          default: s = phase_shift(2.0 * M_PI * unit(rng), i, n) * s; break;
        }
      }
      worst_defect = std::max(worst_defect, s.symplectic_defect());
      // Thermal input: cov = (2 n_th + 1) I per mode.
      Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2 * n, 2 * n);
      for (std::size_t m = 0; m < n; ++m) cov.block<2, 2>(2 * m, 2 * m) *= 1.0 + 2.0 * unit(rng);
      const GaussianState out = apply_symplectic(GaussianState(n, Eigen::VectorXd::Zero(2 * n), cov), s);
      worst_physical = std::min(worst_physical, out.min_uncertainty_eigenvalue());
      if (!out.is_physical()) ++failures;
    }

    // Raman floor: the affected diagonal never drops below min(original, 2 n_bar + 1).
    int raman_violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
      GaussianState state = make_vacuum_state(n);
      if (n > 1) state = apply_symplectic(state, two_mode_squeezer(unit(rng) - 0.5, 0, n - 1, n));
      state = apply_symplectic(state, single_mode_squeezer(unit(rng) - 0.5, 0, n));
      const std::size_t mode = static_cast<std::size_t>(trial) % n;
      const double eta = unit(rng);
      const double n_bar = 3.0 * unit(rng);
      const GaussianState after = raman_channel(state, mode, eta, n_bar);
      for (int q = 0; q < 2; ++q) {
        const auto idx = static_cast<Eigen::Index>(2 * mode + q);
        const double floor = std::min(state.cov()(idx, idx), 2.0 * n_bar + 1.0);
        if (after.cov()(idx, idx) < floor - 1e-12) ++raman_violations;
      }
      if (!after.is_physical()) ++raman_violations;
    }
    r.passed = worst_defect < kSymplecticTolerance && failures == 0 && raman_violations == 0;
    r.detail = fmt("1000 compositions: max defect %.3g (tol 1e-10), min eig(cov + i Omega) %.3g; ", worst_defect,
                   worst_physical) +
               std::to_string(failures) + " unphysical outputs, " + std::to_string(raman_violations) +
               " Raman floor violations in 1000 draws";
  });
}

CriterionResult check_monte_carlo_consistency(const std::filesystem::path& dir) {
  return run(8, "Monte Carlo consistency (41 dB)", [&](CriterionResult& r) {
    const QuadratureCovariance c = load_fixture(dir, "5mw").c;
    MeasurementNoiseParams noise;
    noise.electronic_snr_db = 41.0;
    noise.rng_seed = 20201015;
    const MonteCarloSummary mc = monte_carlo_reconstruction(c, illustrative_shot_levels(c.n_bins()), noise, 500);
    const Eigen::MatrixXd z = (mc.mean - c.entries()).cwiseAbs().cwiseQuotient(mc.standard_error);
    const Eigen::Index n = z.rows();
    int over = 0;
    double z2 = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = a; b < n; ++b) {
        over += z(a, b) >= 3.0 ? 1 : 0;
        z2 += z(a, b) * z(a, b);
      }
    }
    z2 /= static_cast<double>(n * (n + 1) / 2);
    r.passed = over == 0;
    r.detail = fmt("500 runs, max |mean - C| / SE = %.3g over 190 entries (limit 3), median SE %.3g", z.maxCoeff(),
                   [&] {
                     std::vector<double> se(mc.standard_error.data(), mc.standard_error.data() + mc.standard_error.size());
                     std::nth_element(se.begin(), se.begin() + static_cast<std::ptrdiff_t>(se.size() / 2), se.end());
                     return se[se.size() / 2];
                   }()) +
               "; " + std::to_string(over) + " entries at or above 3 SE" + fmt(", mean z^2 %.3g (1 if unbiased)", z2);
  });
}

std::vector<CriterionResult> run_fixture_checks(const std::filesystem::path& dir) {
  return {check_eigenvalues_5mw(dir), check_eigenvalues_15mw(dir), check_squeezed_counts(dir),
          check_squeezing_levels(dir)};
}

std::vector<CriterionResult> run_library_checks(const std::filesystem::path& dir) {
  auto out = run_fixture_checks(dir);
  out.push_back(check_reconstruction_round_trip());
  out.push_back(check_solver_oracle_equivalence());
  out.push_back(check_gaussian_invariants());
  out.push_back(check_monte_carlo_consistency(dir));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char timing[32];
  std::snprintf(timing, sizeof(timing), "%.3f s", r.seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + ": " + r.detail + " (" +
         timing + ")";
}

}  // namespace scq::acceptance
