#pragma once

// Executable acceptance checks against the bundled experimental fixtures and
// the reconstruction/forward-model property suite. Each check is
// self-contained and reports a single pass/fail line.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scq/covariance.hpp"

namespace scq::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Directory holding c_5mw.csv, v_5mw.csv, u_5mw.csv and the 15 mW set.
std::filesystem::path default_fixture_dir();

struct FixtureSet {
  QuadratureCovariance c;
  Eigen::VectorXd printed_eigenvalues;  // diagonal of the printed V
  Eigen::MatrixXd printed_u;            // as printed: eigenvectors in columns
};

// power: "5mw" or "15mw".
FixtureSet load_fixture(const std::filesystem::path& dir, const std::string& power);

// Smooth illustrative |A_m|^2 profile used when a fixture needs de-normalizing.
ShotNoiseLevels illustrative_shot_levels(std::size_t n_bins);

// Verifies data/fixtures against the committed SHA256SUMS file.
CriterionResult check_fixture_checksums(const std::filesystem::path& dir);

CriterionResult check_eigenvalues_5mw(const std::filesystem::path& dir);
CriterionResult check_eigenvalues_15mw(const std::filesystem::path& dir);
CriterionResult check_squeezed_counts(const std::filesystem::path& dir);
CriterionResult check_squeezing_levels(const std::filesystem::path& dir);
CriterionResult check_reconstruction_round_trip();
CriterionResult check_solver_oracle_equivalence();
CriterionResult check_gaussian_invariants();
CriterionResult check_monte_carlo_consistency(const std::filesystem::path& dir);

// Criteria 1-4 (fixture checks).
std::vector<CriterionResult> run_fixture_checks(const std::filesystem::path& dir);
// Criteria 1-8.
std::vector<CriterionResult> run_library_checks(const std::filesystem::path& dir);

// "[PASS] 1 fixture eigenvalues (5 mW): max |dv| = ... (0.012 s)"
std::string format_result(const CriterionResult& r);

}  // namespace scq::acceptance
