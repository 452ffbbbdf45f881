#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "scq/covariance.hpp"
#include "scq/modal.hpp"

namespace scq {

inline constexpr const char* kToolVersion = "0.3.1";

struct Provenance {
  std::string tool_version = kToolVersion;
  std::optional<std::uint64_t> seed;  // set for synthetic inputs
  bool unit_shot_levels = false;      // no shot file was supplied
};

struct AnalysisReport {
  std::map<std::string, std::string> input_digest;  // role -> sha256
  std::size_t n_bins = 0;
  std::optional<PhotonCovariance> photon_covariance;
  QuadratureCovariance covariance = QuadratureCovariance::identity(1);
  ModalDecomposition decomposition;
  std::size_t squeezed_modes = 0;
  std::vector<std::size_t> marginal_modes;  // 1-based
  Provenance provenance;
};

enum class ReportFormat { kText, kJson };

// Diagonalizes c, weights mode shapes by shot and fills counts and flags.
AnalysisReport build_report(const QuadratureCovariance& c, const ShotNoiseLevels& shot,
                            std::optional<PhotonCovariance> photon_cov = std::nullopt);

// Numbers are rounded to 6 significant digits; keys sorted.
nlohmann::json report_to_json(const AnalysisReport& report);
// Throws InputError on a malformed document.
AnalysisReport report_from_json(const nlohmann::json& doc);

std::string render_report(const AnalysisReport& report, ReportFormat format);
void emit_report(const AnalysisReport& report, ReportFormat format, const std::filesystem::path& path);

// JSON helpers shared with the CLI's reconstruct output.
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);
// Canonical dump: sorted keys, two-space indent, trailing newline.
std::string dump_json(const nlohmann::json& j);

}  // namespace scq
