#include "scq/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "scq/error.hpp"
#include "scq/io.hpp"

namespace scq {
namespace {

using nlohmann::json;

json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return round6(v);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("report: expected a number, got " + j.dump());
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_to_json(v(i)));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw InputError("report: expected an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw InputError(std::string("report: missing field '") + key + "'");
  return doc.at(key);
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InputError("report: expected a non-empty matrix");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError("report: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_from_json(j[r][c]);
    }
  }
  return m;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

AnalysisReport build_report(const QuadratureCovariance& c, const ShotNoiseLevels& shot,
                            std::optional<PhotonCovariance> photon_cov) {
  AnalysisReport report;
  report.n_bins = c.n_bins();
  report.covariance = c;
  report.photon_covariance = std::move(photon_cov);
  report.decomposition = diagonalize(c);
  report.decomposition.mode_shapes = eigenmode_spectral_amplitude(report.decomposition, shot);
  report.squeezed_modes = count_squeezed_modes(report.decomposition);
  for (const auto m : marginal_modes(report.decomposition)) report.marginal_modes.push_back(m + 1);
  return report;
}

nlohmann::json report_to_json(const AnalysisReport& report) {
  json doc;
  doc["n_bins"] = report.n_bins;
  doc["input_digest"] = report.input_digest;
  doc["photon_covariance"] = report.photon_covariance ? matrix_to_json(report.photon_covariance->entries()) : json();
  doc["covariance"] = matrix_to_json(report.covariance.entries());
  const auto& d = report.decomposition;
  doc["decomposition"] = {
      {"u", matrix_to_json(d.u)},
      {"eigenvalues", vector_to_json(d.eigenvalues)},
      {"squeezing_db", vector_to_json(d.squeezing_db)},
      {"mode_shapes", {{"raw", matrix_to_json(d.mode_shapes.raw)}, {"normalized", matrix_to_json(d.mode_shapes.normalized)}}},
  };
  doc["squeezed_modes"] = report.squeezed_modes;
  doc["marginal_modes"] = report.marginal_modes;
  doc["provenance"] = {
      {"tool_version", report.provenance.tool_version},
      {"seed", report.provenance.seed ? json(*report.provenance.seed) : json()},
      {"unit_shot_levels", report.provenance.unit_shot_levels},
  };
  return doc;
}

AnalysisReport report_from_json(const nlohmann::json& doc) {
  AnalysisReport r;
  try {
    r.n_bins = field(doc, "n_bins").get<std::size_t>();
    r.input_digest = field(doc, "input_digest").get<std::map<std::string, std::string>>();
    if (const auto& pc = field(doc, "photon_covariance"); !pc.is_null()) {
      r.photon_covariance = PhotonCovariance(matrix_from_json(pc));
    }
    r.covariance = QuadratureCovariance(matrix_from_json(field(doc, "covariance")));
    const auto& d = field(doc, "decomposition");
    r.decomposition.u = matrix_from_json(field(d, "u"));
    r.decomposition.eigenvalues = vector_from_json(field(d, "eigenvalues"));
    r.decomposition.squeezing_db = vector_from_json(field(d, "squeezing_db"));
    const auto& shapes = field(d, "mode_shapes");
    r.decomposition.mode_shapes.raw = matrix_from_json(field(shapes, "raw"));
    r.decomposition.mode_shapes.normalized = matrix_from_json(field(shapes, "normalized"));
    r.squeezed_modes = field(doc, "squeezed_modes").get<std::size_t>();
    r.marginal_modes = field(doc, "marginal_modes").get<std::vector<std::size_t>>();
    const auto& p = field(doc, "provenance");
    r.provenance.tool_version = field(p, "tool_version").get<std::string>();
    if (const auto& seed = field(p, "seed"); !seed.is_null()) r.provenance.seed = seed.get<std::uint64_t>();
    r.provenance.unit_shot_levels = field(p, "unit_shot_levels").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  if (r.covariance.n_bins() != r.n_bins || static_cast<std::size_t>(r.decomposition.eigenvalues.size()) != r.n_bins) {
    throw InputError("report: matrix sizes disagree with n_bins");
  }
  return r;
}

std::string render_report(const AnalysisReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return dump_json(report_to_json(report));

  std::ostringstream out;
  out << "squeezed-mode analysis report\n";
  out << "tool version: " << report.provenance.tool_version << "\n";
  if (report.provenance.seed) out << "seed: " << *report.provenance.seed << "\n";
  out << "bins: " << report.n_bins << "\n";
  for (const auto& [role, digest] : report.input_digest) out << "input " << role << ": sha256 " << digest << "\n";
  if (report.provenance.unit_shot_levels) out << "shot levels: unit (no shot file)\n";
  out << "squeezed modes (< 0 dB): " << report.squeezed_modes << "\n";
  out << "marginal modes (|level| < " << format_number(kMarginalBandDb) << " dB):";
  if (report.marginal_modes.empty()) out << " none";
  for (const auto m : report.marginal_modes) out << ' ' << m;
  out << "\n\n";

  out << "mode  eigenvalue    level_dB  status\n";
  const auto& d = report.decomposition;
  for (Eigen::Index m = 0; m < d.eigenvalues.size(); ++m) {
    const double level = d.squeezing_db(m);
    std::string status = level < 0.0 ? "squeezed" : "";
    if (std::abs(level) < kMarginalBandDb) status += status.empty() ? "marginal" : ",marginal";
    if (!(d.eigenvalues(m) > 0.0)) status = "non-positive";
    out << pad(std::to_string(m + 1), 4) << pad(format_number(d.eigenvalues(m)), 12) << pad(format_number(level), 12)
        << "  " << status << "\n";
  }

  out << "\ncovariance matrix C:\n";
  for (Eigen::Index r = 0; r < report.covariance.entries().rows(); ++r) {
    for (Eigen::Index c = 0; c < report.covariance.entries().cols(); ++c) {
      out << (c > 0 ? " " : "") << pad(format_number(report.covariance.entries()(r, c)), 12);
    }
    out << "\n";
  }
  return out.str();
}

void emit_report(const AnalysisReport& report, ReportFormat format, const std::filesystem::path& path) {
  write_text_file(path, render_report(report, format));
}

}  // namespace scq
