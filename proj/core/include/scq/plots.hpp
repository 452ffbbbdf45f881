#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scq/report.hpp"

namespace scq {

// Writes into outdir:
//   covariance_heatmap.svg / .csv   C with a diverging scale (off-diagonal
//                                   centered at 0, diagonal centered at 1)
//   squeezing_levels.svg / .csv     one bar per eigenmode, 0 dB reference
//   mode_shape_<m>.svg / .csv       normalized spectral amplitude for m = 1, 2, N
// Returns the files written, in that order. Throws InputError if outdir
// cannot be created or written.
std::vector<std::filesystem::path> emit_plots(const AnalysisReport& report, const std::filesystem::path& outdir);

// Individual SVG renderers, exposed for tests.
std::string render_heatmap_svg(const Eigen::MatrixXd& c);
std::string render_bar_chart_svg(const Eigen::VectorXd& levels_db);
std::string render_line_plot_svg(const Eigen::VectorXd& values, const std::string& title);

}  // namespace scq
