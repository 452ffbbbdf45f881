#include "scq/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "scq/error.hpp"
#include "scq/io.hpp"

namespace scq {
namespace {

// Fixed-point coordinates keep the SVG byte-stable.
std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string hex_color(double r, double g, double b) {
  char buf[8];
  auto byte = [](double c) { return static_cast<int>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); };
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", byte(r), byte(g), byte(b));
  return buf;
}

// t in [-1, 1]: blue (-1) through white (0) to red (+1).
std::string diverging(double t) {
  t = std::clamp(t, -1.0, 1.0);
  if (t >= 0.0) return hex_color(1.0, 1.0 - 0.8 * t, 1.0 - 0.8 * t);
  return hex_color(1.0 + 0.8 * t, 1.0 + 0.8 * t, 1.0);
}

std::string svg_open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(width) + "\" height=\"" + coord(height) +
         "\" viewBox=\"0 0 " + coord(width) + " " + coord(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + coord(x) + "\" y=\"" + coord(y) + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const char* stroke, const char* extra = "") {
  return "<line x1=\"" + coord(x1) + "\" y1=\"" + coord(y1) + "\" x2=\"" + coord(x2) + "\" y2=\"" + coord(y2) +
         "\" stroke=\"" + stroke + "\"" + extra + "/>\n";
}

std::string rect(double x, double y, double w, double h, const std::string& fill) {
  return "<rect x=\"" + coord(x) + "\" y=\"" + coord(y) + "\" width=\"" + coord(w) + "\" height=\"" + coord(h) +
         "\" fill=\"" + fill + "\"/>\n";
}

// Axis range [lo, hi] with a little headroom, always containing 0.
std::pair<double, double> padded_range(double lo, double hi) {
  lo = std::min(lo, 0.0);
  hi = std::max(hi, 0.0);
  const double span = hi - lo;
  const double pad = span > 0.0 ? 0.08 * span : 1.0;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_heatmap_svg(const Eigen::MatrixXd& c) {
  const auto n = c.rows();
  // Diagonal deviations are measured from 1 (shot noise), the rest from 0.
  Eigen::MatrixXd centered = c;
  centered.diagonal().array() -= 1.0;
  const double limit = std::max(centered.cwiseAbs().maxCoeff(), 1e-12);

  const double cell = std::max(8.0, 380.0 / static_cast<double>(std::max<Eigen::Index>(n, 1)));
  const double left = 40.0;
  const double top = 40.0;
  const double grid = cell * static_cast<double>(n);
  const double width = left + grid + 120.0;
  const double height = top + grid + 50.0;

  std::ostringstream svg;
  svg << svg_open(width, height);
  svg << text(left + grid / 2.0, 20.0, "covariance matrix C");
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) {
      svg << rect(left + cell * static_cast<double>(k), top + cell * static_cast<double>(r), cell, cell,
                  diverging(centered(r, k) / limit));
    }
  }
  for (Eigen::Index m = 0; m < n; ++m) {
    const double mid = cell * (static_cast<double>(m) + 0.5);
    svg << text(left + mid, top + grid + 14.0, std::to_string(m + 1));
    svg << text(left - 6.0, top + mid + 4.0, std::to_string(m + 1), "end");
  }
  svg << text(left + grid / 2.0, top + grid + 32.0, "bin m'");

  // Legend: gradient swatches from -limit to +limit.
  const double lx = left + grid + 30.0;
  const int steps = 21;
  const double sh = grid / steps;
  for (int s = 0; s < steps; ++s) {
    const double t = 1.0 - 2.0 * s / (steps - 1.0);
    svg << rect(lx, top + sh * s, 16.0, sh, diverging(t));
  }
  svg << text(lx + 22.0, top + 8.0, "+" + format_number(limit), "start");
  svg << text(lx + 22.0, top + grid / 2.0 + 4.0, "0", "start");
  svg << text(lx + 22.0, top + grid, "-" + format_number(limit), "start");
  svg << text(lx - 4.0, top + grid + 32.0, "offset from 0 (off-diag), 1 (diag)", "middle");
  svg << "</svg>\n";
  return svg.str();
}

std::string render_bar_chart_svg(const Eigen::VectorXd& levels_db) {
  const auto n = levels_db.size();
  double lo = 0.0;
  double hi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(levels_db(i))) {
      lo = std::min(lo, levels_db(i));
      hi = std::max(hi, levels_db(i));
    }
  }
  const auto [ymin, ymax] = padded_range(lo, hi);

  const double left = 60.0;
  const double top = 30.0;
  const double plot_w = std::max(200.0, 22.0 * static_cast<double>(n));
  const double plot_h = 240.0;
  auto y_of = [&](double v) { return top + (ymax - std::clamp(v, ymin, ymax)) / (ymax - ymin) * plot_h; };
  const double slot = plot_w / static_cast<double>(std::max<Eigen::Index>(n, 1));

  std::ostringstream svg;
  svg << svg_open(left + plot_w + 20.0, top + plot_h + 50.0);
  svg << text(left + plot_w / 2.0, 18.0, "squeezing level per eigenmode (dB relative to shot noise)");
  svg << line(left, top, left, top + plot_h, "#000000");
  svg << text(left - 6.0, y_of(ymax) + 4.0, format_number(round6(ymax)), "end");
  svg << text(left - 6.0, y_of(ymin) + 4.0, format_number(round6(ymin)), "end");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = levels_db(i);
    const double y0 = y_of(0.0);
    const double y1 = std::isfinite(v) ? y_of(v) : y_of(ymin);
    const std::string fill = !std::isfinite(v) ? "#777777" : (v < 0.0 ? "#2b6cb0" : "#c53030");
    svg << rect(left + slot * static_cast<double>(i) + 0.15 * slot, std::min(y0, y1), 0.7 * slot, std::abs(y1 - y0), fill);
    svg << text(left + slot * (static_cast<double>(i) + 0.5), top + plot_h + 14.0, std::to_string(i + 1));
  }
  svg << line(left, y_of(0.0), left + plot_w, y_of(0.0), "#000000", " stroke-dasharray=\"4 2\"");
  svg << text(left + plot_w, y_of(0.0) - 4.0, "0 dB (shot noise)", "end");
  svg << text(left + plot_w / 2.0, top + plot_h + 34.0, "eigenmode m");
  svg << "</svg>\n";
  return svg.str();
}

std::string render_line_plot_svg(const Eigen::VectorXd& values, const std::string& title) {
  const auto n = values.size();
  const auto [ymin, ymax] = padded_range(n > 0 ? values.minCoeff() : 0.0, n > 0 ? values.maxCoeff() : 0.0);
  const double left = 60.0;
  const double top = 30.0;
  const double plot_w = 360.0;
  const double plot_h = 200.0;
  auto x_of = [&](Eigen::Index i) {
    return n > 1 ? left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1) : left + plot_w / 2.0;
  };
  auto y_of = [&](double v) { return top + (ymax - v) / (ymax - ymin) * plot_h; };

  std::ostringstream svg;
  svg << svg_open(left + plot_w + 20.0, top + plot_h + 50.0);
  svg << text(left + plot_w / 2.0, 18.0, title);
  svg << line(left, top, left, top + plot_h, "#000000");
  svg << line(left, y_of(0.0), left + plot_w, y_of(0.0), "#999999", " stroke-dasharray=\"4 2\"");
  svg << text(left - 6.0, y_of(ymax) + 4.0, format_number(round6(ymax)), "end");
  svg << text(left - 6.0, y_of(ymin) + 4.0, format_number(round6(ymin)), "end");
  svg << "<polyline fill=\"none\" stroke=\"#2b6cb0\" stroke-width=\"1.5\" points=\"";
  for (Eigen::Index i = 0; i < n; ++i) svg << (i > 0 ? " " : "") << coord(x_of(i)) << ',' << coord(y_of(values(i)));
  svg << "\"/>\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    svg << "<circle cx=\"" << coord(x_of(i)) << "\" cy=\"" << coord(y_of(values(i))) << "\" r=\"2.5\" fill=\"#2b6cb0\"/>\n";
    svg << text(x_of(i), top + plot_h + 14.0, std::to_string(i + 1));
  }
  svg << text(left + plot_w / 2.0, top + plot_h + 34.0, "spectral bin");
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const AnalysisReport& report, const std::filesystem::path& outdir) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) throw InputError("cannot create plot directory " + outdir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& name, const std::string& contents) {
    const auto path = outdir / name;
    write_text_file(path, contents);
    written.push_back(path);
  };

  const auto& c = report.covariance.entries();
  const auto& d = report.decomposition;
  put("covariance_heatmap.svg", render_heatmap_svg(c));
  {
    std::ostringstream csv;
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) csv << (k > 0 ? "," : "") << format_number(c(r, k));
      csv << "\n";
    }
    put("covariance_heatmap.csv", csv.str());
  }

  put("squeezing_levels.svg", render_bar_chart_svg(d.squeezing_db));
  {
    std::ostringstream csv;
    csv << "mode,eigenvalue,level_db\n";
    for (Eigen::Index m = 0; m < d.eigenvalues.size(); ++m) {
      csv << m + 1 << ',' << format_number(d.eigenvalues(m)) << ',' << format_number(d.squeezing_db(m)) << "\n";
    }
    put("squeezing_levels.csv", csv.str());
  }

  const auto n = static_cast<std::size_t>(d.eigenvalues.size());
  std::set<std::size_t> modes;
  for (const std::size_t m : {std::size_t{1}, std::size_t{2}, n}) {
    if (m >= 1 && m <= n) modes.insert(m);
  }
  for (const auto m : modes) {
    const auto row = static_cast<Eigen::Index>(m - 1);
    const Eigen::VectorXd shape = d.mode_shapes.normalized.row(row).transpose();
    put("mode_shape_" + std::to_string(m) + ".svg",
        render_line_plot_svg(shape, "eigenmode " + std::to_string(m) + " spectral amplitude (unit norm)"));
    std::ostringstream csv;
    csv << "bin,raw,normalized\n";
    for (Eigen::Index j = 0; j < shape.size(); ++j) {
      csv << j + 1 << ',' << format_number(d.mode_shapes.raw(row, j)) << ',' << format_number(shape(j)) << "\n";
    }
    put("mode_shape_" + std::to_string(m) + ".csv", csv.str());
  }
  return written;
}

}  // namespace scq
