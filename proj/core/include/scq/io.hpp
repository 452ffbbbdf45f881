#pragma once

// File formats.
//
//   window scan   CSV, header `k,l,variance[,sigma]`, k 1-based
//   shot noise    CSV, header `bin,level`, bin 1-based
//   covariance    N rows of N comma-separated values, no header
//   simulation    TOML subset: `key = number`, `key = [..]`, `key = [[..], ..]`

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "scq/covariance.hpp"
#include "scq/fiber.hpp"
#include "scq/window.hpp"

namespace scq {

// Shortest representation that round-trips at 6 significant digits
// ("%.6g"); infinities print as "inf" / "-inf".
std::string format_number(double value);
// value rounded to 6 significant digits.
double round6(double value);

// Errors carry the line number. n_bins defaults to the largest k+l seen.
WindowScan read_window_scan(std::istream& in, std::optional<std::size_t> n_bins = std::nullopt);
WindowScan parse_window_scan(const std::filesystem::path& path, std::optional<std::size_t> n_bins = std::nullopt);
void write_window_scan(const std::filesystem::path& path, const WindowScan& scan);

ShotNoiseLevels read_shot_levels(std::istream& in);
ShotNoiseLevels parse_shot_levels(const std::filesystem::path& path);
void write_shot_levels(const std::filesystem::path& path, const ShotNoiseLevels& shot);

Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd parse_matrix_csv(const std::filesystem::path& path);
// Values in format_number form, or with `digits` significant digits.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m, int digits = 6);

struct CovarianceFixture {
  QuadratureCovariance c;
  double max_asymmetry = 0.0;
};

// Square CSV matrix, symmetrized.
CovarianceFixture parse_covariance_fixture(const std::filesystem::path& path);

struct SimulationConfig {
  FiberParams fiber;
  MeasurementNoiseParams noise;
  Eigen::VectorXd amplitudes;  // input |A_m| per bin
};

SimulationConfig read_simulation_config(std::istream& in);
SimulationConfig parse_simulation_config(const std::filesystem::path& path);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

// Writes atomically enough for our purposes: opens, writes, checks the stream.
// Throws InputError if the path is unwritable.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace scq
