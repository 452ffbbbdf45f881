#include "scq/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "scq/error.hpp"

namespace scq {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double parse_double(const std::string& s, std::size_t line, const char* field) {
  if (s.empty()) throw InputError(where(line) + "missing " + field);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw InputError(where(line) + "invalid " + field + " '" + s + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& s, std::size_t line, const char* field) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError(where(line) + "invalid " + field + " '" + s + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

// Reads the next non-blank line, tracking 1-based line numbers.
bool next_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) return true;
  }
  return false;
}

// --- simulation config: a TOML subset -------------------------------------

struct ConfigValue {
  bool is_list = false;
  double number = 0.0;
  std::vector<ConfigValue> items;
  std::size_t line = 0;
};

class ConfigParser {
 public:
  explicit ConfigParser(std::string text) : text_(std::move(text)) {}

  std::vector<std::pair<std::string, ConfigValue>> parse() {
    std::vector<std::pair<std::string, ConfigValue>> out;
    while (true) {
      skip_space(true);
      if (pos_ >= text_.size()) break;
      const std::size_t key_line = line_;
      std::string key;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        key += text_[pos_++];
      }
      if (key.empty()) fail("expected a key");
      skip_space(false);
      if (pos_ >= text_.size() || text_[pos_] != '=') fail("expected '=' after '" + key + "'");
      ++pos_;
      skip_space(false);
      ConfigValue value = parse_value();
      value.line = key_line;
      skip_space(false);
      if (pos_ < text_.size() && text_[pos_] != '\n') fail("unexpected trailing characters");
      out.emplace_back(std::move(key), std::move(value));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw InputError("config " + where(line_) + what); }

  void skip_space(bool newlines) {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n' && newlines) {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  ConfigValue parse_value() {
    ConfigValue v;
    v.line = line_;
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      v.is_list = true;
      while (true) {
        skip_space(true);
        if (pos_ >= text_.size()) fail("unterminated array");
        if (text_[pos_] == ']') {
          ++pos_;
          break;
        }
        v.items.push_back(parse_value());
        skip_space(true);
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
        } else if (pos_ < text_.size() && text_[pos_] != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      return v;
    }
    std::string token;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != ',' &&
           text_[pos_] != ']' && text_[pos_] != '#') {
      token += text_[pos_++];
    }
    if (token == "inf" || token == "+inf") {
      v.number = INFINITY;
      return v;
    }
    char* end = nullptr;
    v.number = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || std::isnan(v.number)) {
      fail("invalid number '" + token + "'");
    }
    return v;
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

double as_number(const ConfigValue& v, const std::string& key) {
  if (v.is_list) throw InputError("config " + where(v.line) + key + " must be a number");
  return v.number;
}

std::size_t as_count(const ConfigValue& v, const std::string& key, std::size_t min) {
  const double d = as_number(v, key);
  if (!(d >= static_cast<double>(min)) || d != std::floor(d) || d > 1e9) {
    throw InputError("config " + where(v.line) + key + " must be an integer >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(d);
}

std::vector<std::vector<double>> as_rows(const ConfigValue& v, const std::string& key, std::size_t width) {
  if (!v.is_list) throw InputError("config " + where(v.line) + key + " must be an array of arrays");
  std::vector<std::vector<double>> rows;
  for (const auto& item : v.items) {
    if (!item.is_list || item.items.size() != width) {
      throw InputError("config " + where(v.line) + key + " entries must have " + std::to_string(width) + " numbers");
    }
    std::vector<double> row;
    for (const auto& x : item.items) row.push_back(as_number(x, key));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::size_t as_bin(double d, std::size_t line, const std::string& key) {
  if (!(d >= 1.0) || d != std::floor(d) || d > 1e9) {
    throw InputError("config " + where(line) + key + ": bin indices are integers starting at 1");
  }
  return static_cast<std::size_t>(d) - 1;
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

double round6(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

WindowScan read_window_scan(std::istream& in, std::optional<std::size_t> n_bins) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw InputError("window scan: no records");
  const auto header = split_csv(line);
  const bool with_sigma = header.size() == 4 && header[3] == "sigma";
  if (header.size() < 3 || header[0] != "k" || header[1] != "l" || header[2] != "variance" ||
      (header.size() == 4 && !with_sigma) || header.size() > 4) {
    throw InputError(where(number) + "expected header 'k,l,variance[,sigma]'");
  }
  std::vector<WindowRecord> records;
  std::set<SpectralWindow> seen;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() < 3 || cells.size() > header.size()) {
      throw InputError(where(number) + "expected " + std::to_string(header.size()) + " fields");
    }
    WindowRecord rec;
    rec.window.k = parse_index(cells[0], number, "k");
    rec.window.l = parse_index(cells[1], number, "l");
    rec.variance = parse_double(cells[2], number, "variance");
    if (cells.size() == 4 && !cells[3].empty()) rec.sigma = parse_double(cells[3], number, "sigma");
    if (rec.window.k < 1) throw InputError(where(number) + "k is 1-based");
    if (n_bins && rec.window.k + rec.window.l > *n_bins) {
      throw InputError(where(number) + "window k+l=" + std::to_string(rec.window.k + rec.window.l) + " exceeds " +
                       std::to_string(*n_bins) + " bins");
    }
    if (rec.sigma && !(*rec.sigma > 0.0)) throw InputError(where(number) + "sigma must be positive");
    if (!seen.insert(rec.window).second) {
      throw InputError(where(number) + "duplicate window (k=" + std::to_string(rec.window.k) +
                       ", l=" + std::to_string(rec.window.l) + ")");
    }
    records.push_back(rec);
  }
  if (records.empty()) throw InputError("window scan: no records");
  std::size_t n = 0;
  for (const auto& r : records) n = std::max(n, r.window.last());
  return {n_bins.value_or(n), std::move(records)};
}

WindowScan parse_window_scan(const std::filesystem::path& path, std::optional<std::size_t> n_bins) {
  auto in = open_input(path);
  try {
    return read_window_scan(in, n_bins);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_window_scan(const std::filesystem::path& path, const WindowScan& scan) {
  std::ostringstream out;
  const bool sigma = scan.has_uncertainties();
  out << (sigma ? "k,l,variance,sigma\n" : "k,l,variance\n");
  for (const auto& rec : scan.records()) {
    // Full precision: the scan is measurement data, not a report.
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", rec.variance);
    out << rec.window.k << ',' << rec.window.l << ',' << buf;
    if (sigma) {
      out << ',';
      if (rec.sigma) {
        std::snprintf(buf, sizeof(buf), "%.17g", *rec.sigma);
        out << buf;
      }
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

ShotNoiseLevels read_shot_levels(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_line(in, line, number)) throw InputError("shot-noise file: no records");
  const auto header = split_csv(line);
  if (header.size() != 2 || header[0] != "bin" || header[1] != "level") {
    throw InputError(where(number) + "expected header 'bin,level'");
  }
  std::vector<std::pair<std::size_t, double>> rows;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw InputError(where(number) + "expected 2 fields");
    const std::size_t bin = parse_index(cells[0], number, "bin");
    const double level = parse_double(cells[1], number, "level");
    if (bin != rows.size() + 1) {
      throw InputError(where(number) + "bins must be listed in order starting at 1 (got " + std::to_string(bin) + ")");
    }
    if (!(level > 0.0)) throw InputError(where(number) + "shot-noise level of bin " + std::to_string(bin) + " must be positive");
    rows.emplace_back(bin, level);
  }
  if (rows.empty()) throw InputError("shot-noise file: no records");
  Eigen::VectorXd levels(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) levels(static_cast<Eigen::Index>(i)) = rows[i].second;
  return ShotNoiseLevels(std::move(levels));
}

ShotNoiseLevels parse_shot_levels(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_shot_levels(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_shot_levels(const std::filesystem::path& path, const ShotNoiseLevels& shot) {
  std::ostringstream out;
  out << "bin,level\n";
  char buf[40];
  for (Eigen::Index m = 0; m < shot.levels().size(); ++m) {
    std::snprintf(buf, sizeof(buf), "%.17g", shot.levels()(m));
    out << m + 1 << ',' << buf << '\n';
  }
  write_text_file(path, out.str());
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  std::vector<std::vector<double>> rows;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, number, "matrix entry"));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(where(number) + "row has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError("matrix file: no rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return m;
}

Eigen::MatrixXd parse_matrix_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_matrix_csv(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m, int digits) {
  std::ostringstream out;
  char buf[40];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      if (digits == 6) {
        out << format_number(m(r, c));
      } else {
        std::snprintf(buf, sizeof(buf), "%.*g", digits, m(r, c));
        out << buf;
      }
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

CovarianceFixture parse_covariance_fixture(const std::filesystem::path& path) {
  const Eigen::MatrixXd m = parse_matrix_csv(path);
  if (m.rows() != m.cols()) {
    throw InputError(path.string() + ": covariance must be square (got " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ")");
  }
  CovarianceFixture out{QuadratureCovariance::identity(1), 0.0};
  out.c = QuadratureCovariance::symmetrized(m, &out.max_asymmetry);
  return out;
}

SimulationConfig read_simulation_config(std::istream& in) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto entries = ConfigParser(buffer.str()).parse();

  SimulationConfig cfg;
  std::optional<ConfigValue> amplitude;
  std::set<std::string> seen;
  bool have_bins = false;
  for (const auto& [key, value] : entries) {
    if (!seen.insert(key).second) throw InputError("config " + where(value.line) + "duplicate key '" + key + "'");
    if (key == "n_bins") {
      cfg.fiber.n_bins = as_count(value, key, 1);
      have_bins = true;
    } else if (key == "n_steps") {
      cfg.fiber.n_steps = as_count(value, key, 1);
    } else if (key == "beta2") {
      cfg.fiber.dispersion.beta2 = as_number(value, key);
    } else if (key == "beta3") {
      cfg.fiber.dispersion.beta3 = as_number(value, key);
    } else if (key == "beta4") {
      cfg.fiber.dispersion.beta4 = as_number(value, key);
    } else if (key == "amplitude") {
      amplitude = value;
    } else if (key == "kerr_tms") {
      for (const auto& row : as_rows(value, key, 3)) {
        cfg.fiber.kerr_tms.push_back({as_bin(row[0], value.line, key), as_bin(row[1], value.line, key), row[2]});
      }
    } else if (key == "kerr_mix") {
      for (const auto& row : as_rows(value, key, 3)) {
        cfg.fiber.kerr_mix.push_back({as_bin(row[0], value.line, key), as_bin(row[1], value.line, key), row[2]});
      }
    } else if (key == "raman") {
      for (const auto& row : as_rows(value, key, 3)) {
        cfg.fiber.raman.push_back({as_bin(row[0], value.line, key), row[1], row[2]});
      }
    } else if (key == "electronic_snr_db") {
      cfg.noise.electronic_snr_db = as_number(value, key);
    } else if (key == "cmrr_db") {
      cfg.noise.cmrr_db = as_number(value, key);
    } else if (key == "significant_digits") {
      cfg.noise.significant_digits = static_cast<int>(as_count(value, key, 1));
    } else if (key == "seed") {
      cfg.noise.rng_seed = as_count(value, key, 0);
    } else {
      throw InputError("config " + where(value.line) + "unknown key '" + key + "'");
    }
  }
  if (!have_bins) throw InputError("config: missing n_bins");

  const auto n = static_cast<Eigen::Index>(cfg.fiber.n_bins);
  if (!amplitude) throw InputError("config: missing amplitude");
  if (amplitude->is_list) {
    if (static_cast<Eigen::Index>(amplitude->items.size()) != n) {
      throw InputError("config " + where(amplitude->line) + "amplitude needs " + std::to_string(n) + " entries");
    }
    cfg.amplitudes.resize(n);
    for (Eigen::Index m = 0; m < n; ++m) cfg.amplitudes(m) = as_number(amplitude->items[static_cast<std::size_t>(m)], "amplitude");
  } else {
    cfg.amplitudes = Eigen::VectorXd::Constant(n, amplitude->number);
  }
  for (Eigen::Index m = 0; m < n; ++m) {
    if (!(cfg.amplitudes(m) > 0.0) || !std::isfinite(cfg.amplitudes(m))) {
      throw InputError("config " + where(amplitude->line) + "amplitude of bin " + std::to_string(m + 1) + " must be positive");
    }
  }
  cfg.fiber.validate();
  cfg.noise.validate();
  return cfg;
}

SimulationConfig parse_simulation_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_simulation_config(in);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericalError("sha256: digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return sha256_hex(buffer.str());
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.close();
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace scq
