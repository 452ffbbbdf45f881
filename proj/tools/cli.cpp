#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scq/acceptance.hpp"
#include "scq/error.hpp"
#include "scq/fiber.hpp"
#include "scq/io.hpp"
#include "scq/plots.hpp"
#include "scq/report.hpp"
#include "scq/window.hpp"

namespace scq::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ReconstructArgs {
  std::string scan;
  std::string shot;
  std::string out;
  bool psd = false;
};

struct AnalyzeArgs {
  std::string cov;
  std::string shot;
  std::string out;
  std::string format;
  std::string plots;
};

struct SimulateArgs {
  std::string config;
  std::string out;
  std::string truth;
  std::string shot_out;
  std::optional<std::uint64_t> seed;
};

struct VerifyArgs {
  std::string fixtures;
  bool all = false;
};

bool has_extension(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

int run_reconstruct(const ReconstructArgs& args, std::ostream& out, std::ostream& err) {
  const ShotNoiseLevels shot = parse_shot_levels(args.shot);
  const WindowScan scan = parse_window_scan(args.scan, shot.n_bins());
  const PhotonCovariance photon = reconstruct_covariance(scan);
  QuadratureCovariance c = normalize_covariance(photon, shot);

  json doc;
  doc["tool_version"] = kToolVersion;
  doc["n_bins"] = c.n_bins();
  doc["input_digest"] = {{"scan", sha256_file(args.scan)}, {"shot", sha256_file(args.shot)}};
  doc["photon_covariance"] = matrix_to_json(photon.entries());
  if (args.psd) {
    PsdProjection projection = project_to_psd(c);
    doc["psd_clipped_mass"] = round6(projection.clipped_mass);
    c = std::move(projection.projected);
  } else {
    doc["psd_clipped_mass"] = nullptr;
  }
  doc["quadrature_covariance"] = matrix_to_json(c.entries());
  const auto warnings = c.warnings();
  doc["warnings"] = warnings;
  for (const auto& w : warnings) err << "warning: " << w << "\n";

  if (has_extension(args.out, ".csv")) {
    write_matrix_csv(args.out, c.entries());
  } else {
    write_text_file(args.out, dump_json(doc));
  }
  out << "reconstructed " << c.n_bins() << "x" << c.n_bins() << " covariance from " << scan.size() << " windows -> "
      << args.out << "\n";
  return kOk;
}

int run_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
  std::optional<PhotonCovariance> photon;
  std::optional<QuadratureCovariance> c;
  if (has_extension(args.cov, ".json")) {
    std::ifstream in(args.cov);
    if (!in) throw InputError("cannot open " + args.cov);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError(args.cov + ": " + e.what());
    }
    if (!doc.contains("quadrature_covariance")) throw InputError(args.cov + ": missing 'quadrature_covariance'");
    c = QuadratureCovariance::symmetrized(matrix_from_json(doc["quadrature_covariance"]));
    if (doc.contains("photon_covariance") && !doc["photon_covariance"].is_null()) {
      photon = PhotonCovariance(matrix_from_json(doc["photon_covariance"]));
    }
  } else {
    auto fixture = parse_covariance_fixture(args.cov);
    if (fixture.max_asymmetry > 0.0) err << "note: symmetrized input (max asymmetry " << format_number(fixture.max_asymmetry) << ")\n";
    c = std::move(fixture.c);
  }

  const bool unit_shot = args.shot.empty();
  const ShotNoiseLevels shot = unit_shot ? ShotNoiseLevels::uniform(c->n_bins()) : parse_shot_levels(args.shot);
  if (shot.n_bins() != c->n_bins()) {
    throw InputError("--shot lists " + std::to_string(shot.n_bins()) + " bins but the covariance has " +
                     std::to_string(c->n_bins()));
  }
  for (const auto& w : c->warnings()) err << "warning: " << w << "\n";

  AnalysisReport report = build_report(*c, shot, photon);
  report.input_digest["cov"] = sha256_file(args.cov);
  if (!unit_shot) report.input_digest["shot"] = sha256_file(args.shot);
  report.provenance.unit_shot_levels = unit_shot;
  for (const auto m : non_positive_modes(report.decomposition)) {
    err << "warning: eigenmode " << m + 1 << " has a non-positive eigenvalue; its level is reported as -inf\n";
  }

  std::string format = args.format;
  if (format.empty()) format = has_extension(args.out, ".json") ? "json" : "text";
  emit_report(report, format == "json" ? ReportFormat::kJson : ReportFormat::kText, args.out);
  if (!args.plots.empty()) emit_plots(report, args.plots);

  out << report.squeezed_modes << " of " << report.n_bins << " eigenmodes below shot noise; minimum "
      << format_number(report.decomposition.squeezing_db(0)) << " dB -> " << args.out << "\n";
  return kOk;
}

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  SimulationConfig cfg = parse_simulation_config(args.config);
  if (args.seed) cfg.noise.rng_seed = *args.seed;
  if (const char* env = std::getenv("SCQ_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw InputError("SCQ_SEED must be a non-negative integer");
    cfg.noise.rng_seed = v;
    err << "note: SCQ_SEED overrides the seed (" << v << ")\n";
  }

  const FiberChannel channel = build_fiber_channel(cfg.fiber);
  const GaussianState output = propagate(coherent_input(cfg.amplitudes), channel, cfg.fiber);
  if (!output.is_physical()) throw NumericalError("simulate: propagated state violates the uncertainty bound");
  const QuadratureCovariance truth = amplitude_quadrature_covariance(output);
  const ShotNoiseLevels shot = shot_levels_of(output);
  const WindowScan scan = simulate_window_scan(truth, shot, cfg.noise);

  write_window_scan(args.out, scan);
  write_matrix_csv(args.truth, truth.entries(), 17);
  if (!args.shot_out.empty()) {
    write_shot_levels(args.shot_out, measured_shot_levels(denormalize_covariance(truth, shot), shot, cfg.noise));
  }
  out << "simulated " << scan.size() << " windows over " << cfg.fiber.n_bins << " bins (seed " << cfg.noise.rng_seed
      << ") -> " << args.out << "\n";
  return kOk;
}

int run_verify(const VerifyArgs& args, std::ostream& out) {
  const fs::path dir = args.fixtures.empty() ? acceptance::default_fixture_dir() : fs::path(args.fixtures);
  std::vector<acceptance::CriterionResult> results{acceptance::check_fixture_checksums(dir)};
  for (auto& r : args.all ? acceptance::run_library_checks(dir) : acceptance::run_fixture_checks(dir)) {
    results.push_back(std::move(r));
  }
  bool ok = true;
  for (const auto& r : results) {
    out << acceptance::format_result(r) << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kNumericalError;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimode photon-number correlation analysis"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Solve window variances into a covariance matrix");
  reconstruct->add_option("--scan", rec.scan, "Window scan CSV (k,l,variance[,sigma])")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--shot", rec.shot, "Shot-noise CSV (bin,level)")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--out", rec.out, "Output .json (both matrices) or .csv (normalized C)")->required();
  reconstruct->add_flag("--psd", rec.psd, "Clip negative eigenvalues of C at zero");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "Diagonalize C and report squeezed eigenmodes");
  analyze->add_option("--cov", ana.cov, "Covariance .csv or reconstruct .json")->required()->check(CLI::ExistingFile);
  analyze->add_option("--shot", ana.shot, "Shot-noise CSV; unit levels when omitted")->check(CLI::ExistingFile);
  analyze->add_option("--out", ana.out, "Report path")->required();
  analyze->add_option("--format", ana.format, "text or json (default: from --out extension)")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--plots", ana.plots, "Directory for SVG plots and their CSV data");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Forward-model a fiber and emit a synthetic window scan");
  simulate->add_option("--config", sim.config, "Simulation config (TOML subset)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Window scan CSV")->required();
  simulate->add_option("--truth", sim.truth, "Ground-truth C as CSV")->required();
  simulate->add_option("--shot-out", sim.shot_out, "Measured shot-noise CSV (includes CMRR leakage)");
  simulate->add_option("--seed", sim.seed, "RNG seed (SCQ_SEED overrides)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify-fixtures", "Check the bundled experimental matrices");
  verify->add_option("--fixtures", ver.fixtures, "Fixture directory")->check(CLI::ExistingDirectory);
  verify->add_flag("--all", ver.all, "Also run the reconstruction and forward-model property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*reconstruct) return run_reconstruct(rec, out, err);
    if (*analyze) return run_analyze(ana, out, err);
    if (*simulate) return run_simulate(sim, out, err);
    if (*verify) return run_verify(ver, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace scq::cli
