// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "cli_runner.hpp"
#include "scq/acceptance.hpp"

namespace {

namespace fs = std::filesystem;
using testing_support::run_cli;
using testing_support::slurp;

// simulate, analyze (JSON report + plots) and text report, each run twice
// into separate directories and compared byte for byte.
scq::acceptance::CriterionResult check_determinism() {
  scq::acceptance::CriterionResult r{9, "determinism", false, "", 0.0};
  const auto start = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / "scq_acceptance_determinism";
  fs::remove_all(root);
  const std::string config = (fs::path(SCQ_SOURCE_DIR) / "data/configs/illustrative_19bin.toml").string();
  unsetenv("SCQ_SEED");
  for (const char* run : {"a", "b"}) {
    const fs::path d = root / run;
    fs::create_directories(d);
    const auto p = [&](const char* name) { return (d / name).string(); };
    const int codes[] = {
        run_cli({"simulate", "--config", config, "--out", p("scan.csv"), "--truth", p("truth.csv"), "--shot-out",
                 p("shot.csv"), "--seed", "20201015"})
            .code,
        run_cli({"reconstruct", "--scan", p("scan.csv"), "--shot", p("shot.csv"), "--out", p("cov.json")}).code,
        run_cli({"analyze", "--cov", p("cov.json"), "--shot", p("shot.csv"), "--out", p("report.json"), "--plots",
                 p("plots")})
            .code,
        run_cli({"analyze", "--cov", p("truth.csv"), "--out", p("report.txt")}).code,
    };
    for (int c : codes) {
      if (c != 0) {
        r.detail = std::string("pipeline exited with ") + std::to_string(c) + " in run " + run;
        return r;
      }
    }
  }
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    ++compared;
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) ++differing;
  }
  r.passed = compared > 0 && differing == 0;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.detail = std::to_string(compared) + " output files compared across two runs, " + std::to_string(differing) + " differ";
  return r;
}

}  // namespace

int main() {
  const fs::path dir = scq::acceptance::default_fixture_dir();
  std::vector<scq::acceptance::CriterionResult> results;
  results.push_back(scq::acceptance::check_fixture_checksums(dir));
  for (auto& r : scq::acceptance::run_library_checks(dir)) results.push_back(std::move(r));
  results.push_back(check_determinism());

  int failed = 0;
  for (const auto& r : results) {
    std::cout << scq::acceptance::format_result(r) << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
