#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qrflab: run quantum reference frame scenarios and write JSON reports"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string report_dir = "reports";
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string sign = "paper";
  bool verbose = false, csv = false;

  CLI::App* run = app.add_subcommand("run", "Execute scenario files");
  run->add_option("files", files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  run->add_option("--report", report_dir, "Directory for report files")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  auto* tol_opt = run->add_option("--tolerance", tolerance, "Override every default check tolerance")
                      ->check(CLI::PositiveNumber);
  run->add_option("--kms-sign", sign, "Modular flow sign convention")
      ->check(CLI::IsMember({"paper", "physics"}))
      ->capture_default_str();
  run->add_flag("--csv", csv, "Also write verdict and residual CSV tables");
  run->add_flag("--verbose", verbose, "Print one line per task to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  qrflab::RunOptions options;
  if (*seed_opt) options.seed = seed;
  if (*tol_opt) options.tolerance = tolerance;
  options.kms_sign = sign == "physics" ? qrf::KmsSign::physics : qrf::KmsSign::paper;
  options.verbose = verbose;

  int exit_code = 0;
  for (const auto& f : files) {
    try {
      const qrflab::RunResult r = qrflab::run_scenario_file(f, options);
      const std::filesystem::path path(f);
      for (const auto& p : qrflab::write_outputs(r, report_dir, path.stem().string(), csv))
        if (verbose) std::fprintf(stderr, "wrote %s\n", p.string().c_str());
      const auto& s = r.report["summary"];
      std::printf("%s: %s (%d passed, %d failed, %d informational)\n", path.filename().string().c_str(),
                  s["status"].get<std::string>().c_str(), s["passed"].get<int>(), s["failed"].get<int>(),
                  s["informational"].get<int>());
      exit_code = std::max(exit_code, r.exit_code);
    } catch (const qrflab::ConfigError& e) {
      std::fprintf(stderr, "qrflab: config error in %s: %s\n", f.c_str(), e.what());
      return 2;
    }
  }
  return exit_code;
}
