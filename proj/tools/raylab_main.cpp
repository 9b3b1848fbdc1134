// Command-line front end: load a scenario configuration (or the built-in
// library), run the selected scenarios, print a per-check report, and write
// artifacts plus report.json to the output directory.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or
// usage error, 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "raylab/runner.hpp"

namespace {

int print_config_errors(const std::string& origin, const std::vector<raylab::ParseError>& errs) {
  for (const auto& e : errs)
    std::cerr << origin << ":" << e.line << ":" << e.col << ": " << e.message << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for warped-product singularity and rigidity certificates"};

  std::string config_path;
  std::vector<std::string> wanted;
  std::string out_dir = "out";
  std::string format = "csv";
  double tol = -1.0;
  bool tol_set = false;
  int threads = 0;
  bool list_only = false;

  app.add_option("--config", config_path, "scenario configuration file (default: built-ins)")
      ->check(CLI::ExistingFile);
  app.add_option("--scenario", wanted, "run only the named scenario (repeatable)");
  app.add_option("--out", out_dir, "output directory for artifacts and report.json");
  app.add_option("--format", format, "tabular artifact format")
      ->check(CLI::IsMember({"csv", "records"}));
  app.add_option("--tol", tol, "override every check tolerance with this value")
      ->check(CLI::PositiveNumber)
      ->each([&tol_set](const std::string&) { tol_set = true; });
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");
  app.add_flag("--list", list_only, "list scenario names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string origin = "builtin";
  std::string text;
  if (config_path.empty()) {
    text = raylab::builtin_config_text();
  } else {
    origin = config_path;
    std::ifstream is(config_path);
    std::ostringstream ss;
    ss << is.rdbuf();
    if (!is.good() && !is.eof()) {
      std::cerr << "cannot read " << config_path << "\n";
      return 3;
    }
    text = ss.str();
  }

  raylab::ScenarioBuild build = raylab::load_scenarios(text);
  if (!build.ok()) return print_config_errors(origin, build.errors);

  if (list_only) {
    for (const auto& s : build.scenarios) std::cout << s.name << " (" << s.kind << ")\n";
    return 0;
  }

  std::vector<raylab::ScenarioSpec> selected;
  if (wanted.empty()) {
    selected = build.scenarios;
  } else {
    for (const auto& name : wanted) {
      bool found = false;
      for (const auto& s : build.scenarios)
        if (s.name == name) {
          selected.push_back(s);
          found = true;
        }
      if (!found) {
        std::cerr << "unknown scenario '" << name << "'; available:\n";
        for (const auto& s : build.scenarios) std::cerr << "  " << s.name << "\n";
        return 2;
      }
    }
  }

  raylab::RunOptions ropts;
  ropts.format = format == "csv" ? raylab::ArtifactFormat::Csv : raylab::ArtifactFormat::Records;
  ropts.threads = threads;
  if (tol_set) ropts.tol_override = tol;

  std::vector<raylab::RunReport> reports;
  try {
    reports = raylab::run_scenarios(selected, out_dir, ropts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }

  int passed = 0;
  for (const auto& rep : reports) {
    const char* status = !rep.error.empty() ? "ERROR" : (rep.ok ? "PASS" : "FAIL");
    std::printf("=== %s: %s (%.3fs)\n", rep.scenario.c_str(), status, rep.wall_seconds);
    if (!rep.error.empty()) std::printf("    error: %s\n", rep.error.c_str());
    for (const auto& c : rep.checks)
      std::printf("    [%s] %s: %s\n", c.pass ? "pass" : "FAIL", c.name.c_str(),
                  c.detail.c_str());
    for (const auto& a : rep.artifacts) std::printf("    wrote %s\n", a.c_str());
    if (rep.ok) ++passed;
  }
  std::printf("%d/%zu scenarios passed\n", passed, reports.size());

  nlohmann::ordered_json jr = nlohmann::ordered_json::array();
  for (const auto& rep : reports) jr.push_back(raylab::report_to_json(rep));
  std::ofstream os(std::filesystem::path(out_dir) / "report.json");
  os << jr.dump(2) << "\n";
  if (!os.good()) {
    std::cerr << "error: could not write report.json\n";
    return 3;
  }

  return raylab::exit_code_for(reports);
}
