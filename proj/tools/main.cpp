// qframe: run verification scenarios and emit reports.
//
//   qframe run --scenario FILE [--json OUT] [--seed N] [--points N]
//              [--fd-step H] [--fd-order {2|4}] [--tol T] [--checks a,b,...]
//   qframe list-checks
//   qframe validate --scenario FILE
//
// Exit status: 0 all checks pass, 1 some check failed, 2 usage or load error.

#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "cli/report.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int list_checks() {
  for (const auto& c : qframe::cli::check_registry()) {
    std::cout << std::left << std::setw(24) << c.name
              << (c.bound == qframe::cli::Bound::kAtMost ? "<= " : ">= ")
              << std::setw(9) << c.tolerance << c.description
              << (c.opt_in ? " (opt-in)" : "") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-free geometry verification over complexified quaternions",
               "qframe"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qframe::cli::kToolVersion));

  std::string scenario_path;
  std::string json_path;
  qframe::cli::Overrides ov;
  std::uint64_t seed = 0;
  int points = 0;
  double fd_step = 0.0;
  int fd_order = 4;
  double tol = 0.0;
  std::vector<std::string> checks;

  auto* run = app.add_subcommand("run", "run the checks of a scenario");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--json", json_path, "write the JSON report here ('-' for stdout)");
  auto* o_seed = run->add_option("--seed", seed, "random sampling seed");
  auto* o_points = run->add_option("--points", points, "number of random points")
                       ->check(CLI::NonNegativeNumber);
  auto* o_step = run->add_option("--fd-step", fd_step, "finite-difference step")
                     ->check(CLI::PositiveNumber);
  auto* o_order = run->add_option("--fd-order", fd_order, "finite-difference order")
                      ->check(CLI::IsMember({2, 4}));
  auto* o_tol = run->add_option("--tol", tol, "tolerance for every check")
                    ->check(CLI::NonNegativeNumber);
  auto* o_checks = run->add_option("--checks", checks, "comma-separated check names")
                       ->delimiter(',');

  auto* validate = app.add_subcommand("validate", "load and validate a scenario only");
  validate->add_option("--scenario", scenario_path, "scenario file")->required();

  app.add_subcommand("list-checks", "list available checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (app.got_subcommand("list-checks")) return list_checks();

  if (*o_seed) ov.seed = seed;
  if (*o_points) ov.points = points;
  if (*o_step) ov.fd_step = fd_step;
  if (*o_order) ov.fd_order = fd_order;
  if (*o_tol) ov.tolerance = tol;
  if (*o_checks) ov.checks = checks;

  qframe::cli::Scenario scenario;
  try {
    scenario = qframe::cli::load_scenario(scenario_path, ov);
    qframe::cli::resolve_checks(scenario);
  } catch (const qframe::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (app.got_subcommand("validate")) {
    std::cout << scenario.name << ": ok (" << scenario.points.size()
              << " sample points)\n";
    return 0;
  }

  const auto report = qframe::cli::run_checks(scenario);
  const auto doc = qframe::cli::report_json(report);
  if (json_path == "-") {
    std::cout << doc.dump(2) << '\n';
  } else {
    qframe::cli::write_text(std::cout, report);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      out << doc.dump(2) << '\n';
      if (!out) {
        std::cerr << "error: cannot write " << json_path << '\n';
        return kExitUsage;
      }
    }
  }
  return report.failed == 0 ? 0 : kExitFail;
}
