// tpmpm command-line driver
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tpmpm/config.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/io.hpp"
#include "tpmpm/parallel.hpp"
#include "tpmpm/scenarios.hpp"
#include "tpmpm/timestepper.hpp"

namespace {

struct Overrides {
  std::string scheme;
  double dt = 0.0;
  double end_time = -1.0;
};

void apply(tpmpm::ScenarioConfig& c, const Overrides& o) {
  if (!o.scheme.empty()) c.scheme = tpmpm::scheme_from_string(o.scheme);
  if (o.dt > 0.0) c.dt = o.dt;
  if (o.end_time >= 0.0) c.end_time = o.end_time;
  c.validate();
}

int execute(const tpmpm::ScenarioConfig& config, const std::string& out) {
  {
    tpmpm::Simulation probe(config);
    for (const auto& w : probe.warnings()) std::cerr << "warning: " << w << '\n';
  }
  std::filesystem::create_directories(out);
  std::ofstream(std::filesystem::path(out) / "config.json")
      << tpmpm::serialize_config(config);
  const auto result = tpmpm::run(config, {out, {}});
  std::cout << config.name << ": " << result.steps << " steps, "
            << result.probes.size() << " probe samples, "
            << result.snapshot_files.size() << " snapshot files in " << out
            << '\n';
  if (result.first_contact_time)
    std::cout << "first contact at t = " << *result.first_contact_time << " s\n";
  return 0;
}

int verify_terzaghi(const std::string& out) {
  using namespace tpmpm;
  const std::vector<double> factors{0.05, 0.2, 0.5, 0.9};
  auto config = build_consolidation();
  const auto oracle = consolidation_oracle(config);
  config.end_time = oracle.time_of(factors.back()) + 2.0 * config.dt;
  config.probes.clear();

  std::vector<std::size_t> targets;
  for (const double tv : factors)
    targets.push_back(static_cast<std::size_t>(
        std::llround(oracle.time_of(tv) / config.dt)));

  std::vector<ProfileError> errors;
  RunOptions options;
  options.observer = [&](const Simulation& sim) {
    for (const auto s : targets)
      if (sim.steps_taken() == s)
        errors.push_back(terzaghi_profile_error(
            sim.particles(), oracle, sim.time(), consolidation::kColumnHeight));
  };
  run(config, options);

  std::filesystem::create_directories(out);
  const auto path = std::filesystem::path(out) / "terzaghi_profiles.csv";
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  f << "time_factor,z,p_mpm,p_terzaghi\n" << std::scientific
    << std::setprecision(17);
  double worst = 0.0;
  std::cout << "T_v      t [s]      rel. L2   mid-depth\n";
  for (const auto& e : errors) {
    for (const auto& l : e.layers)
      f << e.time_factor << ',' << l[0] << ',' << l[1] << ','
        << terzaghi_pressure(l[0], e.time, oracle) << '\n';
    worst = std::max(worst, e.relative_l2);
    std::cout << std::fixed << std::setprecision(4) << e.time_factor << "  "
              << e.time << "  " << e.relative_l2 << "  "
              << e.midpoint_relative << '\n';
  }
  std::cout << "max relative L2 profile error: " << std::setprecision(6)
            << worst << '\n'
            << "profiles written to " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase material point solver with rigid-body contact"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "Worker threads for particle loops; results are bitwise "
                 "reproducible only with 1")
      ->check(CLI::PositiveNumber);

  Overrides ov;
  std::string config_path, run_out, scenario_name, scenario_out, verify_out;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("--config", config_path, "Scenario JSON file")
      ->required();
  run_cmd->add_option("--scheme", ov.scheme, "semi-implicit or explicit")
      ->check(CLI::IsMember({"semi-implicit", "explicit"}));
  run_cmd->add_option("--dt", ov.dt, "Time step override [s]")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--end-time", ov.end_time, "End time override [s]");
  run_cmd->add_option("--out", run_out, "Output directory");

  auto* sc_cmd = app.add_subcommand("scenario", "Run a built-in scenario");
  sc_cmd->add_option("name", scenario_name, "consolidation, impact or footing")
      ->required()
      ->check(CLI::IsMember(tpmpm::scenario_names()));
  sc_cmd->add_option("--scheme", ov.scheme, "semi-implicit or explicit")
      ->check(CLI::IsMember({"semi-implicit", "explicit"}));
  sc_cmd->add_option("--dt", ov.dt, "Time step override [s]")
      ->check(CLI::PositiveNumber);
  sc_cmd->add_option("--end-time", ov.end_time, "End time override [s]");
  sc_cmd->add_option("--out", scenario_out, "Output directory");
  auto* dump = sc_cmd->add_flag("--print-config",
                                "Print the scenario JSON and exit");

  auto* verify_cmd = app.add_subcommand("verify", "Verification runs");
  verify_cmd->require_subcommand(1);
  auto* terzaghi_cmd = verify_cmd->add_subcommand(
      "terzaghi", "Consolidation profiles against the series solution");
  terzaghi_cmd->add_option("--out", verify_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    tpmpm::set_thread_count(threads);
    if (*run_cmd) {
      auto config = tpmpm::load_config(config_path);
      apply(config, ov);
      return execute(config, run_out.empty() ? tpmpm::default_output_dir()
                                             : run_out);
    }
    if (*sc_cmd) {
      auto config = tpmpm::build_scenario(scenario_name);
      apply(config, ov);
      if (*dump) {
        std::cout << tpmpm::serialize_config(config);
        return 0;
      }
      return execute(config, scenario_out.empty() ? tpmpm::default_output_dir()
                                                  : scenario_out);
    }
    if (*terzaghi_cmd)
      return verify_terzaghi(verify_out.empty() ? tpmpm::default_output_dir()
                                                : verify_out);
  } catch (const tpmpm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
