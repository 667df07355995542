#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli_commands.hpp"
#include "cli_config.hpp"
#include "cli_runtime.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EEG source localization benchmark harness"};
  app.require_subcommand(0, 1);

  std::string config_path, out_override, method, scenario_label;
  std::uint64_t seed_value = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "configuration file (defaults embedded)");
  app.add_option("--out", out_override, "output directory (overrides output.dir)");
  CLI::Option* seed_flag =
      app.add_option("--seed", seed_value,
                     "seed override: suite seed for simulate, bench seed for bench, "
                     "run seed for solve");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  CLI::App* sim = app.add_subcommand("simulate", "build and save the scenario suite");
  CLI::App* sol = app.add_subcommand("solve", "run one method on one saved scenario");
  sol->add_option("--method", method, "method name (see bench.methods)");
  sol->add_option("--scenario", scenario_label, "scenario label, e.g. roi0_punctual_snr0");
  CLI::App* ben = app.add_subcommand("bench", "run the full methods x scenarios x repeats study");
  CLI::App* rep = app.add_subcommand("report", "summarize results.csv");
  for (CLI::App* sub : {sim, sol, ben, rep}) sub->fallthrough();  // global flags after the verb

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cli::run_config config =
        config_path.empty() ? cli::run_config{} : cli::load_config(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    if (seed_flag->count() > 0) {
      if (sim->parsed()) config.suite_seed = seed_value;
      if (ben->parsed()) config.bench_seed = seed_value;
    }
    cli::validate_config(config);

    if (print_config) {
      std::cout << cli::dump_config(config);
      return 0;
    }
    if (sim->parsed()) return cli::cmd_simulate(config);
    if (sol->parsed()) {
      const std::optional<std::uint64_t> seed =
          seed_flag->count() > 0 ? std::optional<std::uint64_t>(seed_value) : std::nullopt;
      return cli::cmd_solve(config, scenario_label, method, seed);
    }
    if (ben->parsed()) return cli::cmd_bench(config);
    if (rep->parsed()) return cli::cmd_report(config);

    std::cerr << "error: expected a subcommand (simulate | solve | bench | report)\n"
              << app.help();
    return 2;
  } catch (const cli::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cli::run_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
