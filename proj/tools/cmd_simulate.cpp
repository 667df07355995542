#include <filesystem>
#include <fstream>
#include <iostream>

#include "cli_commands.hpp"
#include "cli_runtime.hpp"

namespace cli {

int cmd_simulate(const run_config& config) {
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);

  std::cout << "building geometry: " << config.sources << " sources, " << config.sensor_count
            << " sensors, " << config.rois << " rois\n";
  workspace ws = build_geometry(config);
  if (eegsl_leadfield_truncation_warning(ws.leadfield.get()) != 0)
    std::cerr << "warning: lead-field series tail above tolerance at " << config.series_terms
              << " terms; consider raising head.series_terms\n";

  build_suite(ws, config);
  const std::string dir = suite_dir(config);
  check_status(eegsl_suite_save(ws.suite.get(), dir.c_str()), "saving the suite");

  const std::string lf_path = (out_dir / "leadfield.csv").string();
  check_status(eegsl_leadfield_save(ws.leadfield.get(), lf_path.c_str()),
               "saving the lead field");

  const std::string config_path = (out_dir / "config.txt").string();
  std::ofstream cfg(config_path);
  if (!cfg.good()) throw run_error("cannot write " + config_path);
  cfg << dump_config(config);
  if (!cfg.good()) throw run_error("write failed for " + config_path);

  std::cout << "saved " << ws.scenarios.size() << " scenarios to " << dir << "\n";
  for (const scenario_info& scen : ws.scenarios) std::cout << "  " << scen.label << "\n";
  std::cout << "saved lead field to " << lf_path << "\n"
            << "saved effective config to " << config_path << "\n";
  return 0;
}

} // namespace cli
