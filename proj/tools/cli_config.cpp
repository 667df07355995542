#include "cli_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw config_error(key + ": expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw config_error(key + ": expected an unsigned integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw config_error(key + ": expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "on") return true;
  if (value == "0" || value == "false" || value == "off") return false;
  throw config_error(key + ": expected 0/1/true/false, got '" + value + "'");
}

template <size_t N>
std::array<double, N> parse_doubles(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != N)
    throw config_error(key + ": expected " + std::to_string(N) + " comma-separated values");
  std::array<double, N> out{};
  for (size_t i = 0; i < N; ++i) out[i] = parse_double(key, parts[i]);
  return out;
}

std::array<int, 4> parse_regions(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 4) throw config_error(key + ": expected 4 comma-separated region indices");
  std::array<int, 4> out{};
  for (size_t i = 0; i < 4; ++i) out[i] = parse_int(key, parts[i]);
  return out;
}

/// Shortest decimal that parses back to exactly x.
std::string fmt(double x) {
  char buf[64];
  if (x == static_cast<long long>(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
    return buf;
  }
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::stod(buf) == x) break;
  }
  return buf;
}

} // namespace

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names = {"ridge-l",   "lasso",     "enet-l",
                                                 "moeaar-l0", "moeaar-l1", "moeaar-l2"};
  return names;
}

run_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw config_error("cannot open config file: " + path);

  run_config config;
  using setter = std::function<void(run_config&, const std::string&, const std::string&)>;
  const std::map<std::string, setter> keys = {
      {"space.sources", [](run_config& c, const std::string& k, const std::string& v) { c.sources = parse_int(k, v); }},
      {"space.r_cortex", [](run_config& c, const std::string& k, const std::string& v) { c.r_cortex = parse_double(k, v); }},
      {"space.rois", [](run_config& c, const std::string& k, const std::string& v) { c.rois = parse_int(k, v); }},
      {"space.seed", [](run_config& c, const std::string& k, const std::string& v) { c.space_seed = parse_u64(k, v); }},
      {"sensors.count", [](run_config& c, const std::string& k, const std::string& v) { c.sensor_count = parse_int(k, v); }},
      {"head.radii", [](run_config& c, const std::string& k, const std::string& v) { c.radii = parse_doubles<3>(k, v); }},
      {"head.conductivities", [](run_config& c, const std::string& k, const std::string& v) { c.conductivities = parse_doubles<3>(k, v); }},
      {"head.series_terms", [](run_config& c, const std::string& k, const std::string& v) { c.series_terms = parse_int(k, v); }},
      {"head.series_tol", [](run_config& c, const std::string& k, const std::string& v) { c.series_tol = parse_double(k, v); }},
      {"suite.seed", [](run_config& c, const std::string& k, const std::string& v) { c.suite_seed = parse_u64(k, v); }},
      {"suite.regions", [](run_config& c, const std::string& k, const std::string& v) { c.regions = parse_regions(k, v); }},
      {"classic.grid_points", [](run_config& c, const std::string& k, const std::string& v) { c.grid_points = parse_int(k, v); }},
      {"classic.tol", [](run_config& c, const std::string& k, const std::string& v) { c.classic_tol = parse_double(k, v); }},
      {"classic.max_iter", [](run_config& c, const std::string& k, const std::string& v) { c.classic_max_iter = parse_int(k, v); }},
      {"moeaar.iterations", [](run_config& c, const std::string& k, const std::string& v) { c.iterations = parse_int(k, v); }},
      {"moeaar.crossover_fraction", [](run_config& c, const std::string& k, const std::string& v) { c.crossover_fraction = parse_double(k, v); }},
      {"moeaar.mutation_fraction", [](run_config& c, const std::string& k, const std::string& v) { c.mutation_fraction = parse_double(k, v); }},
      {"moeaar.sigma0_factor", [](run_config& c, const std::string& k, const std::string& v) { c.sigma0_factor = parse_double(k, v); }},
      {"moeaar.clamp_factor", [](run_config& c, const std::string& k, const std::string& v) { c.clamp_factor = parse_double(k, v); }},
      {"moeaar.ls_max_iter", [](run_config& c, const std::string& k, const std::string& v) { c.ls_max_iter = parse_int(k, v); }},
      {"moeaar.ls_tol", [](run_config& c, const std::string& k, const std::string& v) { c.ls_tol = parse_double(k, v); }},
      {"moeaar.telemetry", [](run_config& c, const std::string& k, const std::string& v) { c.telemetry = parse_bool(k, v); }},
      {"bench.methods", [](run_config& c, const std::string& k, const std::string& v) {
         c.methods = split(v, ',');
         if (c.methods.size() == 1 && c.methods[0].empty()) c.methods.clear();
       }},
      {"bench.repeat", [](run_config& c, const std::string& k, const std::string& v) { c.repeat = parse_int(k, v); }},
      {"bench.seed", [](run_config& c, const std::string& k, const std::string& v) { c.bench_seed = parse_u64(k, v); }},
      {"bench.workers", [](run_config& c, const std::string& k, const std::string& v) { c.workers = parse_int(k, v); }},
      {"output.dir", [](run_config& c, const std::string& k, const std::string& v) { c.out_dir = v; }},
  };

  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error(path + ":" + std::to_string(line_no) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end())
      throw config_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(config, key, value);
  }
  return config;
}

std::string dump_config(const run_config& c) {
  std::ostringstream out;
  out << "[space]\n"
      << "sources = " << c.sources << "\n"
      << "r_cortex = " << fmt(c.r_cortex) << "\n"
      << "rois = " << c.rois << "\n"
      << "seed = " << c.space_seed << "\n\n";
  out << "[sensors]\n"
      << "count = " << c.sensor_count << "\n\n";
  out << "[head]\n"
      << "radii = " << fmt(c.radii[0]) << "," << fmt(c.radii[1]) << "," << fmt(c.radii[2]) << "\n"
      << "conductivities = " << fmt(c.conductivities[0]) << "," << fmt(c.conductivities[1]) << ","
      << fmt(c.conductivities[2]) << "\n"
      << "series_terms = " << c.series_terms << "\n"
      << "series_tol = " << fmt(c.series_tol) << "\n\n";
  out << "[suite]\n"
      << "seed = " << c.suite_seed << "\n"
      << "regions = " << c.regions[0] << "," << c.regions[1] << "," << c.regions[2] << ","
      << c.regions[3] << "\n\n";
  out << "[classic]\n"
      << "grid_points = " << c.grid_points << "\n"
      << "tol = " << fmt(c.classic_tol) << "\n"
      << "max_iter = " << c.classic_max_iter << "\n\n";
  out << "[moeaar]\n"
      << "iterations = " << c.iterations << "\n"
      << "crossover_fraction = " << fmt(c.crossover_fraction) << "\n"
      << "mutation_fraction = " << fmt(c.mutation_fraction) << "\n"
      << "sigma0_factor = " << fmt(c.sigma0_factor) << "\n"
      << "clamp_factor = " << fmt(c.clamp_factor) << "\n"
      << "ls_max_iter = " << c.ls_max_iter << "\n"
      << "ls_tol = " << fmt(c.ls_tol) << "\n"
      << "telemetry = " << (c.telemetry ? 1 : 0) << "\n\n";
  out << "[bench]\n"
      << "methods = ";
  for (size_t i = 0; i < c.methods.size(); ++i) out << (i ? "," : "") << c.methods[i];
  out << "\n"
      << "repeat = " << c.repeat << "\n"
      << "seed = " << c.bench_seed << "\n"
      << "workers = " << c.workers << "\n\n";
  out << "[output]\n"
      << "dir = " << c.out_dir << "\n";
  return out.str();
}

void validate_config(const run_config& c) {
  if (c.sources < 8) throw config_error("space.sources must be at least 8");
  if (!(c.r_cortex > 0.0) || c.r_cortex >= c.radii[0])
    throw config_error("space.r_cortex must lie strictly inside the cortex shell");
  if (c.rois < 4) throw config_error("space.rois must be at least 4 (the suite uses 4 regions)");
  if (c.rois > c.sources) throw config_error("space.rois cannot exceed space.sources");
  if (c.sensor_count < 2) throw config_error("sensors.count must be at least 2");
  if (!(c.radii[0] < c.radii[1] && c.radii[1] < c.radii[2]))
    throw config_error("head.radii must be strictly increasing");
  for (double s : c.conductivities)
    if (!(s > 0.0)) throw config_error("head.conductivities must be positive");
  if (c.series_terms < 1) throw config_error("head.series_terms must be positive");
  for (size_t i = 0; i < 4; ++i) {
    if (c.regions[i] < 0 || c.regions[i] >= c.rois)
      throw config_error("suite.regions entries must lie in [0, rois)");
    for (size_t j = i + 1; j < 4; ++j)
      if (c.regions[i] == c.regions[j]) throw config_error("suite.regions must be distinct");
  }
  if (c.grid_points < 1) throw config_error("classic.grid_points must be at least 1");
  if (!(c.classic_tol > 0.0)) throw config_error("classic.tol must be positive");
  if (c.classic_max_iter < 1) throw config_error("classic.max_iter must be at least 1");
  if (c.iterations < 1) throw config_error("moeaar.iterations must be at least 1");
  if (c.crossover_fraction < 0.0 || c.crossover_fraction > 1.0)
    throw config_error("moeaar.crossover_fraction must lie in [0, 1]");
  if (c.mutation_fraction < 0.0 || c.mutation_fraction > 1.0)
    throw config_error("moeaar.mutation_fraction must lie in [0, 1]");
  if (c.ls_max_iter < 1) throw config_error("moeaar.ls_max_iter must be at least 1");
  if (!(c.ls_tol > 0.0)) throw config_error("moeaar.ls_tol must be positive");
  if (c.methods.empty()) throw config_error("bench.methods must list at least one method");
  for (const std::string& m : c.methods) {
    const auto& known = known_methods();
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw config_error("unknown method '" + m + "'");
  }
  if (c.repeat < 1) throw config_error("bench.repeat must be at least 1");
  if (c.workers < 0) throw config_error("bench.workers must be non-negative");
  if (c.out_dir.empty()) throw config_error("output.dir must not be empty");
}

} // namespace cli
