#include "eegsl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "eegsl/rng.hpp"

namespace eegsl {

current_density synthesize_current(const source_spec& spec, const source_space& space) {
  const int n = space.size();
  require(spec.center >= 0 && spec.center < n, errc::invalid_argument,
          "synthesize_current: center index out of range");
  require(spec.roi >= 0 && spec.roi < space.roi_count, errc::invalid_argument,
          "synthesize_current: roi index out of range");
  require(space.roi_labels[spec.center] == spec.roi, errc::invalid_argument,
          "synthesize_current: center does not belong to the spec's ROI");
  require(std::abs(spec.amplitude) <= 5.0, errc::invalid_argument,
          "synthesize_current: |amplitude| must not exceed 5 nA/cm^2");
  current_density J = current_density::Zero(n);
  if (spec.kind == source_kind::punctual) {
    J[spec.center] = spec.amplitude;
    return J;
  }
  require(spec.spread > 0.0, errc::invalid_argument,
          "synthesize_current: gaussian spread must be positive");
  const Eigen::Vector3d c = space.positions.row(spec.center);
  const double cutoff = 0.01 * std::abs(spec.amplitude);
  for (int i = 0; i < n; ++i) {
    const double d2 = (space.positions.row(i).transpose() - c).squaredNorm();
    const double v = spec.amplitude * std::exp(-d2 / (2.0 * spec.spread * spec.spread));
    J[i] = std::abs(v) < cutoff ? 0.0 : v;
  }
  return J;
}

recording forward(const lead_field& K, const current_density& J) {
  require(K.matrix.cols() == J.size(), errc::shape_mismatch,
          "forward: lead field has " + std::to_string(K.matrix.cols()) +
              " columns but J has " + std::to_string(J.size()) + " entries");
  recording v;
  v.values = K.matrix * J;
  return v;
}

recording add_noise(const recording& v, double snr, std::uint64_t seed) {
  require(snr >= 0.0, errc::invalid_argument, "add_noise: snr must be >= 0");
  if (snr == 0.0) return v;
  recording out;
  out.snr = snr;
  out.seed = seed;
  Rng rng(seed);
  Eigen::VectorXd e(v.values.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = rng.normal();
  const double vn = v.values.norm();
  const double en = e.norm();
  if (vn > 0.0 && en > 0.0)
    e *= vn / (snr * en);
  else
    e.setZero();
  out.values = v.values + e;
  return out;
}

double default_gaussian_spread(const source_space& space) {
  const int n = space.size();
  require(n >= 2, errc::invalid_argument, "default_gaussian_spread: need at least 2 points");
  std::vector<double> nn(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (space.positions.row(i) - space.positions.row(j)).squaredNorm());
    }
    nn[i] = std::sqrt(best);
  }
  std::sort(nn.begin(), nn.end());
  const double median =
      n % 2 == 1 ? nn[n / 2] : 0.5 * (nn[n / 2 - 1] + nn[n / 2]);
  return 2.0 * median;
}

int roi_medoid(const source_space& space, int roi) {
  require(roi >= 0 && roi < space.roi_count, errc::invalid_argument,
          "roi_medoid: roi index out of range");
  std::vector<int> members;
  for (int i = 0; i < space.size(); ++i)
    if (space.roi_labels[i] == roi) members.push_back(i);
  require(!members.empty(), errc::invalid_argument, "roi_medoid: empty ROI");
  int best = members[0];
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i : members) {
    double cost = 0.0;
    for (int j : members) cost += (space.positions.row(i) - space.positions.row(j)).squaredNorm();
    if (cost < best_cost) {
      best_cost = cost;
      best = i;
    }
  }
  return best;
}

std::vector<scenario> build_test_suite(const source_space& space, const lead_field& K,
                                       const std::array<int, 4>& regions, std::uint64_t seed) {
  require(K.matrix.cols() == space.size(), errc::shape_mismatch,
          "build_test_suite: lead field does not match source space");
  std::set<int> distinct(regions.begin(), regions.end());
  require(distinct.size() == 4, errc::invalid_argument,
          "build_test_suite: the 4 region indices must be distinct");
  for (int r : regions)
    require(r >= 0 && r < space.roi_count, errc::invalid_argument,
            "build_test_suite: region index out of range");

  const double spread = default_gaussian_spread(space);
  std::vector<scenario> suite;
  suite.reserve(16);
  int scenario_index = 0;
  for (std::size_t ri = 0; ri < regions.size(); ++ri) {
    const int roi = regions[ri];
    const int center = roi_medoid(space, roi);
    for (source_kind kind : {source_kind::punctual, source_kind::gaussian}) {
      const int pair_index = static_cast<int>(ri) * 2 + (kind == source_kind::gaussian ? 1 : 0);
      Rng amp_rng(Rng::mix(seed, 1000 + pair_index));
      source_spec spec;
      spec.roi = roi;
      spec.center = center;
      spec.kind = kind;
      spec.amplitude = amp_rng.uniform(1.0, 5.0);
      spec.spread = spread;
      const current_density j = synthesize_current(spec, space);
      const recording clean = forward(K, j);
      for (double snr : {0.0, 3.0}) {
        scenario sc;
        sc.spec = spec;
        sc.j_true = j;
        sc.v = snr == 0.0 ? clean : add_noise(clean, snr, Rng::mix(seed, scenario_index));
        char label[64];
        std::snprintf(label, sizeof label, "roi%d_%s_snr%g", roi,
                      kind == source_kind::punctual ? "punctual" : "gaussian", snr);
        sc.label = label;
        suite.push_back(std::move(sc));
        ++scenario_index;
      }
    }
  }
  return suite;
}

void save_vector_csv(const Eigen::VectorXd& v, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io, "save_vector_csv: cannot open " + path);
  char buf[64];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << buf << "\n";
  }
  require(out.good(), errc::io, "save_vector_csv: write failed for " + path);
}

Eigen::VectorXd load_vector_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io, "load_vector_csv: cannot open " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    try {
      v = std::stod(line);
    } catch (const std::exception&) {
      fail(errc::parse, "load_vector_csv: unparseable value '" + line + "'");
    }
    require(std::isfinite(v), errc::data, "load_vector_csv: non-finite entry '" + line + "'");
    vals.push_back(v);
  }
  Eigen::VectorXd out(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i];
  return out;
}

void save_suite(const std::vector<scenario>& suite, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json manifest;
  manifest["scenarios"] = nlohmann::json::array();
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const scenario& sc = suite[i];
    const std::string stem = "scenario_" + std::to_string(i);
    save_vector_csv(sc.j_true, (fs::path(dir) / (stem + "_j_true.csv")).string());
    save_vector_csv(sc.v.values, (fs::path(dir) / (stem + "_v.csv")).string());
    nlohmann::json e;
    e["label"] = sc.label;
    e["roi"] = sc.spec.roi;
    e["center"] = sc.spec.center;
    e["kind"] = sc.spec.kind == source_kind::punctual ? "punctual" : "gaussian";
    e["amplitude"] = sc.spec.amplitude;
    e["spread"] = sc.spec.spread;
    e["snr"] = sc.v.snr;
    e["seed"] = sc.v.seed;
    e["j_true"] = stem + "_j_true.csv";
    e["v"] = stem + "_v.csv";
    manifest["scenarios"].push_back(e);
  }
  std::ofstream out(fs::path(dir) / "manifest.json");
  require(out.good(), errc::io, "save_suite: cannot write manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

std::vector<scenario> load_suite(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream in(fs::path(dir) / "manifest.json");
  require(in.good(), errc::io, "load_suite: cannot open manifest in " + dir);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("load_suite: bad manifest: ") + e.what());
  }
  std::vector<scenario> suite;
  for (const auto& e : manifest.at("scenarios")) {
    scenario sc;
    sc.label = e.at("label").get<std::string>();
    sc.spec.roi = e.at("roi").get<int>();
    sc.spec.center = e.at("center").get<int>();
    const std::string kind = e.at("kind").get<std::string>();
    require(kind == "punctual" || kind == "gaussian", errc::parse,
            "load_suite: unknown kind '" + kind + "'");
    sc.spec.kind = kind == "punctual" ? source_kind::punctual : source_kind::gaussian;
    sc.spec.amplitude = e.at("amplitude").get<double>();
    sc.spec.spread = e.at("spread").get<double>();
    sc.v.snr = e.at("snr").get<double>();
    sc.v.seed = e.at("seed").get<std::uint64_t>();
    sc.j_true = load_vector_csv((fs::path(dir) / e.at("j_true").get<std::string>()).string());
    sc.v.values = load_vector_csv((fs::path(dir) / e.at("v").get<std::string>()).string());
    suite.push_back(std::move(sc));
  }
  return suite;
}

} // namespace eegsl
