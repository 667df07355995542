#include "eegsl/headmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "eegsl/rng.hpp"

namespace eegsl {

std::vector<std::vector<int>> source_space::roi_members() const {
  std::vector<std::vector<int>> groups(roi_count);
  for (int i = 0; i < size(); ++i) groups[roi_labels[i]].push_back(i);
  return groups;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_sphere(int n, double radius) {
  require(n >= 1, errc::invalid_argument, "fibonacci_sphere: n must be >= 1");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(n, 3);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * i;
    pts(i, 0) = radius * rho * std::cos(theta);
    pts(i, 1) = radius * rho * std::sin(theta);
    pts(i, 2) = radius * z;
  }
  return pts;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_hemisphere(int m) {
  require(m >= 1, errc::invalid_argument, "fibonacci_hemisphere: m must be >= 1");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(m, 3);
  for (int i = 0; i < m; ++i) {
    const double z = (i + 0.5) / m;  // z in (0, 1): strictly upper hemisphere
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * i;
    pts(i, 0) = rho * std::cos(theta);
    pts(i, 1) = rho * std::sin(theta);
    pts(i, 2) = z;
  }
  return pts;
}

namespace {

// Seeded k-means++ initialization followed by Lloyd refinement. Empty clusters
// are repaired by stealing the point farthest from its current center.
std::vector<int> kmeans_labels(const Eigen::Matrix<double, Eigen::Dynamic, 3>& pts, int k,
                               std::uint64_t seed) {
  const int n = static_cast<int>(pts.rows());
  Rng rng(seed);

  Eigen::Matrix<double, Eigen::Dynamic, 3> centers(k, 3);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  {
    const int first = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    centers.row(0) = pts.row(first);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d = (pts.row(i) - centers.row(c - 1)).squaredNorm();
        d2[i] = std::min(d2[i], d);
        total += d2[i];
      }
      int pick = 0;
      if (total > 0.0) {
        const double target = rng.uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
      }
      centers.row(c) = pts.row(pick);
    }
  }

  std::vector<int> labels(n, 0);
  auto assign = [&]() {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (pts.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (pts.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    return changed;
  };

  // Repair: hand each empty cluster the point farthest from its own (already
  // finalized) center among clusters holding more than one point.
  auto repair_empty = [&](std::vector<int>& counts) {
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int worst = -1;
      double worst_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (counts[labels[i]] <= 1) continue;
        const double d = (pts.row(i) - centers.row(labels[i])).squaredNorm();
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      require(worst >= 0, errc::geometry, "kmeans: unable to repair empty cluster");
      --counts[labels[worst]];
      labels[worst] = c;
      counts[c] = 1;
      centers.row(c) = pts.row(worst);
    }
  };

  assign();
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<int> counts(k, 0);
    Eigen::Matrix<double, Eigen::Dynamic, 3> sums =
        Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(k, 3);
    for (int i = 0; i < n; ++i) {
      sums.row(labels[i]) += pts.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.row(c) = sums.row(c) / counts[c];
    repair_empty(counts);
    if (!assign()) break;
  }

  std::vector<int> counts(k, 0);
  for (int i = 0; i < n; ++i) ++counts[labels[i]];
  repair_empty(counts);
  return labels;
}

std::vector<std::vector<int>> knn_adjacency(const Eigen::Matrix<double, Eigen::Dynamic, 3>& pts,
                                            int k) {
  const int n = static_cast<int>(pts.rows());
  const int kn = std::min(k, n - 1);
  std::vector<std::vector<int>> adj(n);
  if (kn <= 0) return adj;
  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) dist[j] = {(pts.row(i) - pts.row(j)).squaredNorm(), j};
    dist[i].first = std::numeric_limits<double>::infinity();
    std::partial_sort(dist.begin(), dist.begin() + kn, dist.end());
    for (int t = 0; t < kn; ++t) adj[i].push_back(dist[t].second);
  }
  // Symmetrize and sort.
  for (int i = 0; i < n; ++i)
    for (int j : adj[i])
      if (std::find(adj[j].begin(), adj[j].end(), i) == adj[j].end()) adj[j].push_back(i);
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

} // namespace

source_space build_source_space(int n, double r_cortex, int k, std::uint64_t seed) {
  require(k >= 1, errc::invalid_argument, "build_source_space: roi count must be >= 1");
  require(n >= k, errc::invalid_argument,
          "build_source_space: invalid partition, need n >= roi count");
  require(r_cortex > 0.0 && r_cortex < 1.0, errc::geometry,
          "build_source_space: r_cortex must lie in (0, 1)");
  source_space space;
  space.positions = fibonacci_sphere(n, r_cortex);
  space.roi_labels = kmeans_labels(space.positions, k, seed);
  space.adjacency = knn_adjacency(space.positions, 6);
  space.roi_count = k;
  space.r_cortex = r_cortex;
  return space;
}

sensor_array build_sensor_array(int m) {
  require(m >= 2, errc::invalid_argument, "build_sensor_array: invalid montage, need m >= 2");
  sensor_array sensors;
  sensors.positions = fibonacci_hemisphere(m);
  sensors.average_reference = true;
  return sensors;
}

namespace {

// Per-order factors g_n of the three-shell Legendre series. For each order the
// five interface/boundary conditions (potential and radial current continuity
// at the two inner interfaces, zero radial current at the scalp) form a 5x5
// system. Unknowns use radially normalized basis functions (r/r_out)^n and
// (r_in/r)^(n+1), bounded by 1 on their shells, so the system stays
// well-conditioned at high order; the source column is scaled by r1^(n+1) and
// the scaling is undone in the caller's radial factor.
std::vector<double> shell_factors(const head_model& model, int terms) {
  const double r1 = model.radii[0], r2 = model.radii[1], r3 = model.radii[2];
  const double s1 = model.conductivities[0], s2 = model.conductivities[1],
               s3 = model.conductivities[2];
  require(r1 > 0.0 && r1 < r2 && r2 < r3, errc::geometry,
          "head_model: radii must satisfy 0 < r1 < r2 < r3");
  require(s1 > 0.0 && s2 > 0.0 && s3 > 0.0, errc::geometry,
          "head_model: conductivities must be positive");
  const double q12 = r1 / r2, q23 = r2 / r3;
  double p12n = 1.0, p23n = 1.0;  // (r1/r2)^n, (r2/r3)^n
  std::vector<double> g(terms + 1, 0.0);
  for (int n = 1; n <= terms; ++n) {
    p12n *= q12;
    p23n *= q23;
    const double p12n1 = p12n * q12, p23n1 = p23n * q23;
    const double dn = n, dn1 = n + 1.0;
    Eigen::Matrix<double, 5, 5> M = Eigen::Matrix<double, 5, 5>::Zero();
    Eigen::Matrix<double, 5, 1> rhs = Eigen::Matrix<double, 5, 1>::Zero();
    // Unknowns: [a1, a2, b2, a3, b3].
    M(0, 0) = 1.0;      M(0, 1) = -p12n;          M(0, 2) = -1.0;
    rhs(0) = -1.0;
    M(1, 0) = s1 * dn;  M(1, 1) = -s2 * dn * p12n; M(1, 2) = s2 * dn1;
    rhs(1) = s1 * dn1;
    M(2, 1) = 1.0;      M(2, 2) = p12n1;           M(2, 3) = -p23n;  M(2, 4) = -1.0;
    M(3, 1) = s2 * dn;  M(3, 2) = -s2 * dn1 * p12n1;
    M(3, 3) = -s3 * dn * p23n;                     M(3, 4) = s3 * dn1;
    M(4, 3) = dn;       M(4, 4) = -dn1 * p23n1;
    const Eigen::Matrix<double, 5, 1> x = M.partialPivLu().solve(rhs);
    g[n] = x(3) + x(4) * p23n1;  // scalp-surface value of the scaled radial part
  }
  return g;
}

// Series evaluation shared by dipole_potential and compute_leadfield. `g` must
// come from shell_factors with at least model.series_terms entries.
double series_potential(const head_model& model, const std::vector<double>& g,
                        const Eigen::Vector3d& pos, const Eigen::Vector3d& q,
                        const Eigen::Vector3d& electrode, double* tail_ratio) {
  const double r1 = model.radii[0];
  const double b = pos.norm();
  require(b < r1, errc::geometry, "dipole_potential: source must lie strictly inside r1");
  const double rd = electrode.norm();
  require(rd > 0.0, errc::geometry, "dipole_potential: electrode at origin");
  const Eigen::Vector3d rhat = electrode / rd;
  const Eigen::Vector3d shat = b > 1e-15 ? Eigen::Vector3d(pos / b) : Eigen::Vector3d(0, 0, 1);
  const double c = std::clamp(rhat.dot(shat), -1.0, 1.0);
  const double mr = q.dot(shat);
  const double mt = q.dot(rhat) - mr * c;  // multiplies P_n'(cos)

  // Legendre recurrences for P_n(c) and P_n'(c).
  double p_prev = 1.0, p_cur = c;       // P_0, P_1
  double dp_prev = 0.0, dp_cur = 1.0;   // P_0', P_1'
  double pw = 1.0;                      // (b/r1)^(n-1)
  const double ratio = b / r1;
  const double inv_r1sq = 1.0 / (r1 * r1);
  double sum = 0.0, abs_sum = 0.0, last = 0.0;
  for (int n = 1; n <= model.series_terms; ++n) {
    const double term = pw * g[n] * inv_r1sq * (n * mr * p_cur + mt * dp_cur);
    sum += term;
    abs_sum += std::abs(term);
    last = std::abs(term);
    // Advance recurrences to order n+1.
    const double p_next = ((2.0 * n + 1.0) * c * p_cur - n * p_prev) / (n + 1.0);
    const double dp_next = dp_prev + (2.0 * n + 1.0) * p_cur;
    p_prev = p_cur;
    p_cur = p_next;
    dp_prev = dp_cur;
    dp_cur = dp_next;
    pw *= ratio;
  }
  if (tail_ratio) *tail_ratio = abs_sum > 0.0 ? last / abs_sum : 0.0;
  return sum / (4.0 * std::numbers::pi * model.conductivities[0]);
}

} // namespace

double dipole_potential(const head_model& model, const Eigen::Vector3d& pos,
                        const Eigen::Vector3d& q, const Eigen::Vector3d& electrode,
                        double* tail_ratio) {
  require(model.series_terms >= 1, errc::invalid_argument,
          "dipole_potential: series_terms must be >= 1");
  const std::vector<double> g = shell_factors(model, model.series_terms);
  return series_potential(model, g, pos, q, electrode, tail_ratio);
}

Eigen::Matrix<double, Eigen::Dynamic, 3> radial_orientations(const source_space& space) {
  Eigen::Matrix<double, Eigen::Dynamic, 3> out(space.size(), 3);
  for (int j = 0; j < space.size(); ++j) {
    const Eigen::Vector3d p = space.positions.row(j);
    const double r = p.norm();
    require(r > 0.0, errc::geometry, "radial_orientations: source at origin");
    out.row(j) = p / r;
  }
  return out;
}

lead_field compute_leadfield(const head_model& model, const source_space& space,
                             const sensor_array& sensors,
                             const Eigen::Matrix<double, Eigen::Dynamic, 3>& orientations) {
  require(model.series_terms >= 1, errc::invalid_argument,
          "compute_leadfield: series_terms must be >= 1");
  require(orientations.rows() == space.size(), errc::shape_mismatch,
          "compute_leadfield: one orientation per source required");
  const int m = sensors.size(), n = space.size();
  const std::vector<double> g = shell_factors(model, model.series_terms);

  lead_field K;
  K.matrix.resize(m, n);
  K.provenance = lead_field_provenance::computed;
  K.average_referenced = sensors.average_reference;
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d pos = space.positions.row(j);
    const Eigen::Vector3d q = orientations.row(j);
    for (int i = 0; i < m; ++i) {
      double tail = 0.0;
      K.matrix(i, j) = series_potential(model, g, pos, q, sensors.positions.row(i), &tail);
      worst = std::max(worst, tail);
    }
  }
  K.worst_tail_ratio = worst;
  K.truncation_warning = worst > model.series_tol;
  if (sensors.average_reference)
    K.matrix.rowwise() -= K.matrix.colwise().mean();
  return K;
}

lead_field compute_leadfield(const head_model& model, const source_space& space,
                             const sensor_array& sensors) {
  return compute_leadfield(model, space, sensors, radial_orientations(space));
}

laplacian_operator graph_laplacian(const source_space& space) {
  const int n = space.size();
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < n; ++i) {
    trips.emplace_back(i, i, static_cast<double>(space.adjacency[i].size()));
    for (int j : space.adjacency[i]) trips.emplace_back(i, j, -1.0);
  }
  laplacian_operator L;
  L.matrix.resize(n, n);
  L.matrix.setFromTriplets(trips.begin(), trips.end());
  return L;
}

void save_leadfield(const lead_field& K, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io, "save_leadfield: cannot open " + path);
  out << K.sensors() << "," << K.sources() << "\n";
  char buf[64];
  for (int i = 0; i < K.sensors(); ++i) {
    for (int j = 0; j < K.sources(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", K.matrix(i, j));
      out << buf << (j + 1 < K.sources() ? "," : "\n");
    }
  }
  require(out.good(), errc::io, "save_leadfield: write failed for " + path);
}

lead_field load_leadfield(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), errc::io, "load_leadfield: cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::parse,
          "load_leadfield: missing header");
  int m = 0, n = 0;
  {
    char extra = 0;
    if (std::sscanf(line.c_str(), "%d,%d %c", &m, &n, &extra) != 2 || m <= 0 || n <= 0)
      fail(errc::parse, "load_leadfield: bad header '" + line + "'");
  }
  lead_field K;
  K.matrix.resize(m, n);
  K.provenance = lead_field_provenance::loaded;
  for (int i = 0; i < m; ++i) {
    require(static_cast<bool>(std::getline(in, line)), errc::parse,
            "load_leadfield: expected " + std::to_string(m) + " rows, file ended at row " +
                std::to_string(i));
    std::stringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      require(static_cast<bool>(std::getline(row, cell, ',')), errc::parse,
              "load_leadfield: row " + std::to_string(i) + " has fewer than " +
                  std::to_string(n) + " columns");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        fail(errc::parse, "load_leadfield: unparseable value '" + cell + "'");
      }
      require(std::isfinite(v), errc::data, "load_leadfield: non-finite entry '" + cell + "'");
      K.matrix(i, j) = v;
    }
    require(!std::getline(row, cell, ','), errc::parse,
            "load_leadfield: row " + std::to_string(i) + " has more than " + std::to_string(n) +
                " columns");
  }
  if (std::getline(in, line) && !line.empty())
    fail(errc::parse, "load_leadfield: trailing data after " + std::to_string(m) + " rows");
  return K;
}

namespace {

nlohmann::json positions_to_json(const Eigen::Matrix<double, Eigen::Dynamic, 3>& pts) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    arr.push_back({pts(i, 0), pts(i, 1), pts(i, 2)});
  return arr;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> positions_from_json(const nlohmann::json& arr) {
  require(arr.is_array(), errc::parse, "geometry json: positions must be an array");
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(arr.size(), 3);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    require(arr[i].is_array() && arr[i].size() == 3, errc::parse,
            "geometry json: each position must be [x,y,z]");
    for (int d = 0; d < 3; ++d) pts(static_cast<Eigen::Index>(i), d) = arr[i][d].get<double>();
  }
  return pts;
}

} // namespace

std::string source_space_to_json(const source_space& space) {
  nlohmann::json j;
  j["positions"] = positions_to_json(space.positions);
  j["roi_labels"] = space.roi_labels;
  j["adjacency"] = space.adjacency;
  j["roi_count"] = space.roi_count;
  j["r_cortex"] = space.r_cortex;
  return j.dump();
}

source_space source_space_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("source_space_from_json: ") + e.what());
  }
  source_space space;
  space.positions = positions_from_json(j.at("positions"));
  space.roi_labels = j.at("roi_labels").get<std::vector<int>>();
  space.adjacency = j.at("adjacency").get<std::vector<std::vector<int>>>();
  space.roi_count = j.at("roi_count").get<int>();
  space.r_cortex = j.at("r_cortex").get<double>();
  require(static_cast<int>(space.roi_labels.size()) == space.size(), errc::parse,
          "source_space_from_json: label count mismatch");
  require(static_cast<int>(space.adjacency.size()) == space.size(), errc::parse,
          "source_space_from_json: adjacency size mismatch");
  return space;
}

std::string sensor_array_to_json(const sensor_array& sensors) {
  nlohmann::json j;
  j["positions"] = positions_to_json(sensors.positions);
  j["average_reference"] = sensors.average_reference;
  return j.dump();
}

sensor_array sensor_array_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::parse, std::string("sensor_array_from_json: ") + e.what());
  }
  sensor_array sensors;
  sensors.positions = positions_from_json(j.at("positions"));
  sensors.average_reference = j.at("average_reference").get<bool>();
  return sensors;
}

} // namespace eegsl
