#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "eegsl/errors.hpp"

namespace eegsl {

/// Candidate generator grid on a cortex sphere: positions, ROI partition,
/// k-nearest-neighbor adjacency. Row i of `positions` is grid point i.
struct source_space {
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions;
  std::vector<int> roi_labels;              // one label in {0..roi_count-1} per point
  std::vector<std::vector<int>> adjacency;  // symmetric, irreflexive, sorted neighbor lists
  int roi_count = 0;
  double r_cortex = 0.0;

  int size() const { return static_cast<int>(positions.rows()); }
  std::vector<std::vector<int>> roi_members() const;
};

/// Electrode montage on the upper hemisphere of the unit scalp sphere.
struct sensor_array {
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions;
  bool average_reference = true;

  int size() const { return static_cast<int>(positions.rows()); }
};

/// Three concentric spheres: brain, skull, scalp. Radii normalized so the
/// scalp is the unit sphere.
struct head_model {
  double radii[3] = {0.87, 0.92, 1.0};
  double conductivities[3] = {0.33, 0.0042, 0.33};
  int series_terms = 60;
  double series_tol = 1e-10;
};

enum class lead_field_provenance { computed, loaded };

struct lead_field {
  Eigen::MatrixXd matrix;  // m x n
  lead_field_provenance provenance = lead_field_provenance::computed;
  bool average_referenced = true;
  bool truncation_warning = false;    // series tail still above tol at series_terms
  double worst_tail_ratio = 0.0;      // max over entries of |last term| / sum |terms|

  int sensors() const { return static_cast<int>(matrix.rows()); }
  int sources() const { return static_cast<int>(matrix.cols()); }
};

struct laplacian_operator {
  Eigen::SparseMatrix<double> matrix;  // n x n, L = D - A

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

/// Quasi-uniform layout of n points on the full sphere of given radius
/// (golden-angle spiral). Deterministic.
Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_sphere(int n, double radius);

/// Quasi-uniform layout of m points on the upper unit hemisphere (z >= 0).
Eigen::Matrix<double, Eigen::Dynamic, 3> fibonacci_hemisphere(int m);

/// Builds the source grid: Fibonacci layout at r_cortex, ROI partition by
/// seeded k-means (k-means++ init, Lloyd refinement, empty-cluster repair),
/// adjacency from 6 nearest neighbors symmetrized.
source_space build_source_space(int n, double r_cortex, int k, std::uint64_t seed);

/// Builds the electrode montage: m quasi-uniform points on the upper unit
/// hemisphere, average reference.
sensor_array build_sensor_array(int m);

/// Potential at `electrode` produced by a current dipole with moment `q` at
/// position `pos` inside the innermost sphere, via the truncated Legendre
/// series for three concentric shells. If `tail_ratio` is non-null it
/// receives |last term| / sum|terms| as a convergence indicator.
double dipole_potential(const head_model& model, const Eigen::Vector3d& pos,
                        const Eigen::Vector3d& q, const Eigen::Vector3d& electrode,
                        double* tail_ratio = nullptr);

/// Lead field K: K(i,j) = potential at sensor i from a unit dipole at source j
/// oriented along orientations.row(j), then average-referenced per column when
/// the montage requests it. Orientations must be unit vectors.
lead_field compute_leadfield(const head_model& model, const source_space& space,
                             const sensor_array& sensors,
                             const Eigen::Matrix<double, Eigen::Dynamic, 3>& orientations);

/// Radial (surface-normal) unit orientations for every grid point.
Eigen::Matrix<double, Eigen::Dynamic, 3> radial_orientations(const source_space& space);

/// Convenience: lead field with radial orientations.
lead_field compute_leadfield(const head_model& model, const source_space& space,
                             const sensor_array& sensors);

/// Graph Laplacian L = D - A of the source-space adjacency.
laplacian_operator graph_laplacian(const source_space& space);

/// CSV persistence: header "m,n" then m rows of n values at 17 significant
/// digits, so a save/load round trip is bit identical.
void save_leadfield(const lead_field& K, const std::string& path);
lead_field load_leadfield(const std::string& path);

/// JSON persistence for geometry (positions, labels, adjacency).
std::string source_space_to_json(const source_space& space);
source_space source_space_from_json(const std::string& text);
std::string sensor_array_to_json(const sensor_array& sensors);
sensor_array sensor_array_from_json(const std::string& text);

} // namespace eegsl
