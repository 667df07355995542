#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eegsl/headmodel.hpp"

namespace eegsl {

/// Current-density source vector J, one value per grid point (nA/cm^2).
using current_density = Eigen::VectorXd;

enum class source_kind { punctual, gaussian };

/// Description of one synthetic activation.
struct source_spec {
  int roi = 0;
  int center = 0;  // global grid index; must carry the spec's ROI label
  source_kind kind = source_kind::punctual;
  double amplitude = 5.0;  // |amplitude| <= 5 nA/cm^2
  double spread = 0.0;     // gaussian spatial std-dev, same units as positions
};

/// Scalp potentials, optionally noisy. snr = 0 means noiseless by convention;
/// a positive value is the amplitude ratio ||V|| / ||e||.
struct recording {
  Eigen::VectorXd values;
  double snr = 0.0;
  std::uint64_t seed = 0;
};

struct scenario {
  source_spec spec;
  current_density j_true;
  recording v;
  std::string label;
};

/// Ground-truth current density for a spec: punctual puts the amplitude on a
/// single point; gaussian spreads amplitude*exp(-d^2/(2 spread^2)) around the
/// center, truncating values below 1% of the amplitude to exact zero.
current_density synthesize_current(const source_spec& spec, const source_space& space);

/// Noiseless forward model V = K J.
recording forward(const lead_field& K, const current_density& J);

/// Adds i.i.d. Gaussian noise rescaled so that ||V||/||e|| equals snr exactly;
/// snr = 0 returns the input unchanged.
recording add_noise(const recording& v, double snr, std::uint64_t seed);

/// 2x the median nearest-neighbor spacing of the grid: default gaussian spread.
double default_gaussian_spread(const source_space& space);

/// Index of the ROI member minimizing total squared distance to the other
/// members (ties toward the lowest index).
int roi_medoid(const source_space& space, int roi);

/// The comparative test suite: for each of the 4 regions, one punctual and one
/// gaussian activation, each rendered noiseless (snr=0) and at snr=3.
/// Amplitudes are drawn per activation in [1, 5]; noise seeds derive from
/// (seed, scenario index).
std::vector<scenario> build_test_suite(const source_space& space, const lead_field& K,
                                       const std::array<int, 4>& regions, std::uint64_t seed);

/// Plain column vector persistence, one value per line at 17 significant digits.
void save_vector_csv(const Eigen::VectorXd& v, const std::string& path);
Eigen::VectorXd load_vector_csv(const std::string& path);

/// Suite persistence: manifest.json plus per-scenario j_true/v CSV files
/// inside `dir` (created if missing).
void save_suite(const std::vector<scenario>& suite, const std::string& dir);
std::vector<scenario> load_suite(const std::string& dir);

} // namespace eegsl
