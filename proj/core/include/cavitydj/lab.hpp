#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavitydj/dj.hpp"
#include "cavitydj/dynamics.hpp"
#include "cavitydj/oracles.hpp"

namespace cavitydj {

// One grid point of a sweep: axis values, an optional string tag (the dipole
// variant column), and the metric values in metric_names order.
struct SweepRow {
  std::vector<double> axes;
  std::string tag;
  std::vector<double> metrics;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::string tag_name;  // empty when the table has no tag column
  std::vector<std::string> metric_names;
  std::vector<SweepRow> rows;

  // header row, then one data row per grid point, floats at 17 significant
  // digits so identical inputs reproduce identical bytes
  std::string to_csv() const;
  nlohmann::ordered_json to_json() const;
};

// the balanced reference functions driving the fidelity surfaces: mask 0x9A
// at n = 3 and 0x665A at n = 4
BooleanFunction reference_balanced_function(int n);

std::vector<double> linspace(double lo, double hi, int count);

// Three-qubit DJ fidelity surface over cavity decay and gate-timing
// deviation at couplings 1:10:10, no dipole term. Axes are dimensionless:
// kappa_grid holds kappa/omega1, delta_t_grid the timing deviation.
SweepTable sweep_fig3a(const std::vector<double>& kappa_grid,
                       const std::vector<double>& delta_t_grid,
                       const BooleanFunction& f = reference_balanced_function(3),
                       int jobs = 1);

// Four-qubit DJ fidelity over the coupling ratio eta = omega1/omega and
// kappa/omega1, running the 8-gate reference oracle with
// omega2 = omega3 = omega4 = omega.
SweepTable sweep_fig3b(const std::vector<double>& eta_grid,
                       const std::vector<double>& kappa_grid, int jobs = 1);

// Three-qubit DJ fidelity over the dipole strength delta/omega1 for each
// decay rate in kappa_set and each requested dipole variant.
SweepTable sweep_fig4(const std::vector<double>& delta_grid,
                      const std::vector<double>& kappa_set = {0.1, 0.05, 0.02},
                      const std::vector<DipoleVariant>& variants =
                          {DipoleVariant::projector, DipoleVariant::exchange},
                      int jobs = 1);

// Experimental-feasibility arithmetic: gate and algorithm runtimes, the
// decay-rate bound on the qubit count, the lifetime bound, and the atom
// track positions realizing the coupling ratio.
struct FeasibilityReport {
  double omega0;             // rad/s, coupling at an antinode
  double omega1;             // rad/s, first atom's coupling
  double kappa;              // rad/s
  double lifetime;           // s, upper atomic level
  double t_gate;             // s, one CPF segment
  double cavity_decay_time;  // s, 2 pi / kappa; infinity when kappa = 0
  std::pair<int, int> n_range;
  std::vector<std::pair<int, double>> runtime_n;  // (N, 2^(N-1) t_gate)
  int max_n;                 // largest N with kappa <= omega1 / 2^(N-2)
  bool max_n_capped;         // true when kappa = 0 left the bound open
  int max_n_lifetime;        // largest N with runtime <= lifetime
  bool max_n_lifetime_capped;
  int reference_max_n;       // the quoted scalability estimate for this setup
  bool matches_reference;    // max_n == reference_max_n
  int positions_n;           // qubit count the track list below refers to
  std::vector<double> atom_positions;  // z_j in units of lambda0
  std::vector<double> atom_couplings;  // signed Omega_j / Omega_0 on the tracks
};

FeasibilityReport feasibility(double omega0, double omega1, double kappa,
                              double lifetime, std::pair<int, int> n_range);

nlohmann::ordered_json to_json(const FeasibilityReport& report);

// standing-wave coupling Omega_0 cos(2 pi z / lambda0) exp(-r^2 / w^2)
double coupling_from_position(
    double z, double lambda0, double omega0, double r = 0.0,
    double w = std::numeric_limits<double>::infinity());

// offset from an antinode hitting a given coupling ratio:
// (lambda0 / 2 pi) arccos(ratio)
double position_for_ratio(double ratio, double lambda0);

// track positions in units of lambda0: atom 1 offset from its antinode by
// position_for_ratio(ratio), atoms 2..n on successive antinodes
std::vector<double> atom_positions(int n, double ratio);

}  // namespace cavitydj
