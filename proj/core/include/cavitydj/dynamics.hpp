#pragma once

#include <stdexcept>
#include <vector>

#include "cavitydj/hilbert.hpp"

namespace cavitydj {

enum class DipoleVariant { projector, exchange };

// Physical knobs of one cavity-interaction segment. Couplings are angular
// frequencies in rad/s, one per atom, atom 1 first. kappa is the cavity
// decay rate, dipole_delta the nearest-neighbor Rydberg coupling, and
// timing_deviation the dimensionless stretch applied to the gate duration.
struct ModelParams {
  std::vector<double> couplings;
  double kappa = 0.0;
  double dipole_delta = 0.0;
  DipoleVariant dipole_variant = DipoleVariant::projector;
  int photon_cutoff = 1;
  double timing_deviation = 0.0;

  void validate() const;
};

// thrown by evolve_blocked when the operator couples different
// excitation-number blocks and the per-block fast path would be wrong
class BlockStructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// resonant exchange H = sum_j couplings[j] (a^+ S_j^- + a S_j^+); Hermitian,
// commutes with the excitation number, leaves |i> untouched
OperatorMatrix build_interaction(const HilbertSpace& space,
                                 const std::vector<double>& couplings);

// no-jump decay extension H - i (kappa/2) a^+ a
OperatorMatrix add_decay(const OperatorMatrix& H, double kappa);

// nearest-neighbor dipole term on the open chain j = 1..n-1:
// projector adds delta |e_j e_j+1><e_j e_j+1| to the diagonal, exchange adds
// delta (S_j^+ S_j+1^- + S_j^- S_j+1^+) off-diagonals instead
OperatorMatrix add_dipole(const OperatorMatrix& H, double delta,
                          DipoleVariant variant);

// interaction plus decay plus dipole as configured in params
OperatorMatrix build_hamiltonian(const HilbertSpace& space,
                                 const ModelParams& params);

// exp(-iHt) psi by dense exponentiation; Hermitian operators go through an
// eigendecomposition, non-Hermitian ones through Pade scaling-and-squaring
StateVector evolve(const OperatorMatrix& H, double t, const StateVector& psi);

// same result computed one excitation block at a time; verifies that every
// cross-block element of H is exactly zero before trusting the partition
StateVector evolve_blocked(const OperatorMatrix& H, double t,
                           const StateVector& psi);

// full propagator exp(-iHt) assembled from per-block exponentials, with the
// same structure verification as evolve_blocked
Matrix propagator_blocked(const OperatorMatrix& H, double t);

}  // namespace cavitydj
