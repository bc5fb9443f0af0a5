#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cavitydj/dynamics.hpp"
#include "cavitydj/hilbert.hpp"

namespace cavitydj {

// Names the flipped basis state of a controlled phase flip J_rho. rho is the
// n-bit computational label with qubit 1 in the most significant bit, so
// "111" is the native |e1 i2 i3> flip and "100" its X-conjugate on qubits 2,3.
struct CpfLabel {
  int n;
  std::uint32_t rho;

  CpfLabel(int n_qubits, std::uint32_t rho_bits);
  static CpfLabel from_string(std::string_view bits);
  std::string to_string() const;
};

// Physical gate restricted to the computational subspace. Columns are
// generally shorter than unit length: leakage is the per-input population
// that survived the no-jump evolution but ended outside the computational
// subspace, norm_loss the per-input no-jump norm deficit from cavity decay.
struct GateResult {
  Matrix effective;
  Eigen::VectorXd leakage;
  Eigen::VectorXd norm_loss;
  double duration;
};

// duration of one cavity-interaction segment: pi / sqrt(omega1^2 - kappa^2/16),
// the half period of the decay-shifted vacuum Rabi cycle
double gate_time(double omega1, double kappa);

// Expected diagonal of the native gate after time t, one entry per
// computational input. Inputs without the e1 excitation return 1 exactly.
// For input |e1, S> with S the set of atoms left in |g>, the closed form is
//   [omega1^2 cos(Theta_S t) + Theta_S^2 - omega1^2] / Theta_S^2,
// Theta_S = sqrt(omega1^2 + sum_{k in S} omega_k^2); with decay the e1-only
// branch uses the damped two-level solution and the rest a small dense
// exponential of the single-excitation star block.
Vector star_coefficients(const std::vector<double>& couplings, double kappa,
                         double t);

// physical CPF gate: the native J at rho = 1...1 comes from one resonant
// interaction segment of duration gate_time * (1 + timing_deviation); all
// other labels wrap it in ideal single-qubit X layers, which on the
// computational matrix is an exact index relabeling by x -> x XOR ~rho
GateResult synthesize_cpf(const HilbertSpace& space, const Encoding& encoding,
                          const ModelParams& params, const CpfLabel& label);

// J_rho = I - 2 |rho><rho| on the 2^n computational space
Matrix ideal_cpf(int n, std::uint32_t rho);

enum class QubitGate { hadamard, pauli_x };

// 2^n matrix applying the chosen 2x2 gate to one qubit, identity elsewhere
Matrix single_qubit(int n, QubitGate kind, int qubit);

// H tensor n, built entrywise as (+-1)/sqrt(2^n) for numerical symmetry
Matrix hadamard_layer(int n);

}  // namespace cavitydj
