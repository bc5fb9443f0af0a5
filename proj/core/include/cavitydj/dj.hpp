#pragma once

#include "cavitydj/dynamics.hpp"
#include "cavitydj/gates.hpp"
#include "cavitydj/hilbert.hpp"
#include "cavitydj/oracles.hpp"

namespace cavitydj {

// Result of one ancilla-free DJ run from |0...0>. output_state keeps the
// unnormalized no-jump amplitudes; p_zero = |amplitude of |0...0>|^2 folds in
// the survival probability, success_prob = squared norm of the whole output.
// fidelity_raw compares the unnormalized output against the ideal one,
// fidelity_normalized the renormalized output.
struct DJOutcome {
  Vector output_state;
  double p_zero;
  double success_prob;
  double fidelity_raw;
  double fidelity_normalized;
  Classification classification;
};

enum class FidelityMode { fixed_input, basis_averaged };

// H^n U_f H^n with the exact diagonal oracle
Matrix ideal_circuit(const BooleanFunction& f);

// H^n (product of synthesized CPF gates, one per x with f(x) = 1) H^n;
// Hadamards are ideal, the CPF product carries leakage and decay losses
Matrix physical_circuit(const BooleanFunction& f, const ModelParams& params);

// run metrics for a circuit pair applied to |0...0>
DJOutcome outcome_from_circuits(const Matrix& ideal, const Matrix& actual,
                                double threshold = 0.5);

DJOutcome run_ideal(const BooleanFunction& f);
DJOutcome run_physical(const BooleanFunction& f, const ModelParams& params);

// |<ideal out|actual out>|^2 with unnormalized actual columns: the fixed
// mode uses input |0...0> only, the averaged mode the mean over all 2^n
// computational inputs pushed through both circuits
double fidelity(const Matrix& ideal, const Matrix& actual, FidelityMode mode);

// same, with each actual output renormalized before comparing
double fidelity_normalized(const Matrix& ideal, const Matrix& actual,
                           FidelityMode mode);

// constant iff the conditional zero-state weight p_zero / success_prob
// exceeds the threshold
Classification classify_outcome(const DJOutcome& outcome, double threshold);

}  // namespace cavitydj
