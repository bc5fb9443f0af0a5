#include "cavitydj/dj.hpp"

#include <cmath>
#include <stdexcept>

namespace cavitydj {

namespace {

double column_fidelity_raw(const Vector& ideal, const Vector& actual) {
  const Complex overlap = ideal.dot(actual);
  return std::norm(overlap);
}

void check_circuit_pair(const Matrix& ideal, const Matrix& actual) {
  if (ideal.rows() != ideal.cols() || actual.rows() != actual.cols() ||
      ideal.rows() != actual.rows()) {
    throw std::invalid_argument("circuit matrices must be square and equal size");
  }
  if (ideal.rows() < 1) {
    throw std::invalid_argument("circuit matrices must be non-empty");
  }
}

}  // namespace

Matrix ideal_circuit(const BooleanFunction& f) {
  const Matrix had = hadamard_layer(f.n);
  return had * ideal_oracle(f) * had;
}

Matrix physical_circuit(const BooleanFunction& f, const ModelParams& params) {
  if (static_cast<int>(params.couplings.size()) != f.n) {
    throw std::invalid_argument("couplings length does not match function arity");
  }
  const HilbertSpace space = build_space(f.n, params.photon_cutoff);
  const Encoding encoding = Encoding::standard(f.n);
  const GateSequence seq = decompose_oracle(f);

  const Index size = Index{1} << f.n;
  Matrix oracle = Matrix::Identity(size, size);
  if (!seq.labels.empty()) {
    // every label shares the native segment; relabeling is an index XOR, so
    // synthesize once and permute per gate
    const GateResult native =
        synthesize_cpf(space, encoding, params, CpfLabel(f.n, (1u << f.n) - 1u));
    Matrix gate(size, size);
    for (const CpfLabel& label : seq.labels) {
      const Index mask =
          static_cast<Index>(~label.rho & ((std::uint32_t{1} << f.n) - 1u));
      for (Index x = 0; x < size; ++x) {
        for (Index y = 0; y < size; ++y) {
          gate(y, x) = native.effective(y ^ mask, x ^ mask);
        }
      }
      oracle = gate * oracle;
    }
  }
  const Matrix had = hadamard_layer(f.n);
  return had * oracle * had;
}

DJOutcome outcome_from_circuits(const Matrix& ideal, const Matrix& actual,
                                double threshold) {
  check_circuit_pair(ideal, actual);
  DJOutcome out;
  out.output_state = actual.col(0);
  const Vector ideal_out = ideal.col(0);
  out.p_zero = std::norm(out.output_state(0));
  out.success_prob = out.output_state.squaredNorm();
  out.fidelity_raw = column_fidelity_raw(ideal_out, out.output_state);
  out.fidelity_normalized =
      out.success_prob > 0.0 ? out.fidelity_raw / out.success_prob : 0.0;
  out.classification = classify_outcome(out, threshold);
  return out;
}

DJOutcome run_ideal(const BooleanFunction& f) {
  const Matrix circuit = ideal_circuit(f);
  return outcome_from_circuits(circuit, circuit);
}

DJOutcome run_physical(const BooleanFunction& f, const ModelParams& params) {
  return outcome_from_circuits(ideal_circuit(f), physical_circuit(f, params));
}

double fidelity(const Matrix& ideal, const Matrix& actual, FidelityMode mode) {
  check_circuit_pair(ideal, actual);
  if (mode == FidelityMode::fixed_input) {
    if (ideal.col(0).squaredNorm() == 0.0) {
      throw std::invalid_argument("ideal output is the zero vector");
    }
    return column_fidelity_raw(ideal.col(0), actual.col(0));
  }
  double sum = 0.0;
  for (Index x = 0; x < ideal.cols(); ++x) {
    if (ideal.col(x).squaredNorm() == 0.0) {
      throw std::invalid_argument("ideal output is the zero vector");
    }
    sum += column_fidelity_raw(ideal.col(x), actual.col(x));
  }
  return sum / double(ideal.cols());
}

double fidelity_normalized(const Matrix& ideal, const Matrix& actual,
                           FidelityMode mode) {
  check_circuit_pair(ideal, actual);
  const Index cols = mode == FidelityMode::fixed_input ? 1 : ideal.cols();
  double sum = 0.0;
  for (Index x = 0; x < cols; ++x) {
    if (ideal.col(x).squaredNorm() == 0.0) {
      throw std::invalid_argument("ideal output is the zero vector");
    }
    const double success = actual.col(x).squaredNorm();
    sum += success > 0.0
               ? column_fidelity_raw(ideal.col(x), actual.col(x)) / success
               : 0.0;
  }
  return sum / double(cols);
}

Classification classify_outcome(const DJOutcome& outcome, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  if (outcome.success_prob <= 0.0) {
    throw std::domain_error("no surviving population to classify");
  }
  return outcome.p_zero / outcome.success_prob > threshold
             ? Classification::constant
             : Classification::balanced;
}

}  // namespace cavitydj
