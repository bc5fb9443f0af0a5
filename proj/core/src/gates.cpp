#include "cavitydj/gates.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace cavitydj {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_label(const CpfLabel& label, int n) {
  if (label.n != n) {
    throw std::invalid_argument("label has " + std::to_string(label.n) +
                                " qubits, expected " + std::to_string(n));
  }
}

}  // namespace

CpfLabel::CpfLabel(int n_qubits, std::uint32_t rho_bits)
    : n(n_qubits), rho(rho_bits) {
  if (n < 1 || n > 31) {
    throw std::invalid_argument("label qubit count out of range [1, 31]");
  }
  if (rho >= (std::uint32_t{1} << n)) {
    throw std::invalid_argument("label rho needs more bits than n allows");
  }
}

CpfLabel CpfLabel::from_string(std::string_view bits) {
  if (bits.empty() || bits.size() > 31) {
    throw std::invalid_argument("label must be 1 to 31 bits");
  }
  std::uint32_t rho = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("label may contain only 0 and 1");
    }
    rho = (rho << 1) | std::uint32_t(c - '0');
  }
  return CpfLabel(static_cast<int>(bits.size()), rho);
}

std::string CpfLabel::to_string() const {
  std::string out(n, '0');
  for (int q = 0; q < n; ++q) {
    if ((rho >> (n - 1 - q)) & 1u) {
      out[q] = '1';
    }
  }
  return out;
}

double gate_time(double omega1, double kappa) {
  if (!(omega1 > 0.0)) {
    throw std::invalid_argument("omega1 must be > 0");
  }
  if (!(kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be >= 0");
  }
  const double a2 = omega1 * omega1 - kappa * kappa / 16.0;
  if (a2 <= 0.0) {
    throw std::domain_error("kappa >= 4 omega1: overdamped, no pi cycle");
  }
  return M_PI / std::sqrt(a2);
}

Vector star_coefficients(const std::vector<double>& couplings, double kappa,
                         double t) {
  if (couplings.empty()) {
    throw std::invalid_argument("couplings must not be empty");
  }
  if (!(kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be >= 0");
  }
  if (!(t > 0.0)) {
    throw std::invalid_argument("t must be > 0");
  }
  const int n = static_cast<int>(couplings.size());
  const double w1 = couplings[0];
  const Index size = Index{1} << n;
  Vector coeffs(size);
  for (Index x = 0; x < size; ++x) {
    if (((x >> (n - 1)) & 1) == 0) {
      // no e1 excitation: nothing couples, the input is stationary
      coeffs(x) = 1.0;
      continue;
    }
    // atoms j >= 2 with logical 0 sit in |g> and join the exchange
    std::vector<double> in_g;
    for (int q = 2; q <= n; ++q) {
      if (((x >> (n - q)) & 1) == 0) {
        in_g.push_back(couplings[q - 1]);
      }
    }
    if (kappa == 0.0) {
      double theta2 = w1 * w1;
      for (double w : in_g) {
        theta2 += w * w;
      }
      coeffs(x) =
          (w1 * w1 * std::cos(std::sqrt(theta2) * t) + theta2 - w1 * w1) /
          theta2;
    } else if (in_g.empty()) {
      // damped two-level return amplitude, valid past critical damping via
      // the complex continuation of A
      const Complex a = std::sqrt(Complex(w1 * w1 - kappa * kappa / 16.0));
      coeffs(x) = std::exp(-kappa * t / 4.0) *
                  (std::cos(a * t) + kappa / (4.0 * a) * std::sin(a * t));
    } else {
      // single-excitation star: basis {e1, photon, e_k for k in S}; only the
      // photon state decays
      const Index m = static_cast<Index>(in_g.size()) + 2;
      Matrix star = Matrix::Zero(m, m);
      star(0, 1) = w1;
      star(1, 0) = w1;
      for (Index k = 0; k < m - 2; ++k) {
        star(1, k + 2) = in_g[k];
        star(k + 2, 1) = in_g[k];
      }
      star(1, 1) = -kI * kappa / 2.0;
      const Matrix propagator = (-kI * t * star).exp();
      coeffs(x) = propagator(0, 0);
    }
  }
  return coeffs;
}

GateResult synthesize_cpf(const HilbertSpace& space, const Encoding& encoding,
                          const ModelParams& params, const CpfLabel& label) {
  params.validate();
  check_label(label, space.n_atoms());
  if (encoding.n_qubits() != space.n_atoms()) {
    throw std::invalid_argument("encoding qubit count does not match n_atoms");
  }
  if (static_cast<int>(params.couplings.size()) != space.n_atoms()) {
    throw std::invalid_argument("couplings length does not match n_atoms");
  }
  if (space.photon_cutoff() < 1) {
    throw std::invalid_argument("photon_cutoff must be >= 1 to host the exchange");
  }

  const OperatorMatrix H = build_hamiltonian(space, params);
  const double duration =
      gate_time(params.couplings[0], params.kappa) *
      (1.0 + params.timing_deviation);
  const Matrix U = propagator_blocked(H, duration);

  const auto comp = computational_indices(space, encoding);
  const Index size = static_cast<Index>(comp.size());

  // native gate (label 1...1) restricted to the computational subspace
  Matrix native(size, size);
  Eigen::VectorXd native_leak(size), native_loss(size);
  for (Index x = 0; x < size; ++x) {
    const double full_norm2 = U.col(comp[x]).squaredNorm();
    for (Index y = 0; y < size; ++y) {
      native(y, x) = U(comp[y], comp[x]);
    }
    const double kept = native.col(x).squaredNorm();
    native_leak(x) = std::max(0.0, full_norm2 - kept);
    native_loss(x) = std::max(0.0, 1.0 - full_norm2);
  }

  // the X layers around the segment relabel inputs by x -> x ^ mask, where
  // mask flips every qubit on which label differs from 1...1
  const std::uint32_t mask =
      ~label.rho & ((std::uint32_t{1} << label.n) - 1u);
  GateResult out;
  out.effective.resize(size, size);
  out.leakage.resize(size);
  out.norm_loss.resize(size);
  for (Index x = 0; x < size; ++x) {
    const Index px = x ^ static_cast<Index>(mask);
    out.leakage(x) = native_leak(px);
    out.norm_loss(x) = native_loss(px);
    for (Index y = 0; y < size; ++y) {
      out.effective(y, x) = native(y ^ static_cast<Index>(mask), px);
    }
  }
  out.duration = duration;
  return out;
}

Matrix ideal_cpf(int n, std::uint32_t rho) {
  if (n < 1 || n > 31) {
    throw std::invalid_argument("qubit count out of range [1, 31]");
  }
  const Index size = Index{1} << n;
  if (rho >= static_cast<std::uint32_t>(size)) {
    throw std::invalid_argument("rho out of range for n qubits");
  }
  Matrix J = Matrix::Identity(size, size);
  J(rho, rho) = -1.0;
  return J;
}

Matrix single_qubit(int n, QubitGate kind, int qubit) {
  if (n < 1 || n > 31) {
    throw std::invalid_argument("qubit count out of range [1, 31]");
  }
  if (qubit < 1 || qubit > n) {
    throw std::invalid_argument("qubit index out of range [1, n]");
  }
  const Index size = Index{1} << n;
  const double s = 1.0 / std::sqrt(2.0);
  Matrix local(2, 2);
  if (kind == QubitGate::hadamard) {
    local << s, s, s, -s;
  } else {
    local << 0.0, 1.0, 1.0, 0.0;
  }
  const int shift = n - qubit;  // qubit 1 owns the most significant bit
  Matrix out = Matrix::Zero(size, size);
  for (Index col = 0; col < size; ++col) {
    const Index bit = (col >> shift) & 1;
    for (Index r = 0; r < 2; ++r) {
      const Complex v = local(r, bit);
      if (v != Complex(0.0, 0.0)) {
        out((col & ~(Index{1} << shift)) | (r << shift), col) = v;
      }
    }
  }
  return out;
}

Matrix hadamard_layer(int n) {
  if (n < 1 || n > 31) {
    throw std::invalid_argument("qubit count out of range [1, 31]");
  }
  const Index size = Index{1} << n;
  const double s = 1.0 / std::sqrt(double(size));
  Matrix out(size, size);
  for (Index r = 0; r < size; ++r) {
    for (Index c = 0; c < size; ++c) {
      const bool odd = std::popcount(static_cast<std::uint64_t>(r & c)) & 1;
      out(r, c) = odd ? -s : s;
    }
  }
  return out;
}

}  // namespace cavitydj
