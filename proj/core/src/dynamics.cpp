#include "cavitydj/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cavitydj {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_finite(const OperatorMatrix& H) {
  if (!H.mat.allFinite()) {
    throw std::invalid_argument("operator has non-finite entries");
  }
  if (H.mat.rows() != H.mat.cols() || H.mat.rows() != H.space.dim()) {
    throw std::invalid_argument("operator dimension does not match its space");
  }
}

void check_evolve_args(const OperatorMatrix& H, double t,
                       const StateVector& psi) {
  check_finite(H);
  if (!psi.amps.allFinite()) {
    throw std::invalid_argument("state has non-finite entries");
  }
  if (!(psi.space == H.space) || psi.amps.size() != H.space.dim()) {
    throw std::invalid_argument("state and operator spaces differ");
  }
  if (t < 0.0) {
    throw std::invalid_argument("evolution time must be >= 0");
  }
}

bool is_hermitian(const Matrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1.0);
}

// exp(-iMt) for one dense block
Matrix block_propagator(const Matrix& m, double t) {
  if (is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    Eigen::VectorXcd phases =
        (-kI * t * es.eigenvalues().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
  }
  return Matrix(-kI * t * m).exp();
}

// block id per basis index, or throw if H has any cross-block element
std::vector<int> verified_block_ids(const OperatorMatrix& H) {
  const auto blocks = excitation_blocks(H.space);
  std::vector<int> block_of(H.space.dim());
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b) {
    for (Index k : blocks[b]) {
      block_of[k] = b;
    }
  }
  const Index d = H.space.dim();
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      if (block_of[r] != block_of[c] && H.mat(r, c) != Complex(0.0, 0.0)) {
        throw BlockStructureError(
            "operator couples excitation blocks " +
            std::to_string(block_of[r]) + " and " + std::to_string(block_of[c]) +
            " at (" + std::to_string(r) + ", " + std::to_string(c) + ")");
      }
    }
  }
  return block_of;
}

}  // namespace

void ModelParams::validate() const {
  if (couplings.empty()) {
    throw std::invalid_argument("couplings must not be empty");
  }
  for (double w : couplings) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("couplings must be >= 0");
    }
  }
  if (!(couplings[0] > 0.0)) {
    throw std::invalid_argument("couplings[0] must be > 0 for gate timing");
  }
  if (!(kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be >= 0");
  }
  if (!(dipole_delta >= 0.0)) {
    throw std::invalid_argument("dipole_delta must be >= 0");
  }
  if (photon_cutoff < 0) {
    throw std::invalid_argument("photon_cutoff must be >= 0");
  }
  if (!(timing_deviation > -1.0)) {
    throw std::invalid_argument("timing_deviation must be > -1");
  }
}

OperatorMatrix build_interaction(const HilbertSpace& space,
                                 const std::vector<double>& couplings) {
  if (static_cast<int>(couplings.size()) != space.n_atoms()) {
    throw std::invalid_argument("couplings length does not match n_atoms");
  }
  const Index d = space.dim();
  const int cutoff = space.photon_cutoff();
  Matrix H = Matrix::Zero(d, d);
  // a^+ S_j^-: atom j drops e -> g while the photon count rises by one;
  // the Hermitian partner a S_j^+ is filled in symmetrically
  for (Index col = 0; col < d; ++col) {
    const int ph = space.photons_of(col);
    if (ph >= cutoff) {
      continue;
    }
    auto levels = space.levels_of(col);
    for (int j = 0; j < space.n_atoms(); ++j) {
      if (levels[j] != AtomLevel::e) {
        continue;
      }
      levels[j] = AtomLevel::g;
      const Index row = space.index_of(levels, ph + 1);
      levels[j] = AtomLevel::e;
      const double amp = couplings[j] * std::sqrt(ph + 1.0);
      H(row, col) += amp;
      H(col, row) += amp;
    }
  }
  return {space, std::move(H)};
}

OperatorMatrix add_decay(const OperatorMatrix& H, double kappa) {
  check_finite(H);
  if (!(kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be >= 0");
  }
  OperatorMatrix out = H;
  if (kappa == 0.0) {
    return out;
  }
  const HilbertSpace& space = H.space;
  for (Index k = 0; k < space.dim(); ++k) {
    out.mat(k, k) -= kI * (kappa / 2.0) * double(space.photons_of(k));
  }
  return out;
}

OperatorMatrix add_dipole(const OperatorMatrix& H, double delta,
                          DipoleVariant variant) {
  check_finite(H);
  if (!(delta >= 0.0)) {
    throw std::invalid_argument("dipole delta must be >= 0");
  }
  const HilbertSpace& space = H.space;
  if (space.n_atoms() < 2) {
    throw std::invalid_argument("dipole term needs at least 2 atoms");
  }
  OperatorMatrix out = H;
  if (delta == 0.0) {
    return out;
  }
  const int n = space.n_atoms();
  for (Index col = 0; col < space.dim(); ++col) {
    auto levels = space.levels_of(col);
    const int ph = space.photons_of(col);
    for (int j = 0; j < n - 1; ++j) {
      if (variant == DipoleVariant::projector) {
        if (levels[j] == AtomLevel::e && levels[j + 1] == AtomLevel::e) {
          out.mat(col, col) += delta;
        }
      } else {
        // flip-flop S_j^+ S_j+1^-: |g_j e_j+1> -> |e_j g_j+1>; the reverse
        // direction is generated when the loop visits the partner column
        if (levels[j] == AtomLevel::g && levels[j + 1] == AtomLevel::e) {
          levels[j] = AtomLevel::e;
          levels[j + 1] = AtomLevel::g;
          const Index row = space.index_of(levels, ph);
          levels[j] = AtomLevel::g;
          levels[j + 1] = AtomLevel::e;
          out.mat(row, col) += delta;
          out.mat(col, row) += delta;
        }
      }
    }
  }
  return out;
}

OperatorMatrix build_hamiltonian(const HilbertSpace& space,
                                 const ModelParams& params) {
  params.validate();
  OperatorMatrix H = build_interaction(space, params.couplings);
  if (params.dipole_delta > 0.0) {
    H = add_dipole(H, params.dipole_delta, params.dipole_variant);
  }
  if (params.kappa > 0.0) {
    H = add_decay(H, params.kappa);
  }
  return H;
}

StateVector evolve(const OperatorMatrix& H, double t, const StateVector& psi) {
  check_evolve_args(H, t, psi);
  if (t == 0.0) {
    return psi;
  }
  return {psi.space, block_propagator(H.mat, t) * psi.amps};
}

StateVector evolve_blocked(const OperatorMatrix& H, double t,
                           const StateVector& psi) {
  check_evolve_args(H, t, psi);
  if (t == 0.0) {
    return psi;
  }
  verified_block_ids(H);
  const auto blocks = excitation_blocks(H.space);
  Vector out = Vector::Zero(psi.amps.size());
  for (const auto& idx : blocks) {
    const Index bs = static_cast<Index>(idx.size());
    if (bs == 0) {
      continue;
    }
    Matrix sub(bs, bs);
    Vector v(bs);
    for (Index r = 0; r < bs; ++r) {
      v(r) = psi.amps(idx[r]);
      for (Index c = 0; c < bs; ++c) {
        sub(r, c) = H.mat(idx[r], idx[c]);
      }
    }
    v = block_propagator(sub, t) * v;
    for (Index r = 0; r < bs; ++r) {
      out(idx[r]) = v(r);
    }
  }
  return {psi.space, std::move(out)};
}

Matrix propagator_blocked(const OperatorMatrix& H, double t) {
  check_finite(H);
  if (t < 0.0) {
    throw std::invalid_argument("evolution time must be >= 0");
  }
  verified_block_ids(H);
  const auto blocks = excitation_blocks(H.space);
  Matrix U = Matrix::Identity(H.space.dim(), H.space.dim());
  if (t == 0.0) {
    return U;
  }
  for (const auto& idx : blocks) {
    const Index bs = static_cast<Index>(idx.size());
    if (bs == 0) {
      continue;
    }
    Matrix sub(bs, bs);
    for (Index r = 0; r < bs; ++r) {
      for (Index c = 0; c < bs; ++c) {
        sub(r, c) = H.mat(idx[r], idx[c]);
      }
    }
    sub = block_propagator(sub, t);
    for (Index r = 0; r < bs; ++r) {
      for (Index c = 0; c < bs; ++c) {
        U(idx[r], idx[c]) = sub(r, c);
      }
    }
  }
  return U;
}

}  // namespace cavitydj
