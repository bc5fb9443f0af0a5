#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace cavitydj {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Three internal levels per atom. |i> couples to nothing; only the
// |g> <-> |e> transition exchanges excitation with the cavity mode.
enum class AtomLevel : int { g = 0, i = 1, e = 2 };

// Composite space of n_atoms three-level atoms and one cavity mode truncated
// at photon_cutoff photons. Basis index layout: atoms are most significant
// (atom 1 first), level order (g, i, e), photon count least significant:
//   index = (sum_j level_j * 3^(n_atoms - j)) * (photon_cutoff + 1) + photons
// This keeps the photon-0 computational states contiguous in atom order.
class HilbertSpace {
public:
  HilbertSpace(int n_atoms, int photon_cutoff);

  int n_atoms() const { return n_atoms_; }
  int photon_cutoff() const { return photon_cutoff_; }
  Index dim() const { return dim_; }

  Index index_of(const std::vector<AtomLevel>& levels, int photons) const;
  std::vector<AtomLevel> levels_of(Index index) const;
  int photons_of(Index index) const;

  // photons plus number of atoms in |e>; conserved by the resonant interaction
  int excitation_number(Index index) const;

  bool operator==(const HilbertSpace& other) const {
    return n_atoms_ == other.n_atoms_ && photon_cutoff_ == other.photon_cutoff_;
  }

private:
  int n_atoms_;
  int photon_cutoff_;
  Index dim_;
};

HilbertSpace build_space(int n_atoms, int photon_cutoff);

// Square operator over a full atoms-plus-mode space. The space tag travels
// with the matrix so downstream operations can check operand consistency.
struct OperatorMatrix {
  HilbertSpace space;
  Matrix mat;
};

// Full-space state, possibly unnormalized (no-jump branch keeps norm <= 1).
struct StateVector {
  HilbertSpace space;
  Vector amps;
};

// Computational amplitudes recovered from a full-space state, plus the
// population found outside the computational subspace.
struct Projection {
  Vector amplitudes;
  double leakage;
};

// Map from logical bits to atomic levels. Qubit 1 stores its |1> in the
// cavity-coupled |e>; all later qubits store it in the decoupled |i>, so the
// computational subspace holds at most one excitation.
class Encoding {
public:
  static Encoding standard(int n_qubits);

  int n_qubits() const { return static_cast<int>(levels_.size()); }
  AtomLevel level_for(int qubit, int bit) const;

  // atomic levels for computational basis state x; qubit 1 is the most
  // significant bit of x
  std::vector<AtomLevel> levels_for(std::uint32_t x) const;

private:
  std::vector<std::pair<AtomLevel, AtomLevel>> levels_;
};

// full-space operator acting as local_3x3 on one atom, identity elsewhere
OperatorMatrix embed_atom_op(const HilbertSpace& space, int atom_index,
                             const Matrix& local_3x3);

// full-space basis index of computational state x at photon count 0
Index computational_index(const HilbertSpace& space, const Encoding& encoding,
                          std::uint32_t x);
std::vector<Index> computational_indices(const HilbertSpace& space,
                                         const Encoding& encoding);

StateVector computational_embed(const HilbertSpace& space,
                                const Encoding& encoding,
                                const Vector& comp_state);
Projection computational_project(const HilbertSpace& space,
                                 const Encoding& encoding,
                                 const StateVector& state);

// basis indices grouped by excitation number; element k holds the indices
// with excitation_number == k, covering the space exactly once
std::vector<std::vector<Index>> excitation_blocks(const HilbertSpace& space);

}  // namespace cavitydj
