#include "cavitydj/hilbert.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace cavitydj {

namespace {

void check_atom_index(const HilbertSpace& space, int atom_index) {
  if (atom_index < 1 || atom_index > space.n_atoms()) {
    throw std::invalid_argument("atom_index " + std::to_string(atom_index) +
                                " out of range [1, " +
                                std::to_string(space.n_atoms()) + "]");
  }
}

}  // namespace

HilbertSpace::HilbertSpace(int n_atoms, int photon_cutoff)
    : n_atoms_(n_atoms), photon_cutoff_(photon_cutoff) {
  if (n_atoms < 1) {
    throw std::invalid_argument("n_atoms must be >= 1");
  }
  if (photon_cutoff < 0) {
    throw std::invalid_argument("photon_cutoff must be >= 0");
  }
  // dimension 3^n_atoms * (photon_cutoff + 1), guarded against index overflow
  const Index limit = std::numeric_limits<Index>::max();
  Index d = photon_cutoff + 1;
  for (int j = 0; j < n_atoms; ++j) {
    if (d > limit / 3) {
      throw std::overflow_error("state space dimension exceeds addressable size");
    }
    d *= 3;
  }
  dim_ = d;
}

HilbertSpace build_space(int n_atoms, int photon_cutoff) {
  return HilbertSpace(n_atoms, photon_cutoff);
}

Index HilbertSpace::index_of(const std::vector<AtomLevel>& levels,
                             int photons) const {
  if (static_cast<int>(levels.size()) != n_atoms_) {
    throw std::invalid_argument("level tuple length does not match n_atoms");
  }
  if (photons < 0 || photons > photon_cutoff_) {
    throw std::invalid_argument("photon count out of range");
  }
  Index k = 0;
  for (AtomLevel l : levels) {
    k = k * 3 + static_cast<Index>(l);
  }
  return k * (photon_cutoff_ + 1) + photons;
}

std::vector<AtomLevel> HilbertSpace::levels_of(Index index) const {
  if (index < 0 || index >= dim_) {
    throw std::invalid_argument("basis index out of range");
  }
  Index k = index / (photon_cutoff_ + 1);
  std::vector<AtomLevel> levels(n_atoms_);
  for (int j = n_atoms_ - 1; j >= 0; --j) {
    levels[j] = static_cast<AtomLevel>(k % 3);
    k /= 3;
  }
  return levels;
}

int HilbertSpace::photons_of(Index index) const {
  if (index < 0 || index >= dim_) {
    throw std::invalid_argument("basis index out of range");
  }
  return static_cast<int>(index % (photon_cutoff_ + 1));
}

int HilbertSpace::excitation_number(Index index) const {
  int n = photons_of(index);
  Index k = index / (photon_cutoff_ + 1);
  for (int j = 0; j < n_atoms_; ++j) {
    if (static_cast<AtomLevel>(k % 3) == AtomLevel::e) {
      ++n;
    }
    k /= 3;
  }
  return n;
}

Encoding Encoding::standard(int n_qubits) {
  if (n_qubits < 1) {
    throw std::invalid_argument("n_qubits must be >= 1");
  }
  Encoding enc;
  enc.levels_.reserve(n_qubits);
  enc.levels_.push_back({AtomLevel::g, AtomLevel::e});
  for (int q = 2; q <= n_qubits; ++q) {
    enc.levels_.push_back({AtomLevel::g, AtomLevel::i});
  }
  return enc;
}

AtomLevel Encoding::level_for(int qubit, int bit) const {
  if (qubit < 1 || qubit > n_qubits()) {
    throw std::invalid_argument("qubit index out of range");
  }
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("bit must be 0 or 1");
  }
  const auto& pair = levels_[qubit - 1];
  return bit == 0 ? pair.first : pair.second;
}

std::vector<AtomLevel> Encoding::levels_for(std::uint32_t x) const {
  const int n = n_qubits();
  if (n < 32 && x >= (std::uint32_t{1} << n)) {
    throw std::invalid_argument("computational state out of range");
  }
  std::vector<AtomLevel> levels(n);
  for (int q = 1; q <= n; ++q) {
    const int bit = (x >> (n - q)) & 1u;
    levels[q - 1] = level_for(q, bit);
  }
  return levels;
}

OperatorMatrix embed_atom_op(const HilbertSpace& space, int atom_index,
                             const Matrix& local_3x3) {
  check_atom_index(space, atom_index);
  if (local_3x3.rows() != 3 || local_3x3.cols() != 3) {
    throw std::invalid_argument("local operator must be 3x3");
  }
  const Index d = space.dim();
  Matrix full = Matrix::Zero(d, d);
  // stride of the target atom's level digit in the mixed-radix index
  const int n = space.n_atoms();
  Index stride = space.photon_cutoff() + 1;
  for (int j = n; j > atom_index; --j) {
    stride *= 3;
  }
  for (Index col = 0; col < d; ++col) {
    const Index digit = (col / stride) % 3;
    const Index base = col - digit * stride;
    for (Index r = 0; r < 3; ++r) {
      const Complex v = local_3x3(r, digit);
      if (v != Complex(0.0, 0.0)) {
        full(base + r * stride, col) = v;
      }
    }
  }
  return {space, std::move(full)};
}

Index computational_index(const HilbertSpace& space, const Encoding& encoding,
                          std::uint32_t x) {
  if (encoding.n_qubits() != space.n_atoms()) {
    throw std::invalid_argument("encoding qubit count does not match n_atoms");
  }
  return space.index_of(encoding.levels_for(x), 0);
}

std::vector<Index> computational_indices(const HilbertSpace& space,
                                         const Encoding& encoding) {
  const std::uint32_t size = std::uint32_t{1} << space.n_atoms();
  std::vector<Index> out(size);
  for (std::uint32_t x = 0; x < size; ++x) {
    out[x] = computational_index(space, encoding, x);
  }
  return out;
}

StateVector computational_embed(const HilbertSpace& space,
                                const Encoding& encoding,
                                const Vector& comp_state) {
  const Index size = Index{1} << space.n_atoms();
  if (comp_state.size() != size) {
    throw std::invalid_argument("computational state must have 2^n entries");
  }
  Vector amps = Vector::Zero(space.dim());
  for (Index x = 0; x < size; ++x) {
    amps(computational_index(space, encoding, static_cast<std::uint32_t>(x))) =
        comp_state(x);
  }
  return {space, std::move(amps)};
}

Projection computational_project(const HilbertSpace& space,
                                 const Encoding& encoding,
                                 const StateVector& state) {
  if (!(state.space == space)) {
    throw std::invalid_argument("state belongs to a different space");
  }
  const Index size = Index{1} << space.n_atoms();
  Vector comp(size);
  for (Index x = 0; x < size; ++x) {
    comp(x) =
        state.amps(computational_index(space, encoding, static_cast<std::uint32_t>(x)));
  }
  double leakage = state.amps.squaredNorm() - comp.squaredNorm();
  if (leakage < 0.0) {
    leakage = 0.0;  // guard against rounding just below zero
  }
  return {std::move(comp), leakage};
}

std::vector<std::vector<Index>> excitation_blocks(const HilbertSpace& space) {
  std::vector<std::vector<Index>> blocks(space.n_atoms() +
                                         space.photon_cutoff() + 1);
  for (Index k = 0; k < space.dim(); ++k) {
    blocks[space.excitation_number(k)].push_back(k);
  }
  return blocks;
}

}  // namespace cavitydj
