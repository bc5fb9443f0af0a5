#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "cavitydj/dynamics.hpp"
#include "cavitydj/hilbert.hpp"
#include "ode_reference.hpp"

using namespace cavitydj;

namespace {

Vector random_state(Index dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  Vector psi(dim);
  for (Index k = 0; k < dim; ++k) {
    psi(k) = Complex(gauss(rng), gauss(rng));
  }
  psi.normalize();
  return psi;
}

double max_abs_diff(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("interaction exchanges |e,0> and |g,1> at the coupling rate") {
  const HilbertSpace space = build_space(1, 1);
  const OperatorMatrix H = build_interaction(space, {2.5});
  const Index e0 = space.index_of({AtomLevel::e}, 0);
  const Index g1 = space.index_of({AtomLevel::g}, 1);
  CHECK(H.mat(g1, e0) == Complex(2.5, 0.0));
  CHECK(H.mat(e0, g1) == Complex(2.5, 0.0));
  CHECK((H.mat - H.mat.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("photon ladder carries the sqrt(n+1) factor") {
  const HilbertSpace space = build_space(1, 2);
  const OperatorMatrix H = build_interaction(space, {1.0});
  const Index e1 = space.index_of({AtomLevel::e}, 1);
  const Index g2 = space.index_of({AtomLevel::g}, 2);
  CHECK(H.mat(g2, e1).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("the i level is fully decoupled") {
  const HilbertSpace space = build_space(1, 1);
  const OperatorMatrix H = build_interaction(space, {1.7});
  const Index i0 = space.index_of({AtomLevel::i}, 0);
  const Index i1 = space.index_of({AtomLevel::i}, 1);
  CHECK(H.mat.col(i0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(H.mat.row(i1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decay adds -i kappa/2 per photon on the diagonal") {
  const HilbertSpace space = build_space(1, 2);
  const OperatorMatrix H0 = build_interaction(space, {1.0});
  const OperatorMatrix H = add_decay(H0, 0.1);
  CHECK(H.mat(space.index_of({AtomLevel::g}, 0),
              space.index_of({AtomLevel::g}, 0)) == Complex(0.0, 0.0));
  CHECK(H.mat(space.index_of({AtomLevel::g}, 1),
              space.index_of({AtomLevel::g}, 1)) == Complex(0.0, -0.05));
  CHECK(H.mat(space.index_of({AtomLevel::i}, 2),
              space.index_of({AtomLevel::i}, 2)) == Complex(0.0, -0.1));
  const OperatorMatrix same = add_decay(H0, 0.0);
  CHECK((same.mat - H0.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projector dipole shifts adjacent ee pairs only") {
  const HilbertSpace space = build_space(3, 1);
  OperatorMatrix H{space, Matrix::Zero(space.dim(), space.dim())};
  const OperatorMatrix D = add_dipole(H, 0.3, DipoleVariant::projector);
  const Index eeg = space.index_of({AtomLevel::e, AtomLevel::e, AtomLevel::g}, 0);
  const Index gee = space.index_of({AtomLevel::g, AtomLevel::e, AtomLevel::e}, 1);
  const Index ege = space.index_of({AtomLevel::e, AtomLevel::g, AtomLevel::e}, 0);
  const Index eee = space.index_of({AtomLevel::e, AtomLevel::e, AtomLevel::e}, 0);
  CHECK(D.mat(eeg, eeg) == Complex(0.3, 0.0));
  CHECK(D.mat(gee, gee) == Complex(0.3, 0.0));
  CHECK(D.mat(ege, ege) == Complex(0.0, 0.0));  // atoms 1 and 3 are not adjacent
  CHECK(D.mat(eee, eee) == Complex(0.6, 0.0));  // two adjacent pairs
  CHECK((D.mat - Matrix(D.mat.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("exchange dipole flip-flops neighboring excitations") {
  const HilbertSpace space = build_space(2, 1);
  OperatorMatrix H{space, Matrix::Zero(space.dim(), space.dim())};
  const OperatorMatrix D = add_dipole(H, 0.25, DipoleVariant::exchange);
  const Index ge = space.index_of({AtomLevel::g, AtomLevel::e}, 0);
  const Index eg = space.index_of({AtomLevel::e, AtomLevel::g}, 0);
  CHECK(D.mat(eg, ge) == Complex(0.25, 0.0));
  CHECK(D.mat(ge, eg) == Complex(0.25, 0.0));
  CHECK(D.mat.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((D.mat - D.mat.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("model params validation rejects bad knobs") {
  ModelParams p;
  p.couplings = {1.0, 10.0};
  CHECK_NOTHROW(p.validate());

  ModelParams bad = p;
  bad.couplings = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.couplings = {0.0, 10.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.couplings = {1.0, -2.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.kappa = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.dipole_delta = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.photon_cutoff = -1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.timing_deviation = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("a full Rabi cycle flips the sign of |e,0>") {
  const HilbertSpace space = build_space(1, 1);
  const OperatorMatrix H = build_interaction(space, {1.0});
  StateVector psi{space, Vector::Zero(space.dim())};
  const Index e0 = space.index_of({AtomLevel::e}, 0);
  psi.amps(e0) = 1.0;
  const StateVector out = evolve(H, M_PI, psi);
  CHECK(std::abs(out.amps(e0) - Complex(-1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(out.amps(space.index_of({AtomLevel::g}, 1))) <= 1e-12);
}

TEST_CASE("no-jump decay follows the damped two-level closed form") {
  const double kappa = 0.4;
  const double A = std::sqrt(1.0 - kappa * kappa / 16.0);
  const HilbertSpace space = build_space(1, 1);
  ModelParams params;
  params.couplings = {1.0};
  params.kappa = kappa;
  const OperatorMatrix H = build_hamiltonian(space, params);
  StateVector psi{space, Vector::Zero(space.dim())};
  const Index e0 = space.index_of({AtomLevel::e}, 0);
  psi.amps(e0) = 1.0;

  for (double t : {0.4, 1.3, M_PI / A}) {
    const StateVector out = evolve(H, t, psi);
    const double expected = std::exp(-kappa * t / 4.0) *
                            (std::cos(A * t) +
                             kappa / (4.0 * A) * std::sin(A * t));
    CHECK(std::abs(out.amps(e0) - Complex(expected, 0.0)) <= 1e-12);
  }
}

TEST_CASE("evolve agrees with an independent ode integration") {
  const HilbertSpace space = build_space(2, 1);
  ModelParams params;
  params.couplings = {1.0, 2.5};
  params.dipole_delta = 0.15;
  params.dipole_variant = DipoleVariant::exchange;

  SUBCASE("hermitian path") { params.kappa = 0.0; }
  SUBCASE("non-hermitian path") { params.kappa = 0.3; }

  const OperatorMatrix H = build_hamiltonian(space, params);
  const StateVector psi{space, random_state(space.dim(), 11)};
  const StateVector out = evolve(H, 0.83, psi);
  const Vector ref = testutil::ode_evolve(H.mat, 0.83, psi.amps);
  CHECK(max_abs_diff(out.amps, ref) <= 1e-8);
}

TEST_CASE("blocked evolution reproduces the dense result") {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const HilbertSpace space = build_space(3, 1);
    ModelParams params;
    params.couplings = {1.0, 10.0, 7.0};
    params.kappa = 0.05 * seed;
    params.dipole_delta = 0.04 * seed;
    params.dipole_variant =
        seed % 2 ? DipoleVariant::exchange : DipoleVariant::projector;
    const OperatorMatrix H = build_hamiltonian(space, params);
    const StateVector psi{space, random_state(space.dim(), 100 + seed)};
    const double t = 0.3 + 0.4 * seed;
    CHECK(max_abs_diff(evolve(H, t, psi).amps,
                       evolve_blocked(H, t, psi).amps) <= 1e-10);
  }
}

TEST_CASE("blocked propagator matches per-state evolution and is unitary") {
  const HilbertSpace space = build_space(2, 1);
  ModelParams params;
  params.couplings = {1.0, 4.0};
  const OperatorMatrix H = build_hamiltonian(space, params);
  const Matrix U = propagator_blocked(H, 1.1);
  const StateVector psi{space, random_state(space.dim(), 3)};
  CHECK(max_abs_diff(U * psi.amps, evolve_blocked(H, 1.1, psi).amps) <= 1e-12);
  const Matrix gram = U.adjoint() * U;
  CHECK((gram - Matrix::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <=
        1e-12);
}

TEST_CASE("cross-block coupling is detected, not silently mangled") {
  const HilbertSpace space = build_space(1, 1);
  Matrix mat = Matrix::Zero(space.dim(), space.dim());
  const Index g0 = space.index_of({AtomLevel::g}, 0);  // 0 excitations
  const Index g1 = space.index_of({AtomLevel::g}, 1);  // 1 excitation
  mat(g0, g1) = 1.0;
  mat(g1, g0) = 1.0;
  const OperatorMatrix H{space, mat};
  const StateVector psi{space, random_state(space.dim(), 5)};
  CHECK_THROWS_AS(evolve_blocked(H, 0.5, psi), BlockStructureError);
  CHECK_THROWS_AS(propagator_blocked(H, 0.5), BlockStructureError);
  CHECK_NOTHROW(evolve(H, 0.5, psi));
}

TEST_CASE("evolve rejects malformed arguments") {
  const HilbertSpace space = build_space(1, 1);
  const OperatorMatrix H = build_interaction(space, {1.0});
  const StateVector psi{space, random_state(space.dim(), 1)};
  CHECK_THROWS_AS(evolve(H, -0.1, psi), std::invalid_argument);

  const HilbertSpace other = build_space(2, 1);
  const StateVector wrong{other, random_state(other.dim(), 2)};
  CHECK_THROWS_AS(evolve(H, 0.1, wrong), std::invalid_argument);

  OperatorMatrix broken = H;
  broken.mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(evolve(broken, 0.1, psi), std::invalid_argument);
}

TEST_CASE("zero time is the identity") {
  const HilbertSpace space = build_space(2, 1);
  const OperatorMatrix H = build_interaction(space, {1.0, 3.0});
  const StateVector psi{space, random_state(space.dim(), 9)};
  CHECK(max_abs_diff(evolve(H, 0.0, psi).amps, psi.amps) == 0.0);
  CHECK(max_abs_diff(evolve_blocked(H, 0.0, psi).amps, psi.amps) == 0.0);
}

}  // TEST_SUITE
