// Independent time-evolution oracle for the tests: integrates
// d/dt psi = -i H psi with an adaptive Runge-Kutta stepper instead of a
// matrix exponential. The complex state is split into real and imaginary
// halves because odeint's error norms want a real scalar type:
// with H = A + iB and psi = u + iv,
//   u' = A v + B u,   v' = -A u + B v.
#pragma once

#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "cavitydj/hilbert.hpp"

namespace testutil {

inline cavitydj::Vector ode_evolve(const cavitydj::Matrix& H, double t,
                                   const cavitydj::Vector& psi0) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;

  const Eigen::Index dim = psi0.size();
  const Eigen::MatrixXd A = H.real();
  const Eigen::MatrixXd B = H.imag();

  State state(static_cast<std::size_t>(2 * dim));
  Eigen::Map<Eigen::VectorXd>(state.data(), dim) = psi0.real();
  Eigen::Map<Eigen::VectorXd>(state.data() + dim, dim) = psi0.imag();

  auto rhs = [&](const State& s, State& ds, double) {
    const Eigen::Map<const Eigen::VectorXd> u(s.data(), dim);
    const Eigen::Map<const Eigen::VectorXd> v(s.data() + dim, dim);
    Eigen::Map<Eigen::VectorXd> du(ds.data(), dim);
    Eigen::Map<Eigen::VectorXd> dv(ds.data() + dim, dim);
    du = A * v + B * u;
    dv = -A * u + B * v;
  };

  if (t > 0.0) {
    odeint::integrate_adaptive(
        odeint::make_controlled(1e-12, 1e-12,
                                odeint::runge_kutta_cash_karp54<State>()),
        rhs, state, 0.0, t, t / 1024.0);
  }

  cavitydj::Vector out(dim);
  out.real() = Eigen::Map<Eigen::VectorXd>(state.data(), dim);
  out.imag() = Eigen::Map<Eigen::VectorXd>(state.data() + dim, dim);
  return out;
}

}  // namespace testutil
