#include <benchmark/benchmark.h>

#include <cmath>

#include "cavitydj/lab.hpp"

using namespace cavitydj;

namespace {

ModelParams bench_params(int n) {
  ModelParams p;
  p.couplings.assign(static_cast<std::size_t>(n), 10.0);
  p.couplings[0] = 1.0;
  p.kappa = 0.05;
  p.dipole_delta = 0.1;
  return p;
}

StateVector uniform_state(const HilbertSpace& space) {
  Vector amps = Vector::Constant(space.dim(), Complex(1.0, 0.0));
  amps /= amps.norm();
  return {space, amps};
}

void BM_EvolveDense(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HilbertSpace space = build_space(n, 1);
  const OperatorMatrix H = build_hamiltonian(space, bench_params(n));
  const StateVector psi = uniform_state(space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(H, M_PI, psi));
  }
}
BENCHMARK(BM_EvolveDense)->Arg(3)->Arg(4);

void BM_EvolveBlocked(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HilbertSpace space = build_space(n, 1);
  const OperatorMatrix H = build_hamiltonian(space, bench_params(n));
  const StateVector psi = uniform_state(space);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_blocked(H, M_PI, psi));
  }
}
BENCHMARK(BM_EvolveBlocked)->Arg(3)->Arg(4);

void BM_SynthesizeCpf(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const HilbertSpace space = build_space(n, 1);
  const Encoding encoding = Encoding::standard(n);
  const ModelParams params = bench_params(n);
  const CpfLabel label(n, (std::uint32_t{1} << n) - 1u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_cpf(space, encoding, params, label));
  }
}
BENCHMARK(BM_SynthesizeCpf)->Arg(3)->Arg(4);

void BM_RunPhysical(benchmark::State& state) {
  const BooleanFunction f = reference_balanced_function(3);
  const ModelParams params = bench_params(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_physical(f, params));
  }
}
BENCHMARK(BM_RunPhysical);

}  // namespace

BENCHMARK_MAIN();
