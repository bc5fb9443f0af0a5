#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cavitydj/gates.hpp"
#include "cavitydj/hilbert.hpp"

namespace cavitydj {

enum class Classification { constant, balanced };

// Truth table of f: {0,1}^n -> {0,1} packed as a mask, bit x = f(x),
// bit 0 = f(00...0). The DJ promise admits only constant and balanced f.
struct BooleanFunction {
  int n;
  std::uint64_t table;

  BooleanFunction(int n_qubits, std::uint64_t mask);

  int popcount() const;
  bool value(std::uint32_t x) const { return (table >> x) & 1u; }
  bool is_constant() const;
  bool is_balanced() const;

  // complement if f(0...0) = 1, so each global-sign pair has one
  // representative with f(0...0) = 0
  BooleanFunction canonical() const;

  std::string to_hex() const;
  static BooleanFunction from_hex(int n_qubits, const std::string& text);
};

Classification classify(const BooleanFunction& f);

// All canonical functions for n qubits: the constant f = 0 followed by the
// C(2^n - 1, 2^(n-1)) balanced masks with f(0...0) = 0, ascending by mask.
// Materializing n = 5 would need hundreds of millions of entries; use
// for_each_function for that size.
std::vector<BooleanFunction> enumerate_functions(int n);

// streaming variant of the same enumeration, in the same order; handles n = 5
void for_each_function(int n,
                       const std::function<void(const BooleanFunction&)>& fn);

// diagonal unitary with entries (-1)^f(x)
Matrix ideal_oracle(const BooleanFunction& f);

// CPF factorization of an oracle: one label per x with f(x) = 1
struct GateSequence {
  int n;
  std::vector<CpfLabel> labels;
};

// labels {x : f(x) = 1} in descending order; empty for constant f = 0, the
// full label set (a global sign) for constant f = 1
GateSequence decompose_oracle(const BooleanFunction& f);

}  // namespace cavitydj
