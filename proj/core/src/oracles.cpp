#include "cavitydj/oracles.hpp"

#include <bit>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace cavitydj {

namespace {

void check_enumeration_n(int n) {
  if (n < 1 || n > 5) {
    throw std::invalid_argument(
        "exhaustive enumeration supports 1 <= n <= 5, got " +
        std::to_string(n));
  }
}

}  // namespace

BooleanFunction::BooleanFunction(int n_qubits, std::uint64_t mask)
    : n(n_qubits), table(mask) {
  if (n < 1 || n > 6) {
    throw std::invalid_argument("truth table supports 1 <= n <= 6 qubits");
  }
  const int entries = 1 << n;
  if (entries < 64 && (mask >> entries) != 0) {
    throw std::invalid_argument("truth table mask has bits beyond 2^n entries");
  }
}

int BooleanFunction::popcount() const {
  return std::popcount(table);
}

bool BooleanFunction::is_constant() const {
  const int entries = 1 << n;
  return table == 0 ||
         (entries == 64 ? table == ~std::uint64_t{0}
                        : table == (std::uint64_t{1} << entries) - 1);
}

bool BooleanFunction::is_balanced() const {
  return popcount() == (1 << (n - 1));
}

BooleanFunction BooleanFunction::canonical() const {
  if (!value(0)) {
    return *this;
  }
  const int entries = 1 << n;
  const std::uint64_t all =
      entries == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << entries) - 1;
  return BooleanFunction(n, table ^ all);
}

std::string BooleanFunction::to_hex() const {
  const int digits = (1 << n) / 4 > 0 ? (1 << n) / 4 : 1;
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%0*llX", digits,
                static_cast<unsigned long long>(table));
  return buf;
}

BooleanFunction BooleanFunction::from_hex(int n_qubits,
                                          const std::string& text) {
  std::size_t pos = 0;
  std::uint64_t mask = 0;
  try {
    mask = std::stoull(text, &pos, 0);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse function mask '" + text + "'");
  }
  if (pos != text.size()) {
    throw std::invalid_argument("trailing characters in function mask '" +
                                text + "'");
  }
  return BooleanFunction(n_qubits, mask);
}

Classification classify(const BooleanFunction& f) {
  if (f.is_constant()) {
    return Classification::constant;
  }
  if (f.is_balanced()) {
    return Classification::balanced;
  }
  throw std::invalid_argument("function " + f.to_hex() +
                              " is neither constant nor balanced");
}

void for_each_function(int n,
                       const std::function<void(const BooleanFunction&)>& fn) {
  check_enumeration_n(n);
  fn(BooleanFunction(n, 0));
  // Balanced canonical masks have 2^(n-1) set bits among bits 1..2^n-1.
  // Gosper's next-combination step walks the shifted-down words (bit 0
  // removed) in ascending order; shifting back up restores the mask.
  const int entries = 1 << n;
  const std::uint64_t wtop = std::uint64_t{1} << (entries - 1);
  std::uint64_t w = (std::uint64_t{1} << (entries / 2)) - 1;
  while (w < wtop) {
    fn(BooleanFunction(n, w << 1));
    const std::uint64_t c = w & -w;
    const std::uint64_t r = w + c;
    w = (((r ^ w) >> 2) / c) | r;
  }
}

std::vector<BooleanFunction> enumerate_functions(int n) {
  check_enumeration_n(n);
  if (n == 5) {
    throw std::length_error(
        "n = 5 yields over 3x10^8 canonical functions; stream them with "
        "for_each_function instead of materializing");
  }
  std::vector<BooleanFunction> out;
  for_each_function(n, [&out](const BooleanFunction& f) { out.push_back(f); });
  return out;
}

Matrix ideal_oracle(const BooleanFunction& f) {
  const Index size = Index{1} << f.n;
  Matrix U = Matrix::Identity(size, size);
  for (Index x = 0; x < size; ++x) {
    if (f.value(static_cast<std::uint32_t>(x))) {
      U(x, x) = -1.0;
    }
  }
  return U;
}

GateSequence decompose_oracle(const BooleanFunction& f) {
  if (!f.is_constant() && !f.is_balanced()) {
    throw std::invalid_argument("function " + f.to_hex() +
                                " is neither constant nor balanced");
  }
  GateSequence seq;
  seq.n = f.n;
  const std::uint32_t entries = std::uint32_t{1} << f.n;
  for (std::uint32_t x = entries; x-- > 0;) {
    if (f.value(x)) {
      seq.labels.emplace_back(f.n, x);
    }
  }
  return seq;
}

}  // namespace cavitydj
