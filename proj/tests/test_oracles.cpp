#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "cavitydj/oracles.hpp"

using namespace cavitydj;

TEST_SUITE("oracles") {

TEST_CASE("masks validate against the qubit count") {
  CHECK_NOTHROW(BooleanFunction(3, 0x9A));
  CHECK_THROWS_AS(BooleanFunction(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(BooleanFunction(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(BooleanFunction(2, 0x10), std::invalid_argument);
}

TEST_CASE("classification follows the popcount") {
  CHECK(classify(BooleanFunction(2, 0x0)) == Classification::constant);
  CHECK(classify(BooleanFunction(2, 0xF)) == Classification::constant);
  CHECK(classify(BooleanFunction(2, 0xC)) == Classification::balanced);
  CHECK(BooleanFunction(3, 0x9A).is_balanced());
  CHECK_FALSE(BooleanFunction(3, 0x9A).is_constant());
  CHECK_THROWS_AS(classify(BooleanFunction(2, 0x1)), std::invalid_argument);
}

TEST_CASE("canonical form fixes f(0...0) = 0") {
  CHECK(BooleanFunction(3, 0x9A).canonical().table == 0x9A);
  CHECK(BooleanFunction(3, 0x65).canonical().table == 0x9A);
  CHECK(BooleanFunction(3, 0xFF).canonical().table == 0x00);
  CHECK(BooleanFunction(2, 0x3).canonical().table == 0xC);
}

TEST_CASE("hex round trip with width from the table size") {
  CHECK(BooleanFunction(3, 0x9A).to_hex() == "0x9A");
  CHECK(BooleanFunction(3, 0x0).to_hex() == "0x00");
  CHECK(BooleanFunction(4, 0x665A).to_hex() == "0x665A");
  CHECK(BooleanFunction::from_hex(3, "0x9A").table == 0x9A);
  CHECK(BooleanFunction::from_hex(3, "0x9a").table == 0x9A);
  CHECK_THROWS_AS(BooleanFunction::from_hex(3, "0x1FF"),
                  std::invalid_argument);
  CHECK_THROWS_AS(BooleanFunction::from_hex(3, "zz"), std::invalid_argument);
  CHECK_THROWS_AS(BooleanFunction::from_hex(3, ""), std::invalid_argument);
}

TEST_CASE("enumeration counts the balanced functions once per sign pair") {
  CHECK(enumerate_functions(1).size() == 2);   // constant + 1 balanced
  CHECK(enumerate_functions(2).size() == 4);   // constant + C(3,2)
  CHECK(enumerate_functions(3).size() == 36);  // constant + C(7,4)
  CHECK(enumerate_functions(4).size() == 6436);

  // the raw balanced count halves into the canonical one
  int raw = 0;
  std::set<std::uint64_t> canonical;
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    const BooleanFunction f(3, mask);
    if (f.is_balanced()) {
      ++raw;
      canonical.insert(f.canonical().table);
    }
  }
  CHECK(raw == 70);
  CHECK(canonical.size() == 35);
}

TEST_CASE("enumeration is the constant followed by ascending balanced masks") {
  const std::vector<BooleanFunction> fs = enumerate_functions(3);
  REQUIRE(fs.size() == 36);
  CHECK(fs[0].table == 0);
  CHECK(fs[0].is_constant());
  std::uint64_t prev = 0;
  for (std::size_t k = 1; k < fs.size(); ++k) {
    CHECK(fs[k].is_balanced());
    CHECK((fs[k].table & 1) == 0);  // canonical representative: f(0...0) = 0
    CHECK(fs[k].table > prev);
    prev = fs[k].table;
  }
  // the reference mask is in the list
  bool found = false;
  for (const auto& f : fs) {
    found = found || f.table == 0x9A;
  }
  CHECK(found);
}

TEST_CASE("streaming enumeration visits the same functions in order") {
  const std::vector<BooleanFunction> fs = enumerate_functions(3);
  std::size_t k = 0;
  for_each_function(3, [&](const BooleanFunction& f) {
    REQUIRE(k < fs.size());
    CHECK(f.table == fs[k].table);
    CHECK(f.n == 3);
    ++k;
  });
  CHECK(k == fs.size());
}

TEST_CASE("five qubits stream but refuse to materialize") {
  CHECK_THROWS_AS(enumerate_functions(5), std::length_error);
  CHECK_THROWS_AS(enumerate_functions(6), std::invalid_argument);
  CHECK_THROWS_AS(for_each_function(0, [](const BooleanFunction&) {}),
                  std::invalid_argument);
}

TEST_CASE("ideal oracle imprints (-1)^f on the diagonal") {
  const BooleanFunction f(3, 0x9A);
  const Matrix U = ideal_oracle(f);
  REQUIRE(U.rows() == 8);
  for (int x = 0; x < 8; ++x) {
    CHECK(U(x, x) == Complex(f.value(x) ? -1.0 : 1.0, 0.0));
  }
  Matrix off = U;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("decomposition lists the flipped states in descending order") {
  const GateSequence seq = decompose_oracle(BooleanFunction(3, 0x9A));
  REQUIRE(seq.labels.size() == 4);
  CHECK(seq.labels[0].rho == 7);  // 111
  CHECK(seq.labels[1].rho == 4);  // 100
  CHECK(seq.labels[2].rho == 3);  // 011
  CHECK(seq.labels[3].rho == 1);  // 001
  CHECK(decompose_oracle(BooleanFunction(3, 0)).labels.empty());
  CHECK(decompose_oracle(BooleanFunction(3, 0xFF)).labels.size() == 8);
}

TEST_CASE("the CPF product equals the ideal oracle exactly") {
  for (const BooleanFunction& f : enumerate_functions(3)) {
    Matrix product = Matrix::Identity(8, 8);
    for (const CpfLabel& label : decompose_oracle(f).labels) {
      product = ideal_cpf(label.n, label.rho) * product;
    }
    CHECK((product - ideal_oracle(f)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("streaming enumeration handles five qubits at full count") {
  std::uint64_t count = 0;
  std::uint64_t last = 0;
  for_each_function(5, [&](const BooleanFunction& f) {
    if (count == 1) {
      CHECK(f.popcount() == 16);  // first balanced mask
    }
    ++count;
    last = f.table;
  });
  CHECK(count == 300540196);  // 1 + C(31, 16)
  // last mask: top sixteen of the thirty-one non-zero-input bits set
  CHECK(last == 0xFFFF0000ull);
}

}  // TEST_SUITE
