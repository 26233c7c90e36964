// Copyright 2026 The errgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

namespace errgen {
namespace {

using testing::dense;
using testing::Mat;

struct Case {
  Circuit circuit;
  StabilizerState psi;
  Eigen::VectorXcd vec;
};

Case random_case(std::size_t n, std::uint64_t seed) {
  Case c;
  c.circuit = gen_random_clifford(n, 5, seed);
  c.psi = run_ideal(c.circuit);
  c.vec = testing::unitary(c.circuit).col(0);
  return c;
}

TEST(Stabilizer, ZeroStateBasics) {
  const StabilizerState psi = StabilizerState::from_tableau(CliffordTableau::identity(3));
  EXPECT_EQ(psi.zeta(), 0u);
  EXPECT_EQ(psi.signed_pauli_expectation(PauliString::parse("ZIZ")), Complex(1.0));
  EXPECT_EQ(psi.signed_pauli_expectation(PauliString::parse("XII")), Complex(0.0));
  EXPECT_EQ(psi.signed_pauli_expectation(PauliString::parse("-iZII")), Complex(0.0, -1.0));
  EXPECT_TRUE(psi.in_support(BitString{0, 0, 0}));
  EXPECT_FALSE(psi.in_support(BitString{0, 1, 0}));
}

TEST(Stabilizer, ExpectationsMatchDenseForAllPaulis) {
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto c = random_case(n, 40 + trial);
    for (auto p : oracle::all_paulis(n)) {
      for (int ph = 0; ph < 4; ++ph) {
        p.set_phase_exp(ph);
        const Complex want = c.vec.dot(dense(p) * c.vec);
        EXPECT_LT(std::abs(c.psi.signed_pauli_expectation(p) - want), 1e-12) << p.str();
      }
    }
  }
}

TEST(Stabilizer, SupportSizeIsTwoToZeta) {
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto c = random_case(n, 90 + trial);
    std::size_t count = 0;
    for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
      const double p = std::norm(c.vec(static_cast<Eigen::Index>(k)));
      const bool in = c.psi.in_support(testing::bits_of(k, n));
      EXPECT_EQ(in, p > 1e-12);
      if (in) {
        ++count;
        EXPECT_NEAR(p, std::ldexp(1.0, -static_cast<int>(c.psi.zeta())), 1e-12);
      }
    }
    EXPECT_EQ(count, std::size_t{1} << c.psi.zeta());
    EXPECT_TRUE(c.psi.in_support(c.psi.support_point()));
  }
}

TEST(Stabilizer, PhiMatchesDense) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto c = random_case(n, 200 + trial);
    const double scale = std::ldexp(1.0, static_cast<int>(c.psi.zeta()));
    for (int k = 0; k < 20; ++k) {
      PauliString l = testing::random_pauli(n, rng, true), r = testing::random_pauli(n, rng, true);
      l.set_phase_exp(static_cast<int>(uniform_below(rng, 4)));
      const std::size_t xi = uniform_below(rng, std::size_t{1} << n);
      const Eigen::VectorXcd lv = dense(l) * c.vec;
      const Eigen::RowVectorXcd rv = c.vec.adjoint() * dense(r);
      const Complex want = scale * lv(static_cast<Eigen::Index>(xi)) * rv(static_cast<Eigen::Index>(xi));
      EXPECT_LT(std::abs(c.psi.phi(testing::bits_of(xi, n), l, r) - want), 1e-12);
    }
  }
}

TEST(Stabilizer, EqualSyndromesGiveSameRay) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto c = random_case(n, 300 + trial);
    for (int k = 0; k < 40; ++k) {
      const auto a = testing::random_pauli(n, rng, true), b = testing::random_pauli(n, rng, true);
      const Eigen::VectorXcd va = dense(a) * c.vec, vb = dense(b) * c.vec;
      const double overlap = std::abs(va.dot(vb));
      EXPECT_EQ(c.psi.syndrome(a) == c.psi.syndrome(b), overlap > 0.5);
    }
  }
}

TEST(Stabilizer, RejectsBadGenerators) {
  EXPECT_THROW(StabilizerState({PauliString::parse("XI"), PauliString::parse("ZI")}), std::invalid_argument);
  EXPECT_THROW(StabilizerState({PauliString::parse("ZI"), PauliString::parse("ZI")}), std::invalid_argument);
  EXPECT_THROW(StabilizerState({PauliString::parse("iZI"), PauliString::parse("IZ")}), std::invalid_argument);
}

TEST(Stabilizer, BitstringText) {
  EXPECT_EQ(parse_bitstring("0110"), (BitString{0, 1, 1, 0}));
  EXPECT_EQ(format_bitstring(BitString{1, 0, 1}), "101");
  EXPECT_THROW(parse_bitstring("01a"), std::invalid_argument);
}

}  // namespace
}  // namespace errgen
