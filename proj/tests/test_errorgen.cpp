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

using testing::act;
using testing::dense;
using testing::max_abs;
using testing::Mat;

PauliString P(const char* s) { return PauliString::parse(s); }

TEST(ErrorGen, CanonicalKeyOrdersPairs) {
  auto [k, sign] = canonical_key(Kind::A, P("Z"), P("X"));
  EXPECT_EQ(k.p, P("X"));
  EXPECT_EQ(k.q, P("Z"));
  EXPECT_EQ(sign, -1.0);
  auto [c, csign] = canonical_key(Kind::C, P("Z"), P("X"));
  EXPECT_EQ(c.p, P("X"));
  EXPECT_EQ(csign, 1.0);
  EXPECT_THROW(canonical_key(Kind::C, P("X"), P("X")), std::invalid_argument);
  EXPECT_THROW(canonical_key(Kind::H, P("II"), P("II")), std::invalid_argument);
}

TEST(ErrorGen, AddSwappedAntisymmetricFlipsSign) {
  SparseGenerator g(1);
  g.add(Kind::A, P("Z"), P("X"), 0.5);
  EXPECT_EQ(g.get(make_key(Kind::A, P("X"), P("Z"))), -0.5);
}

TEST(ErrorGen, SandwichExamples) {
  const auto h = eeg_to_sandwich(make_key(Kind::H, P("X")));
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(h.get(P("X"), P("I")), Complex(0, -1));
  EXPECT_EQ(h.get(P("I"), P("X")), Complex(0, 1));
  const auto s = eeg_to_sandwich(make_key(Kind::S, P("X")));
  EXPECT_EQ(s.get(P("X"), P("X")), Complex(1));
  EXPECT_EQ(s.get(P("I"), P("I")), Complex(-1));
  const auto c = eeg_to_sandwich(make_key(Kind::C, P("X"), P("Z")));
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.get(P("X"), P("Z")), Complex(1));
  EXPECT_EQ(c.get(P("Z"), P("X")), Complex(1));
}

// Every EEG on up to 2 qubits: sandwich form, dense formula and the
// projection back all agree.
TEST(ErrorGen, SandwichRoundTripExhaustive) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u}) {
    const Mat rho = testing::random_matrix(n, rng);
    for (const auto& k : testing::all_keys(n)) {
      const auto s = eeg_to_sandwich(k);
      EXPECT_LT(max_abs(act(s, rho) - testing::apply_eeg(k, 1.0, rho)), 1e-12) << k.str();
      const auto back = sandwich_to_generator(s);
      EXPECT_TRUE(approx_equal(back, testing::single(k), 1e-14)) << k.str();
    }
  }
}

TEST(ErrorGen, SandwichRoundTripRandomThreeQubits) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto g = testing::random_generator(3, 4, rng);
    EXPECT_TRUE(approx_equal(sandwich_to_generator(generator_to_sandwich(g)), g, 1e-13));
  }
}

TEST(ErrorGen, ProjectionRejectsNonGenerators) {
  SandwichOperator s(1);
  s.add(1.0, P("X"), P("I"));  // not Hermiticity preserving
  EXPECT_THROW(sandwich_to_generator(s), std::domain_error);
  SandwichOperator t(1);
  t.add(1.0, P("I"), P("I"));  // not trace annihilating
  EXPECT_THROW(sandwich_to_generator(t), std::domain_error);
}

TEST(ErrorGen, ConjugationExamples) {
  const std::uint32_t q0[] = {0};
  const auto s = CliffordTableau::gate(GateId::S, q0, 1);
  SparseGenerator hx(1), sx(1);
  hx.add(Kind::H, P("X"), 0.25);
  sx.add(Kind::S, P("X"), 0.25);
  EXPECT_EQ(conjugate_generator(hx, s).get(make_key(Kind::H, P("Y"))), -0.25);
  EXPECT_EQ(conjugate_generator(sx, s).get(make_key(Kind::S, P("Y"))), 0.25);
}

// Conjugation by a random Clifford (both directions) against the dense
// superoperator U G[U^dag . U] U^dag.
TEST(ErrorGen, ConjugationMatchesDense) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 4;
    const Circuit c = gen_random_clifford(n, 3, 500 + t);
    const auto tab = circuit_tableau(c);
    const Mat u = testing::unitary(c);
    const auto g = testing::random_generator(n, 3, rng);
    const Mat rho = testing::random_matrix(n, rng);
    const auto fwd = conjugate_generator_forward(g, tab);
    const auto inv = conjugate_generator(g, tab);
    EXPECT_LT(max_abs(act(fwd, rho) - u * act(g, u.adjoint() * rho * u) * u.adjoint()), 1e-12);
    EXPECT_LT(max_abs(act(inv, rho) - u.adjoint() * act(g, u * rho * u.adjoint()) * u), 1e-12);
    EXPECT_EQ(fwd.size(), g.size());
    EXPECT_TRUE(approx_equal(conjugate_generator(fwd, tab), g, 1e-15));
  }
}

TEST(ErrorGen, CommutatorExamples) {
  SparseGenerator hx(1), hy(1), sx(1), sz(1);
  hx.add(Kind::H, P("X"), 1.0);
  hy.add(Kind::H, P("Y"), 1.0);
  sx.add(Kind::S, P("X"), 1.0);
  sz.add(Kind::S, P("Z"), 1.0);
  const auto c = commutator(hx, hy);
  EXPECT_EQ(c.size(), 1u);
  EXPECT_NEAR(c.get(make_key(Kind::H, P("Z"))), 2.0, 1e-15);
  EXPECT_TRUE(commutator(sx, sz).empty());
  EXPECT_TRUE(commutator(hx, sx).empty());
}

TEST(ErrorGen, CommutatorsMatchDenseExhaustiveOneQubit) {
  std::mt19937_64 rng(4);
  const Mat rho = testing::random_matrix(1, rng);
  const auto keys = testing::all_keys(1);
  for (const auto& a : keys) {
    for (const auto& b : keys) {
      const auto ga = testing::single(a, 0.7), gb = testing::single(b, -1.3);
      const Mat want = act(ga, act(gb, rho)) - act(gb, act(ga, rho));
      EXPECT_LT(max_abs(act(commutator(ga, gb), rho) - want), 1e-12) << a.str() << " " << b.str();
      EXPECT_LT(max_abs(act(product(ga, gb), rho) - act(ga, act(gb, rho))), 1e-12);
    }
  }
}

TEST(ErrorGen, CommutatorsAndProductsMatchDenseRandom) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 3;
    const auto a = testing::random_generator(n, 3, rng), b = testing::random_generator(n, 3, rng);
    const Mat rho = testing::random_matrix(n, rng);
    const Mat ab = act(a, act(b, rho)), ba = act(b, act(a, rho));
    EXPECT_LT(max_abs(act(commutator(a, b), rho) - (ab - ba)), 1e-12);
    EXPECT_LT(max_abs(act(product(a, b), rho) - ab), 1e-12);
    EXPECT_TRUE(approx_equal(commutator(a, b), commutator(b, a).scaled(-1.0), 1e-14));
  }
}

TEST(ErrorGen, JacobiIdentity) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 2;
    const auto a = testing::random_generator(n, 2, rng), b = testing::random_generator(n, 2, rng),
               c = testing::random_generator(n, 2, rng);
    SparseGenerator sum(n);
    sum += commutator(a, commutator(b, c));
    sum += commutator(b, commutator(c, a));
    sum += commutator(c, commutator(a, b));
    sum.prune(1e-12);
    EXPECT_TRUE(sum.empty());
  }
}

StabilizerState state_of(const char* text) {
  // One-qubit states by name.
  const std::string s(text);
  if (s == "0") return StabilizerState({P("Z")});
  if (s == "+") return StabilizerState({P("X")});
  return StabilizerState({P("Y")});
}

TEST(ErrorGen, AlphaExamples) {
  EXPECT_EQ(alpha(state_of("0"), make_key(Kind::S, P("X")), BitString{0}), -1.0);
  EXPECT_EQ(alpha(state_of("0"), make_key(Kind::H, P("X")), BitString{0}), 0.0);
  // |+>: d/dt <0|e^{-itZ}|+><+|e^{itZ}|0> = 0, and 2^zeta = 2.
  EXPECT_EQ(alpha(state_of("+"), make_key(Kind::H, P("Z")), BitString{0}), 0.0);
  // A z rotation of |+i> leaves p0 alone; a y rotation of |+> moves it at rate -1.
  EXPECT_NEAR(alpha(state_of("y"), make_key(Kind::H, P("Z")), BitString{0}), 0.0, 1e-15);
  EXPECT_NEAR(alpha(state_of("+"), make_key(Kind::H, P("Y")), BitString{0}), -2.0, 1e-15);
}

TEST(ErrorGen, BetaExamples) {
  EXPECT_EQ(beta(state_of("0"), make_key(Kind::S, P("X")), P("Z")), -2.0);
  EXPECT_EQ(beta(state_of("0"), make_key(Kind::S, P("Z")), P("Z")), 0.0);
  EXPECT_EQ(beta(state_of("0"), make_key(Kind::H, P("X")), P("Z")), 0.0);
  EXPECT_EQ(beta(state_of("0"), make_key(Kind::H, P("X")), P("Y")), -2.0);
}

// alpha and beta against dense traces on random stabilizer states.
TEST(ErrorGen, AlphaBetaMatchDense) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 4;
    const Circuit c = gen_random_clifford(n, 4, 900 + t);
    const auto psi = run_ideal(c);
    const Mat rho = testing::ideal_state(c);
    const auto k = testing::random_key(n, rng);
    const Mat img = testing::apply_eeg(k, 1.0, rho);
    const double scale = std::ldexp(1.0, static_cast<int>(psi.zeta()));
    const std::size_t xi = uniform_below(rng, std::size_t{1} << n);
    const double a = alpha(psi, k, testing::bits_of(xi, n));
    EXPECT_NEAR(a, scale * img(static_cast<Eigen::Index>(xi), static_cast<Eigen::Index>(xi)).real(), 1e-12);
    EXPECT_TRUE(a == 0 || std::abs(a) == 1 || std::abs(a) == 2 || std::abs(a) == 4) << a;
    const auto p = testing::random_pauli(n, rng);
    EXPECT_NEAR(beta(psi, k, p), (dense(p) * img).trace().real(), 1e-12);
    EXPECT_EQ(beta(psi, k, PauliString(n)), 0.0);
  }
}

}  // namespace
}  // namespace errgen
