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

#include <algorithm>

#include "support.hpp"

namespace errgen {
namespace {

using testing::Mat;
using testing::max_abs;

PauliString P(const char* s) { return PauliString::parse(s); }

NoiseModel gate_noise() {
  return NoiseModel::parse(R"({
    "parameters": {"a": 0.01, "b": 0.004},
    "rules": [
      {"gate": "h", "errors": [{"kind": "H", "paulis": ["Z"], "rate": {"param": "a"}},
                                {"kind": "S", "paulis": ["X"], "rate": 0.002}]},
      {"gate": "s", "errors": [{"kind": "H", "paulis": ["X"], "rate": {"param": "b", "coefficient": -1.0}}]},
      {"gate": "x90", "errors": [{"kind": "A", "paulis": ["X", "Z"], "rate": 0.001}]},
      {"gate": "cx", "errors": [{"kind": "H", "paulis": ["ZX"], "rate": {"param": "a"}},
                                 {"kind": "C", "paulis": ["XI", "IY"], "rate": 0.0015},
                                 {"kind": "S", "paulis": ["YY"], "rate": 0.001}]},
      {"gate": "cz", "errors": [{"kind": "H", "paulis": ["IZ"], "rate": {"param": "b"}}]}
    ]})");
}

TEST(Propagate, LastLayerIsUnchanged) {
  const Circuit c = parse_circuit("qubits 3\nlayer: h 0 ; cx 2 1\n");
  const auto m = gate_noise();
  const auto layers = propagate(c, m);
  ASSERT_EQ(layers.layers.size(), 1u);
  EXPECT_TRUE(approx_equal(layers.layers[0], layer_generator(m, c, 0), 0.0));
}

TEST(Propagate, HadamardMovesZToX) {
  const Circuit c = parse_circuit("qubits 1\nlayer: h 0\nlayer: h 0\n");
  const auto m = NoiseModel::parse(
      R"({"rules":[{"gate":"h","layers":[0,0],"errors":[{"kind":"H","paulis":["Z"],"rate":0.01}]}]})");
  const auto layers = propagate(c, m);
  EXPECT_EQ(layers.layers[0].size(), 1u);
  EXPECT_EQ(layers.layers[0].get(make_key(Kind::H, P("X"))), 0.01);
  EXPECT_TRUE(layers.layers[1].empty());
}

TEST(Propagate, PhaseGateFlipsHamiltonianSign) {
  // S X S^dag = Y; S Y S^dag = -X, so H_Y moves to H_X with a sign.
  const Circuit c = parse_circuit("qubits 1\nlayer: i 0\nlayer: s 0\n");
  const auto m = NoiseModel::parse(
      R"({"rules":[{"gate":"i","errors":[{"kind":"H","paulis":["Y"],"rate":0.01},{"kind":"S","paulis":["Y"],"rate":0.02}]}]})");
  const auto layers = propagate(c, m);
  EXPECT_EQ(layers.layers[0].get(make_key(Kind::H, P("X"))), -0.01);
  EXPECT_EQ(layers.layers[0].get(make_key(Kind::S, P("X"))), 0.02);
}

TEST(Propagate, TableauAndStateMatchCircuit) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Circuit c = gen_random_clifford(3, 6, seed);
    const auto layers = propagate(c, NoiseModel{});
    EXPECT_EQ(layers.circuit_tableau, circuit_tableau(c));
    const Mat want = testing::ideal_state(c);
    for (const auto& p : oracle::all_paulis(3)) {
      const double dense = (want * testing::dense(p)).trace().real();
      EXPECT_NEAR(layers.psi.signed_pauli_expectation(p).real(), dense, 1e-12);
    }
  }
}

// Rates are only relabelled: each layer keeps its term count, its kinds
// and its multiset of |rate|.
TEST(Propagate, RateMagnitudesAreConserved) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit c = gen_random_clifford(5, 10, seed);
    const auto m = random_sparse_noise(c, 4, 0.05, seed);
    const auto layers = propagate(c, m);
    for (std::size_t i = 0; i < c.depth(); ++i) {
      const auto raw = layer_generator(m, c, i);
      ASSERT_EQ(raw.size(), layers.layers[i].size());
      std::vector<std::pair<Kind, double>> a, b;
      for (const auto& [k, r] : raw.map()) a.emplace_back(k.kind, std::abs(r));
      for (const auto& [k, r] : layers.layers[i].map()) b.emplace_back(k.kind, std::abs(r));
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      EXPECT_EQ(a, b);
    }
  }
}

// prod_i exp(Theta_i) U equals the exact noisy circuit, later layers on
// the left, for any rate size.
void expect_exact(const Circuit& c, const NoiseModel& m) {
  const std::size_t n = c.num_qubits;
  const auto layers = propagate(c, m);
  const Mat u = testing::unitary(c);
  Mat prod = testing::superop(n, [&](const Mat& e) { return Mat(u * e * u.adjoint()); });
  for (const auto& theta : layers.layers) prod = Mat(testing::superop(theta, n).exp()) * prod;
  const Mat exact = testing::noisy_channel(c, m, m.resolve());
  EXPECT_LT(max_abs(prod - exact), 1e-11) << format_circuit(c);
}

TEST(Propagate, ExactAgainstDenseWithGateRules) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 1 + seed % 3;
    expect_exact(gen_random_clifford(n, 1 + seed % 8, seed), gate_noise());
  }
}

TEST(Propagate, ExactAgainstDenseWithLayerRules) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const Circuit c = gen_random_clifford(n, 8, 100 + seed);
    // Large rates on purpose: propagation itself is not perturbative.
    expect_exact(c, random_sparse_noise(c, 3, 0.3, seed));
  }
}

TEST(Propagate, Errors) {
  Circuit empty;
  empty.num_qubits = 1;
  EXPECT_THROW(propagate(empty, NoiseModel{}), std::invalid_argument);
  const Circuit c = parse_circuit("qubits 1\nlayer: h 0\n");
  EXPECT_THROW(propagate(c, gate_noise(), {{"zz", 1.0}}), std::invalid_argument);
}

TEST(Propagate, StreamMatchesStoredLayers) {
  const Circuit c = gen_random_clifford(6, 12, 9);
  const auto m = random_sparse_noise(c, 5, 0.02, 9);
  const auto layers = propagate(c, m);
  const auto values = m.resolve();
  std::vector<std::size_t> order;
  propagate_stream<double>(
      c, m, [&](const RateSpec& r) { return m.evaluate(r, values); },
      [&](std::size_t i, SparseGenerator&& g) {
        order.push_back(i);
        EXPECT_TRUE(approx_equal(g, layers.layers[i], 0.0));
      });
  ASSERT_EQ(order.size(), c.depth());
  EXPECT_EQ(order.front(), c.depth() - 1);
  EXPECT_EQ(order.back(), 0u);
}

}  // namespace
}  // namespace errgen
