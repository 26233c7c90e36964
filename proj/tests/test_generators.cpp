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
#include <set>

#include "support.hpp"

namespace errgen {
namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void expect_round_trip(const Circuit& c) {
  const std::string text = format_circuit(c);
  EXPECT_EQ(format_circuit(parse_circuit(text)), text);
  EXPECT_NO_THROW(c.validate());
}

TEST(Ghz, TwoQubitHandCount) {
  // q0 picks up -theta after the opening h; q1 picks up +theta after the
  // first cx. Nothing else acts on a qubit inside the GHZ state.
  const auto g = gen_ghz_loop(2, 1, 1e-4);
  EXPECT_EQ(g.circuit.depth(), 4u);
  EXPECT_EQ(g.theta_acc, 0.0);
  EXPECT_EQ(g.p0, 1.0);
  const auto g0 = gen_ghz_loop(2, 0, 1e-4);
  EXPECT_NEAR(g0.theta_acc, 2e-4, 1e-18);
  EXPECT_NEAR(g0.p0, std::pow(std::cos(1e-4), 2), 1e-18);
  EXPECT_NEAR(gen_ghz_loop(3, 1, 1e-4).theta_acc, -1e-4, 1e-18);
  expect_round_trip(g.circuit);
}

TEST(Ghz, SignFlipSymmetry) {
  for (std::size_t n : {2u, 5u, 9u}) {
    EXPECT_NEAR(gen_ghz_loop(n, n, 0.01).theta_acc, -gen_ghz_loop(n, 0, 0.01).theta_acc, 1e-15);
    EXPECT_NEAR(gen_ghz_loop(n, n, 0.01).p0, gen_ghz_loop(n, 0, 0.01).p0, 1e-15);
  }
}

// The companion value is exact for any theta: compare with the oracle.
TEST(Ghz, CompanionValueMatchesOracle) {
  for (std::size_t n : {2u, 3u, 5u}) {
    for (std::size_t eta = 0; eta <= n; ++eta) {
      const auto g = gen_ghz_loop(n, eta, 0.3);
      const auto r = oracle::exact_circuit(g.circuit, g.model);
      EXPECT_NEAR(r.probabilities[0], g.p0, 1e-13) << n << " " << eta;
    }
  }
}

TEST(EdgeGrab, Determinism) {
  const Grid grid{4, 4};
  const auto a = gen_random_edgegrab(grid, 10, 0.5, 0.5, 42);
  const auto b = gen_random_edgegrab(grid, 10, 0.5, 0.5, 42);
  EXPECT_EQ(format_circuit(a), format_circuit(b));
  EXPECT_NE(format_circuit(a), format_circuit(gen_random_edgegrab(grid, 10, 0.5, 0.5, 43)));
  expect_round_trip(a);
  // Golden hash, frozen from the first run.
  EXPECT_EQ(fnv1a(format_circuit(a)), 11717040647602611514ull);
}

TEST(EdgeGrab, Densities) {
  const Grid grid{4, 4};
  for (const auto& layer : gen_random_edgegrab(grid, 20, 0.6, 0.0, 1).layers) {
    for (const auto& op : layer) EXPECT_NE(op.gate, GateId::H);
  }
  for (const auto& layer : gen_random_edgegrab(grid, 20, 0.0, 1.0, 2).layers) {
    EXPECT_EQ(layer.size(), 16u);
    for (const auto& op : layer) EXPECT_EQ(op.gate, GateId::H);
  }
  // Expected fraction of qubits inside a cz is the density.
  const auto edges = grid.edges();
  std::set<std::pair<std::uint32_t, std::uint32_t>> allowed(edges.begin(), edges.end());
  std::size_t in_cz = 0, total = 0;
  for (const auto& layer : gen_random_edgegrab(grid, 400, 0.25, 0.5, 3).layers) {
    for (const auto& op : layer) {
      total += op.arity();
      if (op.gate != GateId::CZ) continue;
      in_cz += 2;
      const auto e = std::minmax(op.targets[0], op.targets[1]);
      EXPECT_TRUE(allowed.count({e.first, e.second}));
    }
  }
  EXPECT_EQ(total, 400u * 16u);
  EXPECT_NEAR(static_cast<double>(in_cz) / static_cast<double>(total), 0.25, 0.02);
}

TEST(SurfaceCode, Counts) {
  const auto d3 = gen_surface_code_syndrome(3);
  EXPECT_EQ(d3.circuit.num_qubits, 17u);
  EXPECT_EQ(d3.circuit.measured_bits.size(), 8u);
  EXPECT_EQ(d3.plaquettes.size(), 8u);
  EXPECT_EQ(d3.circuit.depth(), d3.prep_layers + 6);
  EXPECT_EQ(gen_surface_code_syndrome(11).circuit.num_qubits, 241u);
  EXPECT_THROW(gen_surface_code_syndrome(4), std::invalid_argument);
  EXPECT_THROW(gen_surface_code_syndrome(1), std::invalid_argument);
  expect_round_trip(d3.circuit);
  EXPECT_EQ(surface_code_model(d3).parameters.size(), 18u);
}

std::vector<std::uint32_t> plaquette_support(const Plaquette& p, std::size_t d) {
  std::vector<std::uint32_t> out;
  for (int di : {0, 1}) {
    for (int dj : {0, 1}) {
      const int r = p.i + di, c = p.j + dj;
      if (r >= 0 && c >= 0 && r < static_cast<int>(d) && c < static_cast<int>(d)) {
        out.push_back(static_cast<std::uint32_t>(r * static_cast<int>(d) + c));
      }
    }
  }
  return out;
}

TEST(SurfaceCode, NoiselessSyndromeIsZero) {
  for (auto sched : {CnotSchedule::kStandard, CnotSchedule::kSwapped}) {
    for (std::size_t d : {3u, 5u, 7u}) {
      const auto sc = gen_surface_code_syndrome(d, sched);
      const auto psi = run_ideal(sc.circuit);
      for (auto b : sc.circuit.measured_bits) {
        EXPECT_EQ(psi.signed_pauli_expectation(PauliString::single(sc.circuit.num_qubits, b, 'Z')), Complex(1.0))
            << "d=" << d << " bit " << b;
      }
      // Each data qubit sits in at most two plaquettes of each type.
      std::vector<int> x_count(d * d, 0), z_count(d * d, 0);
      for (const auto& p : sc.plaquettes) {
        for (auto q : plaquette_support(p, d)) (p.is_x ? x_count : z_count)[q]++;
      }
      for (std::size_t q = 0; q < d * d; ++q) {
        EXPECT_GE(x_count[q], 1);
        EXPECT_LE(x_count[q], 2);
        EXPECT_GE(z_count[q], 1);
        EXPECT_LE(z_count[q], 2);
      }
    }
  }
}

// A data error injected right after preparation lights up exactly the
// plaquettes of the opposite type that contain it.
TEST(SurfaceCode, DataErrorsFlipNeighbouringChecks) {
  const std::size_t d = 3;
  const auto sc = gen_surface_code_syndrome(d);
  const std::size_t n = sc.circuit.num_qubits;
  for (std::uint32_t q = 0; q < d * d; ++q) {
    for (char letter : {'X', 'Z'}) {
      NoiseModel m;
      NoiseRule r;
      r.layers = {sc.prep_layers - 1, sc.prep_layers - 1};
      RateSpec rate;
      rate.constant = 0.01;
      r.errors = {ErrorSpec{Kind::S, {PauliString::single(n, q, letter).str().substr(1)}, rate}};
      m.rules = {r};
      const auto [gen, psi] = circuit_error_generator(sc.circuit, m, {}, 1);
      const Evaluator ev(gen, psi);
      for (const auto& p : sc.plaquettes) {
        const auto sup = plaquette_support(p, d);
        const bool contains = std::find(sup.begin(), sup.end(), q) != sup.end();
        const bool detects = contains && p.is_x == (letter == 'Z');
        EXPECT_NEAR(ev.flip_probability(p.ancilla, 1), detects ? 0.01 : 0.0, 1e-15)
            << "q=" << q << " " << letter << " plaquette (" << p.i << "," << p.j << ")";
      }
    }
  }
}

TEST(SurfaceCode, StochasticModelHasNoAmplification) {
  const auto sc = gen_surface_code_syndrome(3);
  std::vector<double> values(18);
  for (std::size_t k = 0; k < 18; ++k) values[k] = 1e-3 * static_cast<double>(k + 1);
  const auto stoc = equivalent_stochastic(surface_code_model(sc, values));
  const auto [gen, psi] = circuit_error_generator(sc.circuit, stoc, {}, 1);
  const auto twin = equivalent_stochastic(stoc);
  const auto [gen2, psi2] = circuit_error_generator(sc.circuit, twin, {}, 1);
  const auto a = marginal_error_probabilities(gen.generator);
  const auto b = marginal_error_probabilities(gen2.generator);
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (b[q] > 0) {
      EXPECT_EQ(*coherent_amplification(a[q], b[q]), 1.0);
    }
  }
}

TEST(Birb, NoiselessEnergyIsOne) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 1 + seed % 10;
    const std::size_t depth = seed % 5 == 0 ? 0 : 1 + seed % 17;
    const auto b = gen_birb(n, depth, seed);
    EXPECT_EQ(b.circuit.depth(), depth + 2);
    EXPECT_FALSE(b.initial.is_identity());
    for (std::size_t q = 0; q < n; ++q) EXPECT_FALSE(b.target.x(q));
    EXPECT_FALSE(b.target.is_identity());
    EXPECT_EQ(run_ideal(b.circuit).signed_pauli_expectation(b.target), Complex(1.0));
    expect_round_trip(b.circuit);
  }
}

TEST(Birb, Determinism) {
  const auto a = gen_birb(10, 16, 7);
  EXPECT_EQ(format_circuit(a.circuit), format_circuit(gen_birb(10, 16, 7).circuit));
  EXPECT_EQ(fnv1a(format_circuit(a.circuit)), 12365204238538604053ull);
  const auto m1 = birb_noise_model(3).to_json().dump();
  EXPECT_EQ(m1, birb_noise_model(3).to_json().dump());
  EXPECT_NE(m1, birb_noise_model(4).to_json().dump());
}

// A rates never exceed the stochastic rate of the same Pauli pair, so each
// gate channel is CP: check via the Choi matrix of every single-gate rule.
TEST(Birb, NoiseModelIsCompletelyPositive) {
  const auto m = birb_noise_model(11);
  for (const auto& rule : m.rules) {
    ASSERT_TRUE(rule.gate.has_value());
    const std::size_t a = gate_arity(*rule.gate);
    const Operation op = a == 1 ? make_op(*rule.gate, 0) : make_op(*rule.gate, 0, 1);
    const auto g = oracle::local_op_generator(m, 0, op, m.resolve());
    const testing::Mat k = testing::superop(g, a).exp();
    // Choi matrix: sum_{rc} |r><c| (x) E(|r><c|).
    const Eigen::Index dim = Eigen::Index{1} << a;
    testing::Mat choi = testing::Mat::Zero(dim * dim, dim * dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const Eigen::VectorXcd col = k.col(c * dim + r);
        for (Eigen::Index rr = 0; rr < dim; ++rr) {
          for (Eigen::Index cc = 0; cc < dim; ++cc) choi(r * dim + rr, c * dim + cc) = col(cc * dim + rr);
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<testing::Mat> es(choi);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12) << gate_name(*rule.gate);
  }
}

TEST(RandomClifford, ShapesAndDeterminism) {
  const Circuit c = gen_random_clifford(6, 9, 5);
  EXPECT_EQ(c.num_qubits, 6u);
  EXPECT_EQ(c.depth(), 9u);
  EXPECT_EQ(format_circuit(c), format_circuit(gen_random_clifford(6, 9, 5)));
  expect_round_trip(c);
  const auto m = random_sparse_noise(c, 3, 0.02, 5);
  double total = 0.0;
  for (std::size_t i = 0; i < c.depth(); ++i) {
    const auto g = layer_generator(m, c, i);
    for (const auto& [k, r] : g.map()) {
      total += std::abs(r);
      EXPECT_LE(k.p.weight(), 2u);
      EXPECT_LE(k.second().weight(), 2u);
    }
  }
  // Repeated draws of one term merge, so the sum can only shrink.
  EXPECT_LE(total, 0.02 + 1e-15);
  EXPECT_GT(total, 0.015);
}

TEST(Rng, StreamsAreStable) {
  auto a = stream_rng(1, 2);
  auto b = stream_rng(1, 2);
  auto c = stream_rng(1, 3);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  for (int k = 0; k < 1000; ++k) {
    const double u = uniform01(a);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(uniform_below(a, 7), 7u);
  }
}

}  // namespace
}  // namespace errgen
