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

// Circuit families with their companion noise models: the GHZ create and
// uncreate loop, edge-grab random layers, rotated surface code syndrome
// extraction, and binary randomized benchmarking.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errgen/circuit.hpp"
#include "errgen/clifford.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/pauli.hpp"

namespace errgen {

// ---------------------------------------------------------------------------
// Randomness. Every generator derives its streams from (seed, stream index)
// so results do not depend on call order.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ stream));
}

/// Uniform in [0, 1) from the top 53 bits. The standard distributions are
/// implementation-defined, so these keep outputs identical across
/// toolchains.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, k), by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % k;
  }
}

inline bool bernoulli(std::mt19937_64& rng, double p) { return uniform01(rng) < p; }

/// Standard normal by Box-Muller.
inline double normal01(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace detail {

inline ErrorSpec error(Kind k, std::vector<std::string> labels, RateSpec r) {
  return ErrorSpec{k, std::move(labels), std::move(r)};
}
inline RateSpec param_rate(const std::string& name, double coefficient = 1.0) {
  RateSpec r;
  r.param = name;
  r.coefficient = coefficient;
  return r;
}
inline RateSpec const_rate(double v) {
  RateSpec r;
  r.constant = v;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GHZ loop.

struct GhzLoop {
  Circuit circuit;
  NoiseModel model;      // parameter "theta"
  double theta_acc = 0;  // net rotation angle seen by the GHZ phase
  double p0 = 0;         // cos^2(theta_acc / 2)
};

/// h 0, then cx k-1 k for k = 1..n-1, the same ladder reversed, and a
/// final h 0. Idle qubits get explicit `i` gates. After every gate its
/// target is rotated about z by -theta (qubits below eta) or +theta.
inline GhzLoop gen_ghz_loop(std::size_t n, std::size_t eta, double theta) {
  if (n < 2) throw std::invalid_argument("GHZ loop needs at least 2 qubits");
  if (eta > n) throw std::invalid_argument("eta must be at most n");
  GhzLoop out;
  Circuit& c = out.circuit;
  c.num_qubits = n;
  auto with_idles = [&](Layer layer) {
    std::vector<bool> used(n, false);
    for (const auto& op : layer) {
      for (auto t : op.target_span()) used[t] = true;
    }
    for (std::uint32_t q = 0; q < n; ++q) {
      if (!used[q]) layer.push_back(make_op(GateId::I, q));
    }
    std::sort(layer.begin(), layer.end(), [](const Operation& a, const Operation& b) { return a.targets[0] < b.targets[0]; });
    c.layers.push_back(std::move(layer));
  };
  with_idles({make_op(GateId::H, 0)});
  for (std::uint32_t k = 1; k < n; ++k) with_idles({make_op(GateId::CX, k - 1, k)});
  for (std::uint32_t k = static_cast<std::uint32_t>(n - 1); k >= 1; --k) with_idles({make_op(GateId::CX, k - 1, k)});
  with_idles({make_op(GateId::H, 0)});
  for (std::uint32_t q = 0; q < n; ++q) c.measured_bits.push_back(q);

  // The z rotation by angle phi has H rate phi / 2.
  NoiseModel& m = out.model;
  m.parameters = {{"theta", theta}};
  auto sign_of = [&](std::uint32_t q) { return q < eta ? -1.0 : 1.0; };
  for (double sign : {-1.0, 1.0}) {
    NoiseRule one;
    one.errors = {detail::error(Kind::H, {"Z"}, detail::param_rate("theta", 0.5 * sign))};
    for (std::uint32_t q = 0; q < n; ++q) {
      if (sign_of(q) == sign) one.qubits.push_back(q);
    }
    if (one.qubits.empty()) continue;
    for (GateId g : {GateId::H, GateId::I}) {
      NoiseRule r = one;
      r.gate = g;
      m.rules.push_back(r);
    }
    NoiseRule cx;
    cx.gate = GateId::CX;
    cx.errors = {detail::error(Kind::H, {"IZ"}, detail::param_rate("theta", 0.5 * sign))};
    for (std::uint32_t k = 1; k < n; ++k) {
      if (sign_of(k) == sign) cx.targets.push_back({k - 1, k});
    }
    if (!cx.targets.empty()) m.rules.push_back(cx);
  }

  // A z rotation after layer i reaches the final h as a Z-type string
  // (only cx gates sit in between). It shifts the GHZ phase when that
  // string touches qubit 0; r tracks which qubits do, walking backwards.
  const std::size_t depth = c.layers.size();
  std::vector<std::uint8_t> r(n, 0);
  r[0] = 1;
  double acc = 0.0;
  for (std::size_t i = depth - 1; i-- > 0;) {
    for (const auto& op : c.layers[i]) {
      const std::uint32_t t = op.arity() == 2 ? op.targets[1] : op.targets[0];
      if (r[t]) acc += sign_of(t) * theta;
    }
    if (i == 0) break;
    for (const auto& op : c.layers[i]) {
      if (op.gate == GateId::CX) {
        r[op.targets[1]] ^= r[op.targets[0]];
      } else if (op.gate != GateId::I) {
        throw std::logic_error("unexpected gate inside the GHZ ladder");
      }
    }
  }
  out.theta_acc = acc;
  out.p0 = std::pow(std::cos(acc / 2.0), 2);
  return out;
}

// ---------------------------------------------------------------------------
// Edge-grab random layers on a grid.

struct Grid {
  std::size_t rows = 0, cols = 0;
  std::size_t size() const { return rows * cols; }
  /// Horizontal then vertical nearest-neighbour edges, row-major.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c + 1 < cols; ++c) out.emplace_back(r * cols + c, r * cols + c + 1);
    }
    for (std::size_t r = 0; r + 1 < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) out.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
    return out;
  }
};

/// One edge-grab layer: the target number of cz gates is cz_density * n / 2
/// with randomized rounding; edges are drawn uniformly from those whose
/// endpoints are both free until the target is met or none remain. Every
/// other qubit gets h with probability h_density, else s.
inline Layer edgegrab_layer(const Grid& grid, double cz_density, double h_density, std::mt19937_64& rng) {
  const std::size_t n = grid.size();
  const double want = cz_density * static_cast<double>(n) / 2.0;
  std::size_t target = static_cast<std::size_t>(std::floor(want));
  if (bernoulli(rng, want - std::floor(want))) ++target;
  std::vector<bool> used(n, false);
  Layer layer;
  auto edges = grid.edges();
  std::size_t placed = 0;
  while (placed < target) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> free;
    for (const auto& e : edges) {
      if (!used[e.first] && !used[e.second]) free.push_back(e);
    }
    if (free.empty()) break;
    const auto e = free[uniform_below(rng, free.size())];
    used[e.first] = used[e.second] = true;
    layer.push_back(make_op(GateId::CZ, e.first, e.second));
    ++placed;
  }
  for (std::uint32_t q = 0; q < n; ++q) {
    if (used[q]) continue;
    layer.push_back(make_op(bernoulli(rng, h_density) ? GateId::H : GateId::S, q));
  }
  std::sort(layer.begin(), layer.end(), [](const Operation& a, const Operation& b) { return a.targets[0] < b.targets[0]; });
  return layer;
}

inline Circuit gen_random_edgegrab(const Grid& grid, std::size_t depth, double cz_density, double h_density,
                                   std::uint64_t seed) {
  if (grid.size() == 0) throw std::invalid_argument("empty grid");
  if (cz_density < 0 || cz_density > 1 || h_density < 0 || h_density > 1) {
    throw std::invalid_argument("densities must lie in [0, 1]");
  }
  Circuit c;
  c.num_qubits = grid.size();
  for (std::size_t i = 0; i < depth; ++i) {
    auto rng = stream_rng(seed, i);
    c.layers.push_back(edgegrab_layer(grid, cz_density, h_density, rng));
  }
  return c;
}

/// After every layer each qubit is rotated about z by theta: h and s get
/// H_Z, cz gets H_ZI and H_IZ, all at rate theta / 2.
inline NoiseModel z_rotation_model(double theta) {
  NoiseModel m;
  m.parameters = {{"theta", theta}};
  for (GateId g : {GateId::H, GateId::S, GateId::I}) {
    NoiseRule r;
    r.gate = g;
    r.errors = {detail::error(Kind::H, {"Z"}, detail::param_rate("theta", 0.5))};
    m.rules.push_back(r);
  }
  NoiseRule cz;
  cz.gate = GateId::CZ;
  cz.errors = {detail::error(Kind::H, {"ZI"}, detail::param_rate("theta", 0.5)),
               detail::error(Kind::H, {"IZ"}, detail::param_rate("theta", 0.5))};
  m.rules.push_back(cz);
  return m;
}

// ---------------------------------------------------------------------------
// Rotated surface code, one round of syndrome extraction.

enum class CnotSchedule {
  kStandard,  // X checks TL, TR, BL, BR; Z checks TL, BL, TR, BR
  kSwapped,   // X checks TL, BL, TR, BR; Z checks TL, TR, BL, BR
};

struct Plaquette {
  int i = 0, j = 0;  // top-left corner; -1 or d-1 on the boundary
  bool is_x = false;
  std::uint32_t ancilla = 0;
};

struct SurfaceCode {
  std::size_t distance = 0;
  Circuit circuit;
  std::vector<Plaquette> plaquettes;
  std::size_t prep_layers = 0;  // noiseless logical |0> preparation
  std::size_t data_qubits() const { return distance * distance; }
};

namespace detail {

inline std::vector<Plaquette> plaquettes(int d) {
  std::vector<Plaquette> out;
  for (int i = -1; i < d; ++i) {
    for (int j = -1; j < d; ++j) {
      const bool in_rows = i >= 0 && i < d - 1, in_cols = j >= 0 && j < d - 1;
      const bool is_x = ((i + j) % 2 + 2) % 2 == 0;
      bool keep = false;
      if (in_rows && in_cols) {
        keep = true;
      } else if (in_cols && (i == -1 || i == d - 1)) {
        keep = is_x && ((i == -1 && j % 2 == 1) || (i == d - 1 && j % 2 == 0));
      } else if (in_rows && (j == -1 || j == d - 1)) {
        keep = !is_x && ((j == -1 && i % 2 == 0) || (j == d - 1 && i % 2 == 1));
      }
      if (keep) out.push_back(Plaquette{i, j, is_x, 0});
    }
  }
  return out;
}

// Rows of `m` (bit vectors over data qubits) to reduced row echelon form;
// returns the pivot column of each surviving row.
inline std::vector<std::size_t> rref(std::vector<std::vector<std::uint8_t>>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && !m[p][col]) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != row && m[r][col]) {
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[row][k];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  return pivots;
}

}  // namespace detail

/// d^2 data qubits (row-major) followed by one ancilla per check. The
/// logical |0> is prepared noiselessly first; then H on X ancillas, four
/// CNOT layers, and a closing H. The ancillas are the measured bits.
inline SurfaceCode gen_surface_code_syndrome(std::size_t distance, CnotSchedule schedule = CnotSchedule::kStandard) {
  if (distance < 3 || distance % 2 == 0) throw std::invalid_argument("distance must be odd and at least 3");
  const int d = static_cast<int>(distance);
  SurfaceCode out;
  out.distance = distance;
  out.plaquettes = detail::plaquettes(d);
  const std::size_t nd = distance * distance;
  Circuit& c = out.circuit;
  c.num_qubits = nd + out.plaquettes.size();
  for (std::size_t k = 0; k < out.plaquettes.size(); ++k) {
    out.plaquettes[k].ancilla = static_cast<std::uint32_t>(nd + k);
    c.measured_bits.push_back(static_cast<std::uint32_t>(nd + k));
  }
  auto data = [&](int r, int col) -> int {
    if (r < 0 || r >= d || col < 0 || col >= d) return -1;
    return r * d + col;
  };

  // Logical |0>: from |0...0>, H on each pivot of the X checks in reduced
  // form and CNOTs from the pivot to the rest of its row.
  std::vector<std::vector<std::uint8_t>> xs;
  for (const auto& p : out.plaquettes) {
    if (!p.is_x) continue;
    std::vector<std::uint8_t> row(nd, 0);
    for (int di = 0; di < 2; ++di) {
      for (int dj = 0; dj < 2; ++dj) {
        const int q = data(p.i + di, p.j + dj);
        if (q >= 0) row[q] = 1;
      }
    }
    xs.push_back(std::move(row));
  }
  const auto pivots = detail::rref(xs);
  Layer hl;
  for (auto p : pivots) hl.push_back(make_op(GateId::H, static_cast<std::uint32_t>(p)));
  c.layers.push_back(hl);
  std::vector<Layer> fan;
  std::vector<std::vector<bool>> busy;
  for (std::size_t r = 0; r < xs.size(); ++r) {
    for (std::size_t q = 0; q < nd; ++q) {
      if (!xs[r][q] || q == pivots[r]) continue;
      std::size_t l = 0;
      while (l < fan.size() && (busy[l][pivots[r]] || busy[l][q])) ++l;
      if (l == fan.size()) {
        fan.emplace_back();
        busy.emplace_back(nd, false);
      }
      fan[l].push_back(make_op(GateId::CX, static_cast<std::uint32_t>(pivots[r]), static_cast<std::uint32_t>(q)));
      busy[l][pivots[r]] = busy[l][q] = true;
    }
  }
  for (auto& l : fan) c.layers.push_back(std::move(l));
  out.prep_layers = c.layers.size();

  Layer open;
  for (const auto& p : out.plaquettes) {
    if (p.is_x) open.push_back(make_op(GateId::H, p.ancilla));
  }
  c.layers.push_back(open);
  // Corner offsets: TL, TR, BL, BR.
  static constexpr std::array<std::array<int, 2>, 4> kCorner = {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  static constexpr std::array<int, 4> kN = {0, 1, 2, 3};
  static constexpr std::array<int, 4> kZ = {0, 2, 1, 3};
  const bool standard = schedule == CnotSchedule::kStandard;
  for (int step = 0; step < 4; ++step) {
    Layer layer;
    for (const auto& p : out.plaquettes) {
      const auto& order = (p.is_x == standard) ? kN : kZ;
      const auto& off = kCorner[order[step]];
      const int q = data(p.i + off[0], p.j + off[1]);
      if (q < 0) continue;
      const auto dq = static_cast<std::uint32_t>(q);
      layer.push_back(p.is_x ? make_op(GateId::CX, p.ancilla, dq) : make_op(GateId::CX, dq, p.ancilla));
    }
    c.layers.push_back(std::move(layer));
  }
  c.layers.push_back(open);
  c.validate();
  return out;
}

/// The 18-parameter coherent model: H_X, H_Y, H_Z after every h (theta_X,
/// theta_Y, theta_Z) and one H term per two-qubit Pauli after every cx
/// (theta_IX ... theta_ZZ, control letter first). Preparation layers are
/// left noiseless.
inline NoiseModel surface_code_model(const SurfaceCode& code, const std::vector<double>& values = {}) {
  NoiseModel m;
  std::vector<std::string> one = {"X", "Y", "Z"};
  std::vector<std::string> two;
  for (char a : std::string("IXYZ")) {
    for (char b : std::string("IXYZ")) {
      if (a != 'I' || b != 'I') two.push_back(std::string{a, b});
    }
  }
  for (const auto& l : one) m.parameters.emplace_back("theta_" + l, 0.0);
  for (const auto& l : two) m.parameters.emplace_back("theta_" + l, 0.0);
  if (!values.empty()) {
    if (values.size() != m.parameters.size()) throw std::invalid_argument("expected 18 parameter values");
    for (std::size_t k = 0; k < values.size(); ++k) m.parameters[k].second = values[k];
  }
  const auto range = std::make_pair(code.prep_layers, code.circuit.layers.size() - 1);
  NoiseRule h;
  h.gate = GateId::H;
  h.layers = range;
  for (const auto& l : one) h.errors.push_back(detail::error(Kind::H, {l}, detail::param_rate("theta_" + l)));
  NoiseRule cx;
  cx.gate = GateId::CX;
  cx.layers = range;
  for (const auto& l : two) cx.errors.push_back(detail::error(Kind::H, {l}, detail::param_rate("theta_" + l)));
  m.rules = {h, cx};
  return m;
}

// ---------------------------------------------------------------------------
// Binary randomized benchmarking.

struct BirbCircuit {
  Circuit circuit;
  PauliString target;  // signed Z/I string whose expectation is the energy
  PauliString initial;  // the sampled Pauli s
};

inline constexpr std::array<GateId, 10> kBirbOneQubitGates = {
    GateId::X90, GateId::X90DG, GateId::X, GateId::Y90, GateId::Y90DG,
    GateId::Y,   GateId::S,     GateId::SDG, GateId::Z, GateId::I};

/// A random s, a layer preparing its +1 eigenstate, `depth` random layers
/// (cz on a ring with the given density, random single-qubit gates on the
/// rest), and a closing layer turning the propagated s into a Z/I string.
inline BirbCircuit gen_birb(std::size_t n, std::size_t depth, std::uint64_t seed, double cz_density = 0.25) {
  if (n < 1) throw std::invalid_argument("BiRB needs at least one qubit");
  BirbCircuit out;
  Circuit& c = out.circuit;
  c.num_qubits = n;
  auto rng = stream_rng(seed, 0);
  PauliString s(n);
  do {
    for (std::size_t q = 0; q < n; ++q) s.set(q, "IXYZ"[uniform_below(rng, 4)]);
  } while (s.is_identity());
  out.initial = s;

  auto basis_layer = [&](const PauliString& p, bool closing) {
    Layer layer;
    for (std::uint32_t q = 0; q < n; ++q) {
      GateId g = GateId::I;
      const char ch = p.at(q);
      if (ch == 'X') g = closing ? GateId::Y90DG : GateId::Y90;
      if (ch == 'Y') g = closing ? GateId::X90 : GateId::X90DG;
      layer.push_back(make_op(g, q));
    }
    return layer;
  };
  c.layers.push_back(basis_layer(s, false));

  Grid ring{1, n};
  auto edges = ring.edges();
  if (n > 2) edges.emplace_back(0, static_cast<std::uint32_t>(n - 1));
  for (std::size_t i = 0; i < depth; ++i) {
    auto lr = stream_rng(seed, i + 1);
    std::vector<bool> used(n, false);
    Layer layer;
    const double want = cz_density * static_cast<double>(n) / 2.0;
    std::size_t target = static_cast<std::size_t>(std::floor(want));
    if (bernoulli(lr, want - std::floor(want))) ++target;
    for (std::size_t placed = 0; placed < target; ++placed) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> free;
      for (const auto& e : edges) {
        if (!used[e.first] && !used[e.second]) free.push_back(e);
      }
      if (free.empty()) break;
      const auto e = free[uniform_below(lr, free.size())];
      used[e.first] = used[e.second] = true;
      layer.push_back(make_op(GateId::CZ, std::min(e.first, e.second), std::max(e.first, e.second)));
    }
    for (std::uint32_t q = 0; q < n; ++q) {
      if (!used[q]) layer.push_back(make_op(kBirbOneQubitGates[uniform_below(lr, kBirbOneQubitGates.size())], q));
    }
    std::sort(layer.begin(), layer.end(), [](const Operation& a, const Operation& b) { return a.targets[0] < b.targets[0]; });
    c.layers.push_back(std::move(layer));
  }

  // The prepared state is a +1 eigenstate of s; the layers carry it to s'.
  PauliString sp = s;
  for (std::size_t i = 1; i < c.layers.size(); ++i) {
    for (const auto& op : c.layers[i]) apply_gate(sp, op.gate, op.target_span());
  }
  c.layers.push_back(basis_layer(sp, true));
  PauliString sc = sp;
  for (const auto& op : c.layers.back()) apply_gate(sc, op.gate, op.target_span());
  out.target = sc;
  return out;
}

struct BirbNoiseOptions {
  double hamiltonian = 0.01;   // standard deviation of H rates
  double stochastic = 2e-3;    // S rates uniform in [0, stochastic]
  double active = 1.0;         // A rates scaled into the CP bound by this factor
};

/// Random CP-constrained H/S/A rates for every BiRB gate. Single-qubit
/// gates get weight-1 terms; cz gets weight-1 and weight-2 H terms plus
/// weight-1 S and A terms. A rates on each Pauli are bounded so that
/// sum_Q |a_PQ| <= s_P, which keeps the S/A block positive semidefinite.
inline NoiseModel birb_noise_model(std::uint64_t seed, const BirbNoiseOptions& opt = {}) {
  NoiseModel m;
  auto rng = stream_rng(seed, 0xB1ull);
  auto local = [&](GateId g) {
    NoiseRule r;
    r.gate = g;
    const std::size_t a = gate_arity(g);
    // H terms: all nonidentity Paulis up to weight 2 on the gate.
    const std::vector<std::string> h1 = {"X", "Y", "Z"};
    std::vector<std::string> hs, s1;
    if (a == 1) {
      hs = h1;
      s1 = h1;
    } else {
      for (char x : std::string("IXYZ")) {
        for (char y : std::string("IXYZ")) {
          if (x != 'I' || y != 'I') hs.push_back(std::string{x, y});
        }
      }
      for (const auto& l : h1) {
        s1.push_back(l + "I");
        s1.push_back("I" + l);
      }
    }
    for (const auto& l : hs) {
      r.errors.push_back(detail::error(Kind::H, {l}, detail::const_rate(opt.hamiltonian * normal01(rng))));
    }
    std::vector<double> srate(s1.size());
    for (std::size_t k = 0; k < s1.size(); ++k) {
      srate[k] = opt.stochastic * uniform01(rng);
      r.errors.push_back(detail::error(Kind::S, {s1[k]}, detail::const_rate(srate[k])));
    }
    // A pairs among weight-1 Paulis on the same qubit.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t p = 0; p < s1.size(); ++p) {
      for (std::size_t q = p + 1; q < s1.size(); ++q) {
        bool same_qubit = false;
        for (std::size_t t = 0; t < a; ++t) same_qubit = same_qubit || (s1[p][t] != 'I' && s1[q][t] != 'I');
        if (same_qubit) pairs.emplace_back(p, q);
      }
    }
    std::vector<double> araw(pairs.size());
    std::vector<double> load(s1.size(), 0.0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      araw[k] = 2.0 * uniform01(rng) - 1.0;
      load[pairs[k].first] += std::abs(araw[k]);
      load[pairs[k].second] += std::abs(araw[k]);
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [p, q] = pairs[k];
      double scale = opt.active;
      if (load[p] > 0) scale = std::min(scale, srate[p] / load[p]);
      if (load[q] > 0) scale = std::min(scale, srate[q] / load[q]);
      r.errors.push_back(detail::error(Kind::A, {s1[p], s1[q]}, detail::const_rate(araw[k] * scale)));
    }
    return r;
  };
  for (GateId g : kBirbOneQubitGates) m.rules.push_back(local(g));
  m.rules.push_back(local(GateId::CZ));
  return m;
}

// ---------------------------------------------------------------------------
// Generic random circuits and sparse noise, for accuracy studies.

/// Uniformly random gates from the full library: each layer pairs qubits
/// for two-qubit gates with probability `pair_prob` per qubit.
inline Circuit gen_random_clifford(std::size_t n, std::size_t depth, std::uint64_t seed, double pair_prob = 0.5) {
  static constexpr std::array<GateId, 11> kOne = {GateId::I,   GateId::X,     GateId::Y,   GateId::Z,
                                                  GateId::H,   GateId::S,     GateId::SDG, GateId::X90,
                                                  GateId::X90DG, GateId::Y90, GateId::Y90DG};
  static constexpr std::array<GateId, 3> kTwo = {GateId::CX, GateId::CZ, GateId::SWAP};
  Circuit c;
  c.num_qubits = n;
  for (std::size_t i = 0; i < depth; ++i) {
    auto rng = stream_rng(seed, i);
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t q = 0; q < n; ++q) order[q] = q;
    for (std::size_t k = n; k > 1; --k) std::swap(order[k - 1], order[uniform_below(rng, k)]);
    Layer layer;
    std::size_t k = 0;
    while (k < n) {
      if (k + 1 < n && bernoulli(rng, pair_prob)) {
        layer.push_back(make_op(kTwo[uniform_below(rng, kTwo.size())], order[k], order[k + 1]));
        k += 2;
      } else {
        layer.push_back(make_op(kOne[uniform_below(rng, kOne.size())], order[k]));
        ++k;
      }
    }
    std::sort(layer.begin(), layer.end(), [](const Operation& a, const Operation& b) { return a.targets[0] < b.targets[0]; });
    c.layers.push_back(std::move(layer));
  }
  return c;
}

/// Layer rules with `terms_per_layer` random H/S/C/A terms of weight <= 2
/// per layer. Rates get random signs (S rates positive) and are scaled so
/// that the absolute rates sum to `total` over the whole circuit. The
/// S/C/A block is not constrained to be CP.
inline NoiseModel random_sparse_noise(const Circuit& c, std::size_t terms_per_layer, double total,
                                      std::uint64_t seed) {
  const std::size_t n = c.num_qubits;
  auto rng = stream_rng(seed, 0x5EEDull);
  auto random_pauli = [&] {
    for (;;) {
      std::string s(n, 'I');
      const std::size_t w = 1 + uniform_below(rng, std::min<std::size_t>(2, n));
      for (std::size_t k = 0; k < w; ++k) s[uniform_below(rng, n)] = "XYZ"[uniform_below(rng, 3)];
      if (s != std::string(n, 'I')) return s;
    }
  };
  NoiseModel m;
  std::vector<std::vector<ErrorSpec>> per_layer(c.layers.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    for (std::size_t t = 0; t < terms_per_layer; ++t) {
      const Kind kind = std::array<Kind, 4>{Kind::H, Kind::S, Kind::C, Kind::A}[uniform_below(rng, 4)];
      std::vector<std::string> labels = {random_pauli()};
      if (is_pair_kind(kind)) {
        std::string q;
        do {
          q = random_pauli();
        } while (q == labels[0]);
        labels.push_back(q);
      }
      double rate = 0.1 + uniform01(rng);
      if (kind != Kind::S && bernoulli(rng, 0.5)) rate = -rate;
      sum += std::abs(rate);
      per_layer[i].push_back(detail::error(kind, labels, detail::const_rate(rate)));
    }
  }
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    NoiseRule r;
    r.layers = std::make_pair(i, i);
    for (auto& e : per_layer[i]) {
      e.rate.constant *= total / sum;
      r.errors.push_back(e);
    }
    if (!r.errors.empty()) m.rules.push_back(std::move(r));
  }
  return m;
}

}  // namespace errgen
