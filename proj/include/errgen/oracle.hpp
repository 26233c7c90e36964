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

// Dense reference simulator for small registers. Everything here is built
// from explicit matrices (gate unitaries are written out by hand, not taken
// from the tableaus) so that it can check the sparse pipeline.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errgen/circuit.hpp"
#include "errgen/clifford.hpp"
#include "errgen/errorgen.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/pauli.hpp"

namespace errgen::oracle {

inline constexpr std::size_t kMaxQubits = 12;

/// A 2^n x 2^n complex matrix, row-major. Index bit q is qubit q.
struct DenseOperator {
  std::size_t n = 0;
  std::size_t dim = 1;
  std::vector<Complex> data;

  DenseOperator() = default;
  explicit DenseOperator(std::size_t num_qubits) : n(num_qubits), dim(std::size_t{1} << num_qubits) {
    if (num_qubits > kMaxQubits) {
      throw std::invalid_argument("dense oracle supports at most " + std::to_string(kMaxQubits) + " qubits");
    }
    data.assign(dim * dim, Complex{});
  }

  Complex& operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }

  DenseOperator& operator+=(const DenseOperator& o) {
    for (std::size_t k = 0; k < data.size(); ++k) data[k] += o.data[k];
    return *this;
  }
  DenseOperator& operator*=(Complex s) {
    for (auto& v : data) v *= s;
    return *this;
  }
  Complex trace() const {
    Complex t{};
    for (std::size_t k = 0; k < dim; ++k) t += (*this)(k, k);
    return t;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

/// |0...0><0...0| on n qubits.
inline DenseOperator zero_state(std::size_t n) {
  DenseOperator rho(n);
  rho(0, 0) = 1.0;
  return rho;
}

namespace detail {

// P|k> = w(k) |k ^ x>.
struct PauliAction {
  std::uint64_t x = 0, z = 0;
  int base = 0;
  Complex omega(std::uint64_t k) const {
    return i_pow(base + 2 * std::popcount(z & k));
  }
};

inline PauliAction action(const PauliString& p) {
  if (p.num_qubits() > kMaxQubits) throw std::invalid_argument("Pauli too large for the dense oracle");
  PauliAction a;
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    if (p.x(q)) a.x |= std::uint64_t{1} << q;
    if (p.z(q)) a.z |= std::uint64_t{1} << q;
  }
  a.base = p.phase_exp() + std::popcount(a.x & a.z);
  return a;
}

}  // namespace detail

/// out += s * P rho.
inline void add_left(DenseOperator& out, Complex s, const PauliString& p, const DenseOperator& rho) {
  const auto a = detail::action(p);
  for (std::size_t k = 0; k < rho.dim; ++k) {
    const Complex w = s * a.omega(k);
    const std::size_t r = k ^ a.x;
    for (std::size_t c = 0; c < rho.dim; ++c) out(r, c) += w * rho(k, c);
  }
}

/// out += s * rho P.
inline void add_right(DenseOperator& out, Complex s, const PauliString& p, const DenseOperator& rho) {
  const auto a = detail::action(p);
  for (std::size_t c = 0; c < rho.dim; ++c) {
    const Complex w = s * a.omega(c);
    const std::size_t k = c ^ a.x;
    for (std::size_t r = 0; r < rho.dim; ++r) out(r, c) += w * rho(r, k);
  }
}

inline DenseOperator left(const PauliString& p, const DenseOperator& rho) {
  DenseOperator out(rho.n);
  add_left(out, 1.0, p, rho);
  return out;
}
inline DenseOperator right(const DenseOperator& rho, const PauliString& p) {
  DenseOperator out(rho.n);
  add_right(out, 1.0, p, rho);
  return out;
}

/// The matrix of P.
inline DenseOperator pauli_matrix(const PauliString& p) {
  DenseOperator id(p.num_qubits());
  for (std::size_t k = 0; k < id.dim; ++k) id(k, k) = 1.0;
  return left(p, id);
}

/// Tr(P rho).
inline Complex expectation(const DenseOperator& rho, const PauliString& p) {
  const auto a = detail::action(p);
  Complex t{};
  for (std::size_t k = 0; k < rho.dim; ++k) t += a.omega(k) * rho(k, k ^ a.x);
  return t;
}

/// out += rate * G[rho] for one elementary generator, straight from its
/// defining formula.
inline void add_eeg(DenseOperator& out, const TermKey& key, double rate, const DenseOperator& rho) {
  const Complex i(0.0, 1.0);
  const PauliString& p = key.p;
  switch (key.kind) {
    case Kind::H:  // -i [P, rho]
      add_left(out, -i * rate, p, rho);
      add_right(out, i * rate, p, rho);
      return;
    case Kind::S:  // P rho P - rho
      add_right(out, rate, p, left(p, rho));
      for (std::size_t k = 0; k < rho.data.size(); ++k) out.data[k] -= rate * rho.data[k];
      return;
    case Kind::C: {  // P rho Q + Q rho P - 1/2 {{P, Q}, rho}
      const PauliString& q = key.q;
      add_right(out, rate, q, left(p, rho));
      add_right(out, rate, p, left(q, rho));
      add_left(out, -0.5 * rate, p, left(q, rho));
      add_left(out, -0.5 * rate, q, left(p, rho));
      add_right(out, -0.5 * rate, q, right(rho, p));
      add_right(out, -0.5 * rate, p, right(rho, q));
      return;
    }
    case Kind::A: {  // i (P rho Q - Q rho P + 1/2 {[P, Q], rho})
      const PauliString& q = key.q;
      add_right(out, i * rate, q, left(p, rho));
      add_right(out, -i * rate, p, left(q, rho));
      add_left(out, 0.5 * i * rate, p, left(q, rho));
      add_left(out, -0.5 * i * rate, q, left(p, rho));
      add_right(out, 0.5 * i * rate, q, right(rho, p));
      add_right(out, -0.5 * i * rate, p, right(rho, q));
      return;
    }
  }
}

/// G[rho] for a sum of elementary generators.
inline DenseOperator apply_generator(const SparseGenerator& g, const DenseOperator& rho) {
  DenseOperator out(rho.n);
  for (const auto& [k, r] : g.sorted_terms()) add_eeg(out, k, r, rho);
  return out;
}

/// sum c L rho R.
inline DenseOperator apply_sandwich(const SandwichOperator& s, const DenseOperator& rho) {
  DenseOperator out(rho.n);
  for (const auto& [k, c] : s.map()) add_right(out, c, k.second, left(k.first, rho));
  return out;
}

/// exp(G)[rho] by its Taylor series, stopped once a term's largest entry
/// falls below `tol`.
inline DenseOperator apply_generator_exp(const DenseOperator& rho, const SparseGenerator& g, double tol = 1e-15) {
  if (g.num_qubits() != 0 && g.num_qubits() != rho.n) {
    throw std::invalid_argument("generator and state sizes differ");
  }
  double total = 0.0;
  for (const auto& [k, r] : g.map()) total += std::abs(r);
  if (total > 1.0) throw std::invalid_argument("total error rate above 1; series not applied");
  DenseOperator out = rho;
  DenseOperator term = rho;
  for (int m = 1; m <= 200; ++m) {
    term = apply_generator(g, term);
    term *= 1.0 / m;
    out += term;
    if (term.max_abs() < tol) return out;
  }
  throw std::runtime_error("generator series did not converge");
}

// ---------------------------------------------------------------------------
// Gates as explicit matrices. Local index bit k is the gate's k-th target;
// cx takes its control first.

/// A small dense square matrix, row-major.
struct SmallMatrix {
  std::size_t dim = 0;
  std::vector<Complex> a;

  explicit SmallMatrix(std::size_t d = 0) : dim(d), a(d * d) {}
  static SmallMatrix identity(std::size_t d) {
    SmallMatrix m(d);
    for (std::size_t k = 0; k < d; ++k) m(k, k) = 1.0;
    return m;
  }
  Complex& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }

  friend SmallMatrix operator*(const SmallMatrix& x, const SmallMatrix& y) {
    SmallMatrix out(x.dim);
    for (std::size_t i = 0; i < x.dim; ++i) {
      for (std::size_t k = 0; k < x.dim; ++k) {
        const Complex v = x(i, k);
        if (v == Complex{}) continue;
        for (std::size_t j = 0; j < x.dim; ++j) out(i, j) += v * y(k, j);
      }
    }
    return out;
  }
  double norm1() const {
    double best = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < dim; ++r) s += std::abs((*this)(r, c));
      best = std::max(best, s);
    }
    return best;
  }
};

inline SmallMatrix gate_unitary(GateId id) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  auto one = [](Complex a, Complex b, Complex c, Complex d) {
    SmallMatrix m(2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
  };
  switch (id) {
    case GateId::I: return one(1, 0, 0, 1);
    case GateId::X: return one(0, 1, 1, 0);
    case GateId::Y: return one(0, -i, i, 0);
    case GateId::Z: return one(1, 0, 0, -1);
    case GateId::H: return one(h, h, h, -h);
    case GateId::S: return one(1, 0, 0, i);
    case GateId::SDG: return one(1, 0, 0, -i);
    case GateId::X90: return one(h, -i * h, -i * h, h);
    case GateId::X90DG: return one(h, i * h, i * h, h);
    case GateId::Y90: return one(h, -h, h, h);
    case GateId::Y90DG: return one(h, h, -h, h);
    case GateId::CX: {
      SmallMatrix m(4);
      for (std::size_t k = 0; k < 4; ++k) {
        const std::size_t c = k & 1u, t = (k >> 1) & 1u;
        m(c | ((t ^ c) << 1), k) = 1.0;
      }
      return m;
    }
    case GateId::CZ: {
      SmallMatrix m = SmallMatrix::identity(4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateId::SWAP: {
      SmallMatrix m(4);
      m(0, 0) = m(3, 3) = 1.0;
      m(2, 1) = m(1, 2) = 1.0;
      return m;
    }
  }
  throw std::invalid_argument("unknown gate id");
}

// ---------------------------------------------------------------------------
// Local superoperators. A local operator X on `a` qubits is stored as the
// vector X(r, c) at position r * 2^a + c.

namespace detail {

inline SmallMatrix local_superop(std::size_t a, const std::function<DenseOperator(const DenseOperator&)>& f) {
  const std::size_t d = std::size_t{1} << a;
  SmallMatrix out(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      DenseOperator e(a);
      e(i, j) = 1.0;
      const DenseOperator img = f(e);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) out(r * d + c, i * d + j) = img(r, c);
      }
    }
  }
  return out;
}

// exp(M) by scaling and squaring with a Taylor core.
inline SmallMatrix expm(const SmallMatrix& m) {
  int s = 0;
  const double nrm = m.norm1();
  if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  SmallMatrix a = m;
  for (auto& v : a.a) v = std::ldexp(v.real(), -s) + Complex(0.0, std::ldexp(v.imag(), -s));
  SmallMatrix out = SmallMatrix::identity(m.dim);
  SmallMatrix term = SmallMatrix::identity(m.dim);
  for (int k = 1; k <= 30; ++k) {
    term = term * a;
    for (auto& v : term.a) v /= static_cast<double>(k);
    for (std::size_t q = 0; q < out.a.size(); ++q) out.a[q] += term.a[q];
  }
  for (int k = 0; k < s; ++k) out = out * out;
  return out;
}

}  // namespace detail

/// Applies a local superoperator K on `targets` to rho in place.
inline void apply_local(DenseOperator& rho, const SmallMatrix& k, std::span<const std::uint32_t> targets) {
  const std::size_t a = targets.size();
  const std::size_t d = std::size_t{1} << a;
  std::uint64_t mask = 0;
  std::vector<std::uint64_t> offset(d, 0);
  for (std::size_t t = 0; t < a; ++t) mask |= std::uint64_t{1} << targets[t];
  for (std::size_t loc = 0; loc < d; ++loc) {
    for (std::size_t t = 0; t < a; ++t) {
      if ((loc >> t) & 1u) offset[loc] |= std::uint64_t{1} << targets[t];
    }
  }
  std::vector<Complex> in(d * d), out(d * d);
  for (std::size_t r0 = 0; r0 < rho.dim; ++r0) {
    if (r0 & mask) continue;
    for (std::size_t c0 = 0; c0 < rho.dim; ++c0) {
      if (c0 & mask) continue;
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) in[r * d + c] = rho(r0 | offset[r], c0 | offset[c]);
      }
      for (std::size_t i = 0; i < d * d; ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < d * d; ++j) acc += k(i, j) * in[j];
        out[i] = acc;
      }
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) rho(r0 | offset[r], c0 | offset[c]) = out[r * d + c];
      }
    }
  }
}

/// U rho U^dagger for one gate.
inline SmallMatrix unitary_superop(GateId id) {
  const SmallMatrix u = gate_unitary(id);
  const std::size_t a = gate_arity(id);
  return detail::local_superop(a, [&](const DenseOperator& e) {
    DenseOperator out(a);
    for (std::size_t r = 0; r < u.dim; ++r) {
      for (std::size_t c = 0; c < u.dim; ++c) {
        Complex acc{};
        for (std::size_t k = 0; k < u.dim; ++k) {
          for (std::size_t l = 0; l < u.dim; ++l) acc += u(r, k) * e(k, l) * std::conj(u(c, l));
        }
        out(r, c) = acc;
      }
    }
    return out;
  });
}

/// exp(G) for a generator on `a` local qubits.
inline SmallMatrix generator_superop_exp(const SparseGenerator& g, std::size_t a) {
  if (g.empty()) return SmallMatrix::identity(std::size_t{1} << (2 * a));
  const SmallMatrix gen = detail::local_superop(a, [&](const DenseOperator& e) { return apply_generator(g, e); });
  return detail::expm(gen);
}

/// The generator that gate rules attach to `op`, written on the op's own
/// qubits (local qubit k is the k-th target).
inline SparseGenerator local_op_generator(const NoiseModel& model, std::size_t layer, const Operation& op,
                                          const std::vector<double>& values) {
  const std::size_t a = op.arity();
  static constexpr std::uint32_t kLocal[2] = {0, 1};
  const std::span<const std::uint32_t> local(kLocal, a);
  SparseGenerator out(a);
  for (const auto& rule : model.rules) {
    if (!rule.gate || !rule.matches(layer, op)) continue;
    for (const auto& e : rule.errors) {
      const PauliString p = lift_label(e.labels[0], local, a);
      const PauliString q = is_pair_kind(e.kind) ? lift_label(e.labels[1], local, a) : p;
      out.add(e.kind, p, q, model.evaluate(e.rate, values));
    }
  }
  out.prune(0.0);
  return out;
}

/// Runs the noisy circuit on `rho`: each layer's gates, then exp of that
/// layer's generator. Gate-rule noise is applied per gate as one local
/// superoperator exp(G_op) (U . U^dagger); layers that also carry layer-wide
/// rules fall back to the full series on the whole register.
inline void evolve(DenseOperator& rho, const Circuit& c, const NoiseModel& model, const std::vector<double>& values,
                   double tol = 1e-15) {
  c.validate();
  if (rho.n != c.num_qubits) throw std::invalid_argument("state and circuit sizes differ");
  std::map<std::pair<GateId, std::string>, SmallMatrix> cache;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    bool layer_wide = false;
    for (const auto& rule : model.rules) {
      if (!rule.gate && rule.in_layers(i) && !rule.errors.empty()) layer_wide = true;
    }
    for (const auto& op : c.layers[i]) {
      if (layer_wide) {
        auto [it, fresh] = cache.try_emplace({op.gate, std::string()});
        if (fresh) it->second = unitary_superop(op.gate);
        apply_local(rho, it->second, op.target_span());
        continue;
      }
      const SparseGenerator g = local_op_generator(model, i, op, values);
      // Cache key: each term and the exact bit pattern of its rate.
      std::string tag;
      for (const auto& [k, r] : g.sorted_terms()) {
        std::uint64_t bits;
        std::memcpy(&bits, &r, sizeof bits);
        tag += k.str() + ":" + std::to_string(bits) + ";";
      }
      auto [it, fresh] = cache.try_emplace({op.gate, tag});
      if (fresh) it->second = generator_superop_exp(g, op.arity()) * unitary_superop(op.gate);
      apply_local(rho, it->second, op.target_span());
    }
    if (layer_wide) rho = apply_generator_exp(rho, layer_generator(model, c, i, values), tol);
  }
}

/// Exact outcome distribution and Pauli expectations of the noisy circuit
/// started from |0...0>.
struct ExactResult {
  std::vector<double> probabilities;  // index bit q is qubit q
  std::vector<double> expectations;   // in the order requested
};

inline constexpr std::size_t kMaxDistributionQubits = 10;
inline constexpr std::size_t kMaxProcessQubits = 3;

inline DenseOperator run(const Circuit& c, const NoiseModel& model, const std::vector<double>& values) {
  if (c.num_qubits > kMaxDistributionQubits) {
    throw std::invalid_argument("oracle limited to " + std::to_string(kMaxDistributionQubits) + " qubits");
  }
  DenseOperator rho = zero_state(c.num_qubits);
  evolve(rho, c, model, values);
  return rho;
}

inline ExactResult exact_circuit(const Circuit& c, const NoiseModel& model,
                                 const std::map<std::string, double>& bindings = {},
                                 const std::vector<PauliString>& observables = {}) {
  const DenseOperator rho = run(c, model, model.resolve(bindings));
  ExactResult out;
  out.probabilities.resize(rho.dim);
  for (std::size_t k = 0; k < rho.dim; ++k) out.probabilities[k] = rho(k, k).real();
  for (const auto& p : observables) out.expectations.push_back(expectation(rho, p).real());
  return out;
}

/// Probability of one bitstring from an exact distribution.
inline double probability_of(const std::vector<double>& probs, const std::vector<std::uint8_t>& bits) {
  std::size_t k = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) k |= static_cast<std::size_t>(bits[q] & 1u) << q;
  return probs.at(k);
}

/// All 4^n Pauli strings, qubit 0 varying slowest in I, X, Y, Z order.
inline std::vector<PauliString> all_paulis(std::size_t n) {
  std::vector<PauliString> out;
  const std::size_t count = std::size_t{1} << (2 * n);
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  for (std::size_t m = 0; m < count; ++m) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) p.set(q, kLetters[(m >> (2 * (n - 1 - q))) & 3u]);
    out.push_back(std::move(p));
  }
  return out;
}

/// Pauli transfer matrix M[a][b] = Tr(P_a L(P_b)) / 2^n of the channel
/// `evolve_fn` (called on each operator in place).
template <class Fn>
std::vector<double> transfer_matrix(std::size_t n, Fn&& evolve_fn) {
  const auto paulis = all_paulis(n);
  const std::size_t m = paulis.size();
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  std::vector<double> out(m * m);
  for (std::size_t b = 0; b < m; ++b) {
    DenseOperator op = pauli_matrix(paulis[b]);
    evolve_fn(op);
    for (std::size_t a = 0; a < m; ++a) out[a * m + b] = expectation(op, paulis[a]).real() * scale;
  }
  return out;
}

/// Process fidelity of the noisy circuit against the ideal one,
/// Tr(M_ideal^-1 M_noisy) / 4^n. The ideal transfer matrix is a signed
/// permutation, so its inverse is its transpose.
inline double process_fidelity(const Circuit& c, const NoiseModel& model,
                               const std::map<std::string, double>& bindings = {}) {
  if (c.num_qubits > kMaxProcessQubits) {
    throw std::invalid_argument("process fidelity limited to " + std::to_string(kMaxProcessQubits) + " qubits");
  }
  const auto values = model.resolve(bindings);
  const NoiseModel ideal;
  const auto noisy = transfer_matrix(c.num_qubits, [&](DenseOperator& op) { evolve(op, c, model, values); });
  const auto clean = transfer_matrix(c.num_qubits, [&](DenseOperator& op) { evolve(op, c, ideal, {}); });
  double acc = 0.0;
  for (std::size_t k = 0; k < noisy.size(); ++k) acc += clean[k] * noisy[k];
  return acc / static_cast<double>(std::size_t{1} << (2 * c.num_qubits));
}

/// Dense superoperator of a generator on n qubits, 4^n x 4^n, acting on
/// row-major vectorized operators.
inline SmallMatrix dense_superoperator(const SparseGenerator& g, std::size_t n) {
  return detail::local_superop(n, [&](const DenseOperator& e) { return apply_generator(g, e); });
}

/// Dense unitary of a whole circuit (small n only).
inline SmallMatrix circuit_unitary(const Circuit& c) {
  if (c.num_qubits > kMaxQubits) throw std::invalid_argument("circuit too large for a dense unitary");
  const std::size_t dim = std::size_t{1} << c.num_qubits;
  SmallMatrix u = SmallMatrix::identity(dim);
  for (const auto& layer : c.layers) {
    for (const auto& op : layer) {
      const SmallMatrix g = gate_unitary(op.gate);
      const std::size_t a = op.arity();
      std::uint64_t mask = 0;
      for (std::size_t t = 0; t < a; ++t) mask |= std::uint64_t{1} << op.targets[t];
      SmallMatrix next(dim);
      for (std::size_t col = 0; col < dim; ++col) {
        for (std::size_t k = 0; k < dim; ++k) {
          const Complex v = u(k, col);
          if (v == Complex{}) continue;
          std::size_t loc = 0;
          for (std::size_t t = 0; t < a; ++t) loc |= ((k >> op.targets[t]) & 1u) << t;
          for (std::size_t r = 0; r < g.dim; ++r) {
            const Complex gv = g(r, loc);
            if (gv == Complex{}) continue;
            std::size_t row = k & ~mask;
            for (std::size_t t = 0; t < a; ++t) row |= ((r >> t) & 1u) << op.targets[t];
            next(row, col) += gv * v;
          }
        }
      }
      u = std::move(next);
    }
  }
  return u;
}

}  // namespace errgen::oracle
