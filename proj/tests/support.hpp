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


// Dense reference helpers shared by the unit tests and the acceptance
// binary. Matrices are built with Eigen straight from the defining
// formulas, independently of the sparse code paths under test.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errgen/errgen.hpp"

namespace errgen::testing {

using Mat = Eigen::MatrixXcd;

inline Mat letter(char c) {
  const Complex i(0.0, 1.0);
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  }
  return out;
}

/// Matrix of P; index bit q is qubit q, so qubit 0 is the rightmost factor.
inline Mat dense(const PauliString& p) {
  Mat m = Mat::Identity(1, 1);
  for (std::size_t q = p.num_qubits(); q-- > 0;) m = kron(m, letter(p.at(q)));
  return p.phase() * m;
}

inline Mat identity(std::size_t n) { return Mat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n); }

/// rate * G[rho] from the defining formulas.
inline Mat apply_eeg(const TermKey& k, double rate, const Mat& rho) {
  const Complex i(0.0, 1.0);
  const Mat p = dense(k.p);
  switch (k.kind) {
    case Kind::H: return rate * (-i) * (p * rho - rho * p);
    case Kind::S: return rate * (p * rho * p - rho);
    case Kind::C: {
      const Mat q = dense(k.q);
      const Mat ac = p * q + q * p;
      return rate * (p * rho * q + q * rho * p - 0.5 * (ac * rho + rho * ac));
    }
    case Kind::A: {
      const Mat q = dense(k.q);
      const Mat cm = p * q - q * p;
      return rate * i * (p * rho * q - q * rho * p + 0.5 * (cm * rho + rho * cm));
    }
  }
  return rho;
}

inline Mat act(const SparseGenerator& g, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& [k, r] : g.map()) out += apply_eeg(k, r, rho);
  return out;
}

inline Mat act(const SandwichOperator& s, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& [k, c] : s.map()) out += c * dense(k.first) * rho * dense(k.second);
  return out;
}

/// Superoperator matrix acting on column-stacked operators.
template <class Fn>
Mat superop(std::size_t n, Fn&& f) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat out(d * d, d * d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      Mat e = Mat::Zero(d, d);
      e(r, c) = 1.0;
      const Mat img = f(e);
      out.col(c * d + r) = Eigen::Map<const Eigen::VectorXcd>(img.data(), d * d);
    }
  }
  return out;
}

inline Mat superop(const SparseGenerator& g, std::size_t n) {
  return superop(n, [&](const Mat& e) { return act(g, e); });
}

inline oracle::DenseOperator to_oracle(const Mat& m, std::size_t n) {
  oracle::DenseOperator out(n);
  for (std::size_t r = 0; r < out.dim; ++r) {
    for (std::size_t c = 0; c < out.dim; ++c) out(r, c) = m(r, c);
  }
  return out;
}

inline Mat from_oracle(const oracle::DenseOperator& op) {
  Mat m(op.dim, op.dim);
  for (std::size_t r = 0; r < op.dim; ++r) {
    for (std::size_t c = 0; c < op.dim; ++c) m(r, c) = op(r, c);
  }
  return m;
}

/// Superoperator of the exact noisy circuit, from the dense oracle.
inline Mat noisy_channel(const Circuit& c, const NoiseModel& model, const std::vector<double>& values) {
  return superop(c.num_qubits, [&](const Mat& e) {
    auto op = to_oracle(e, c.num_qubits);
    oracle::evolve(op, c, model, values);
    return from_oracle(op);
  });
}

inline Mat unitary(const Circuit& c) {
  const auto u = oracle::circuit_unitary(c);
  Mat m(u.dim, u.dim);
  for (std::size_t r = 0; r < u.dim; ++r) {
    for (std::size_t col = 0; col < u.dim; ++col) m(r, col) = u(r, col);
  }
  return m;
}

/// |psi><psi| with psi = U_c |0...0>.
inline Mat ideal_state(const Circuit& c) {
  const Mat u = unitary(c);
  const Eigen::VectorXcd v = u.col(0);
  return v * v.adjoint();
}

inline Mat random_matrix(std::size_t n, std::mt19937_64& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  Mat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = Complex(normal01(rng), normal01(rng));
  }
  return m;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Random inputs.

inline PauliString random_pauli(std::size_t n, std::mt19937_64& rng, bool allow_identity = false) {
  for (;;) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; ++q) p.set(q, "IXYZ"[uniform_below(rng, 4)]);
    if (allow_identity || !p.is_identity()) return p;
  }
}

inline TermKey random_key(std::size_t n, std::mt19937_64& rng) {
  const Kind kind = std::array<Kind, 4>{Kind::H, Kind::S, Kind::C, Kind::A}[uniform_below(rng, 4)];
  const PauliString p = random_pauli(n, rng);
  if (!is_pair_kind(kind)) return make_key(kind, p);
  PauliString q;
  do {
    q = random_pauli(n, rng);
  } while (q == p);
  return canonical_key(kind, p, q).first;
}

inline SparseGenerator random_generator(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
  SparseGenerator g(n);
  for (std::size_t k = 0; k < terms; ++k) g.add_key(random_key(n, rng), 2.0 * uniform01(rng) - 1.0);
  return g;
}

/// Every EEG on n qubits.
inline std::vector<TermKey> all_keys(std::size_t n) {
  std::vector<TermKey> out;
  auto paulis = oracle::all_paulis(n);
  paulis.erase(paulis.begin());  // identity
  for (const auto& p : paulis) {
    out.push_back(make_key(Kind::H, p));
    out.push_back(make_key(Kind::S, p));
  }
  for (std::size_t a = 0; a < paulis.size(); ++a) {
    for (std::size_t b = a + 1; b < paulis.size(); ++b) {
      out.push_back(canonical_key(Kind::C, paulis[a], paulis[b]).first);
      out.push_back(canonical_key(Kind::A, paulis[a], paulis[b]).first);
    }
  }
  return out;
}

inline SparseGenerator single(const TermKey& k, double rate = 1.0) {
  SparseGenerator g(k.p.num_qubits());
  g.add_key(k, rate);
  return g;
}

inline BitString bits_of(std::size_t index, std::size_t n) {
  BitString b(n);
  for (std::size_t q = 0; q < n; ++q) b[q] = (index >> q) & 1u;
  return b;
}

}  // namespace errgen::testing
