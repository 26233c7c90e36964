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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errgen/circuit.hpp"
#include "errgen/clifford.hpp"
#include "errgen/pauli.hpp"

namespace errgen {

/// Computational basis string, one 0/1 entry per qubit (qubit 0 first).
using BitString = std::vector<std::uint8_t>;

inline BitString parse_bitstring(std::string_view s) {
  BitString out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
    out.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

inline std::string format_bitstring(const BitString& b) {
  std::string out;
  for (auto v : b) out.push_back(v ? '1' : '0');
  return out;
}

/// Packed bit vector helpers shared by the stabilizer and expansion code.
using Words = std::vector<std::uint64_t>;

inline Words pack_bits(const BitString& b) {
  Words w(PauliString::word_count(b.size()), 0);
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (b[q]) w[q >> 6] |= std::uint64_t{1} << (q & 63);
  }
  return w;
}

inline bool bit_at(const std::uint64_t* w, std::size_t q) { return (w[q >> 6] >> (q & 63)) & 1u; }

inline int parity_and(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  int p = 0;
  for (std::size_t i = 0; i < a.size(); ++i) p ^= std::popcount(a[i] & b[i]) & 1;
  return p;
}

/// Pure stabilizer state given by n commuting, independent, Hermitian
/// generators. The generators are reduced once to a canonical echelon form:
/// rows [0, zeta) carry X pivots (ascending qubit), rows [zeta, n) are
/// Z-only with Z pivots (ascending qubit). Every query is then a pass over
/// the pivot rows.
class StabilizerState {
 public:
  StabilizerState() = default;
  explicit StabilizerState(std::vector<PauliString> generators);

  /// |0...0> evolved by the tableau: generators U Z_q U^dagger.
  static StabilizerState from_tableau(const CliffordTableau& t) {
    std::vector<PauliString> gens;
    gens.reserve(t.num_qubits());
    for (std::size_t q = 0; q < t.num_qubits(); ++q) gens.push_back(t.z_image(q));
    return StabilizerState(std::move(gens));
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t zeta() const { return zeta_; }
  const std::vector<PauliString>& generators() const { return gens_; }
  /// Canonical rows; the first zeta() have X pivots.
  const std::vector<PauliString>& canonical_rows() const { return rows_; }
  const std::vector<std::size_t>& x_pivots() const { return x_piv_; }
  const std::vector<std::size_t>& z_pivots() const { return z_piv_; }

  /// <psi|R|psi>, exact (0 or a power of i).
  Complex signed_pauli_expectation(const PauliString& r) const {
    return i_pow_or_zero(expectation_exponent(r));
  }
  /// Exponent k with <psi|R|psi> = i^k, or -1 when the expectation is 0.
  int expectation_exponent(const PauliString& r) const;

  /// 2^zeta <x|L|psi><psi|R|x>.
  Complex phi(const BitString& x, const PauliString& l, const PauliString& r) const {
    check_len(x);
    return phi_packed(pack_bits(x).data(), l, r);
  }
  Complex phi_packed(const std::uint64_t* x, const PauliString& l, const PauliString& r) const;

  bool in_support(const BitString& x) const {
    check_len(x);
    const Words w = pack_bits(x);
    return z_rows_satisfied(w.data());
  }

  /// One basis string in the support.
  BitString support_point() const {
    BitString x(n_, 0);
    for (std::size_t k = zeta_; k < n_; ++k) x[z_piv_[k - zeta_]] = rows_[k].phase_exp() == 2;
    return x;
  }

  /// Reduce a packed X-pattern modulo the span of the X parts of the
  /// X-pivot rows. Linear; zero exactly on that span.
  void reduce_x(std::uint64_t* v) const {
    for (std::size_t k = 0; k < zeta_; ++k) {
      if (bit_at(v, x_piv_[k])) {
        const auto xs = rows_[k].xs();
        for (std::size_t w = 0; w < xs.size(); ++w) v[w] ^= xs[w];
      }
    }
  }

  /// Bit k set iff P anticommutes with canonical row k. Two Paulis with the
  /// same syndrome map |psi> to the same ray.
  Words syndrome(const PauliString& p) const {
    Words out(PauliString::word_count(n_), 0);
    const auto px = p.xs(), pz = p.zs();
    for (std::size_t k = 0; k < n_; ++k) {
      const auto rx = rows_[k].xs(), rz = rows_[k].zs();
      int par = 0;
      for (std::size_t w = 0; w < px.size(); ++w) par ^= std::popcount((px[w] & rz[w]) ^ (pz[w] & rx[w])) & 1;
      if (par) out[k >> 6] |= std::uint64_t{1} << (k & 63);
    }
    return out;
  }

 private:
  static Complex i_pow_or_zero(int k) { return k < 0 ? Complex{0.0, 0.0} : i_pow(k); }

  void check_len(const BitString& x) const {
    if (x.size() != n_) {
      throw std::invalid_argument("bitstring length " + std::to_string(x.size()) + " != " +
                                  std::to_string(n_));
    }
  }
  void check_pauli(const PauliString& p) const {
    if (p.num_qubits() != n_) throw std::invalid_argument("Pauli size does not match the state");
  }

  // Multiplies m by X-pivot rows until its X part vanishes on all pivots.
  void eliminate_x(PauliString& m) const {
    for (std::size_t k = 0; k < zeta_; ++k) {
      if (m.x(x_piv_[k])) m *= rows_[k];
    }
  }

  bool z_rows_satisfied(const std::uint64_t* y) const {
    const std::span<const std::uint64_t> ys(y, PauliString::word_count(n_));
    for (std::size_t k = zeta_; k < n_; ++k) {
      const int sign = rows_[k].phase_exp() == 2 ? 1 : 0;
      if ((parity_and(rows_[k].zs(), ys) ^ sign) != 0) return false;
    }
    return true;
  }

  std::size_t n_ = 0;
  std::size_t zeta_ = 0;
  std::vector<PauliString> gens_;
  std::vector<PauliString> rows_;
  std::vector<std::size_t> x_piv_, z_piv_;
};

inline StabilizerState::StabilizerState(std::vector<PauliString> generators)
    : n_(generators.size()), gens_(std::move(generators)) {
  for (const auto& g : gens_) {
    if (g.num_qubits() != n_) throw std::invalid_argument("need n generators on n qubits");
    if (!g.is_hermitian()) throw std::invalid_argument("stabilizer generators must be Hermitian");
  }
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = a + 1; b < n_; ++b) {
      if (!commutes(gens_[a], gens_[b])) throw std::invalid_argument("stabilizer generators must commute");
    }
  }
  rows_ = gens_;
  std::size_t rank = 0;
  for (std::size_t q = 0; q < n_ && rank < n_; ++q) {
    std::size_t r = rank;
    while (r < n_ && !rows_[r].x(q)) ++r;
    if (r == n_) continue;
    std::swap(rows_[rank], rows_[r]);
    for (std::size_t i = 0; i < n_; ++i) {
      if (i != rank && rows_[i].x(q)) rows_[i] *= rows_[rank];
    }
    x_piv_.push_back(q);
    ++rank;
  }
  zeta_ = rank;
  for (std::size_t q = 0; q < n_ && rank < n_; ++q) {
    std::size_t r = rank;
    while (r < n_ && !rows_[r].z(q)) ++r;
    if (r == n_) continue;
    std::swap(rows_[rank], rows_[r]);
    for (std::size_t i = zeta_; i < n_; ++i) {
      if (i != rank && rows_[i].z(q)) rows_[i] *= rows_[rank];
    }
    z_piv_.push_back(q);
    ++rank;
  }
  if (rank != n_) throw std::invalid_argument("stabilizer generators are not independent");
  for (const auto& row : rows_) {
    if (row.is_identity()) throw std::invalid_argument("stabilizer group contains -I");
  }
}

inline int StabilizerState::expectation_exponent(const PauliString& r) const {
  check_pauli(r);
  PauliString m = r;
  eliminate_x(m);
  for (auto w : m.xs()) {
    if (w) return -1;
  }
  for (std::size_t k = zeta_; k < n_; ++k) {
    if (m.z(z_piv_[k - zeta_])) m *= rows_[k];
  }
  if (!m.is_identity()) return -1;
  return m.phase_exp();
}

// Phi = 2^{zeta-n} sum_v (-1)^{v.x} <psi| R Z^v L |psi>. Moving Z^v to the
// left of R gives (-1)^{v.y} with y = x ^ x(R). Reducing M = R L by the
// X-pivot rows leaves i^c Z^u, and the sum over v collapses to a character
// sum over the Z-only subgroup: it equals 2^{n-zeta} iff every Z-only row
// s_k Z^{w_k} has s_k (-1)^{w_k.y} = 1, and 0 otherwise.
inline Complex StabilizerState::phi_packed(const std::uint64_t* x, const PauliString& l,
                                           const PauliString& r) const {
  check_pauli(l);
  check_pauli(r);
  PauliString m = r * l;
  eliminate_x(m);
  for (auto w : m.xs()) {
    if (w) return {0.0, 0.0};
  }
  const auto rx = r.xs();
  Words y(rx.begin(), rx.end());
  for (std::size_t w = 0; w < y.size(); ++w) y[w] ^= x[w];
  if (!z_rows_satisfied(y.data())) return {0.0, 0.0};
  const int sign = parity_and(m.zs(), y);
  return i_pow(m.phase_exp() + 2 * sign);
}

/// Output state of the noise-free circuit applied to |0...0>.
inline StabilizerState run_ideal(const Circuit& c) {
  return StabilizerState::from_tableau(circuit_tableau(c));
}

}  // namespace errgen
