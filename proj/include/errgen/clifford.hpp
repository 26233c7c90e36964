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

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errgen/pauli.hpp"

namespace errgen {

enum class GateId : std::uint8_t {
  I, X, Y, Z, H, S, SDG, X90, X90DG, Y90, Y90DG, CX, CZ, SWAP,
};
inline constexpr std::size_t kNumGates = 14;

/// Image of a local Pauli (at most two qubits) under U(.)U^dagger.
struct LocalImage {
  std::uint8_t x = 0;
  std::uint8_t z = 0;
  std::uint8_t phase = 0;  // i^phase
};

struct GateInfo {
  GateId id;
  std::string_view name;
  int arity;
  // Indexed by (x bits) | (z bits) << arity.
  std::array<LocalImage, 16> forward;
  std::array<LocalImage, 16> inverse;
};

namespace detail {

// sigma(x1,z1) i^p1 * sigma(x2,z2) i^p2 on a few qubits packed in one word.
inline LocalImage local_mul(LocalImage a, LocalImage b) {
  const unsigned cx = a.x ^ b.x, cz = a.z ^ b.z;
  const int k = a.phase + b.phase + std::popcount(unsigned(a.x & a.z)) +
                std::popcount(unsigned(b.x & b.z)) + 2 * std::popcount(unsigned(a.z & b.x)) -
                std::popcount(cx & cz);
  return {static_cast<std::uint8_t>(cx), static_cast<std::uint8_t>(cz),
          static_cast<std::uint8_t>(((k % 4) + 4) % 4)};
}

inline LocalImage parse_local(std::string_view s) {
  const PauliString p = PauliString::parse(s);
  LocalImage out;
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    out.x |= static_cast<std::uint8_t>(p.x(q) << q);
    out.z |= static_cast<std::uint8_t>(p.z(q) << q);
  }
  out.phase = static_cast<std::uint8_t>(p.phase_exp());
  return out;
}

// Generator images listed as X0, Z0, X1, Z1.
inline GateInfo make_gate(GateId id, std::string_view name, std::initializer_list<const char*> images) {
  GateInfo g{id, name, static_cast<int>(images.size() / 2), {}, {}};
  std::vector<LocalImage> gens;
  for (const char* s : images) gens.push_back(parse_local(s));
  const int a = g.arity;
  const unsigned count = 1u << (2 * a);
  for (unsigned idx = 0; idx < count; ++idx) {
    const unsigned xb = idx & ((1u << a) - 1), zb = idx >> a;
    LocalImage acc;
    acc.phase = static_cast<std::uint8_t>(std::popcount(xb & zb) & 3);
    for (int q = 0; q < a; ++q) {
      if ((xb >> q) & 1u) acc = local_mul(acc, gens[2 * q]);
      if ((zb >> q) & 1u) acc = local_mul(acc, gens[2 * q + 1]);
    }
    g.forward[idx] = acc;
    const unsigned back = acc.x | (unsigned(acc.z) << a);
    g.inverse[back] = {static_cast<std::uint8_t>(xb), static_cast<std::uint8_t>(zb),
                       static_cast<std::uint8_t>((4 - acc.phase) & 3)};
  }
  return g;
}

inline const std::array<GateInfo, kNumGates>& gate_table() {
  static const std::array<GateInfo, kNumGates> table = {
      make_gate(GateId::I, "i", {"X", "Z"}),
      make_gate(GateId::X, "x", {"X", "-Z"}),
      make_gate(GateId::Y, "y", {"-X", "-Z"}),
      make_gate(GateId::Z, "z", {"-X", "Z"}),
      make_gate(GateId::H, "h", {"Z", "X"}),
      make_gate(GateId::S, "s", {"Y", "Z"}),
      make_gate(GateId::SDG, "sdg", {"-Y", "Z"}),
      make_gate(GateId::X90, "x90", {"X", "-Y"}),
      make_gate(GateId::X90DG, "x90dg", {"X", "Y"}),
      make_gate(GateId::Y90, "y90", {"-Z", "X"}),
      make_gate(GateId::Y90DG, "y90dg", {"Z", "-X"}),
      make_gate(GateId::CX, "cx", {"XX", "ZI", "IX", "ZZ"}),
      make_gate(GateId::CZ, "cz", {"XZ", "ZI", "ZX", "IZ"}),
      make_gate(GateId::SWAP, "swap", {"IX", "IZ", "XI", "ZI"}),
  };
  return table;
}

}  // namespace detail

inline const GateInfo& gate_info(GateId id) {
  return detail::gate_table()[static_cast<std::size_t>(id)];
}

inline GateId gate_from_name(std::string_view name) {
  for (const auto& g : detail::gate_table()) {
    if (g.name == name) return g.id;
  }
  throw std::invalid_argument("unknown gate '" + std::string(name) + "'");
}

inline std::string_view gate_name(GateId id) { return gate_info(id).name; }
inline int gate_arity(GateId id) { return gate_info(id).arity; }

/// Replace the letters of `p` on `targets` by their image under the gate.
/// `inverse` selects U^dagger(.)U instead of U(.)U^dagger.
inline void apply_gate(PauliString& p, GateId id, std::span<const std::uint32_t> targets,
                       bool inverse = false) {
  const GateInfo& g = gate_info(id);
  unsigned idx = 0;
  for (int k = 0; k < g.arity; ++k) {
    idx |= unsigned(p.x(targets[k])) << k;
    idx |= unsigned(p.z(targets[k])) << (k + g.arity);
  }
  const LocalImage& e = inverse ? g.inverse[idx] : g.forward[idx];
  for (int k = 0; k < g.arity; ++k) {
    p.set_x(targets[k], (e.x >> k) & 1u);
    p.set_z(targets[k], (e.z >> k) & 1u);
  }
  p.add_phase_exp(e.phase);
}

namespace detail {
// Image of P under a map given by generator rows: P = i^k prod_q i^{xz} X^x Z^z.
inline PauliString map_through_rows(const std::vector<PauliString>& xr,
                                    const std::vector<PauliString>& zr, const PauliString& p) {
  const std::size_t n = xr.size();
  if (p.num_qubits() != n) {
    throw std::invalid_argument("Pauli size mismatch: " + std::to_string(p.num_qubits()) +
                                " vs " + std::to_string(n));
  }
  PauliString out(n);
  int k = p.phase_exp();
  const auto px = p.xs(), pz = p.zs();
  for (std::size_t w = 0; w < px.size(); ++w) {
    std::uint64_t m = px[w] | pz[w];
    while (m) {
      const auto b = static_cast<std::size_t>(std::countr_zero(m));
      m &= m - 1;
      const std::size_t q = w * 64 + b;
      const bool xb = (px[w] >> b) & 1u, zb = (pz[w] >> b) & 1u;
      if (xb) out *= xr[q];
      if (zb) out *= zr[q];
      if (xb && zb) ++k;
    }
  }
  out.add_phase_exp(k);
  return out;
}
}  // namespace detail

/// Tableau of an n-qubit Clifford U: the signed images U X_q U^dagger and
/// U Z_q U^dagger, plus the images under U^dagger(.)U, both built once.
class CliffordTableau {
 public:
  CliffordTableau() = default;

  static CliffordTableau identity(std::size_t n) {
    std::vector<PauliString> xs, zs;
    xs.reserve(n);
    zs.reserve(n);
    for (std::size_t q = 0; q < n; ++q) {
      xs.push_back(PauliString::single(n, q, 'X'));
      zs.push_back(PauliString::single(n, q, 'Z'));
    }
    return from_images(std::move(xs), std::move(zs));
  }

  /// Builds the tableau from forward images; validates the symplectic
  /// condition and Hermiticity, then derives the inverse images.
  static CliffordTableau from_images(std::vector<PauliString> x_images,
                                     std::vector<PauliString> z_images);

  /// Single gate embedded into n qubits.
  static CliffordTableau gate(GateId id, std::span<const std::uint32_t> targets, std::size_t n);
  static CliffordTableau gate(std::string_view name, std::span<const std::uint32_t> targets,
                              std::size_t n) {
    return gate(gate_from_name(name), targets, n);
  }

  std::size_t num_qubits() const { return x_.size(); }
  const PauliString& x_image(std::size_t q) const { return x_[q]; }
  const PauliString& z_image(std::size_t q) const { return z_[q]; }
  const PauliString& x_inverse_image(std::size_t q) const { return inv_x_[q]; }
  const PauliString& z_inverse_image(std::size_t q) const { return inv_z_[q]; }

  /// U P U^dagger.
  PauliString conjugate(const PauliString& p) const { return detail::map_through_rows(x_, z_, p); }
  /// U^dagger P U, i.e. s_{U,P} P_U.
  PauliString conjugate_inverse(const PauliString& p) const {
    return detail::map_through_rows(inv_x_, inv_z_, p);
  }

  CliffordTableau inverse() const {
    CliffordTableau out;
    out.x_ = inv_x_;
    out.z_ = inv_z_;
    out.inv_x_ = x_;
    out.inv_z_ = z_;
    return out;
  }

  friend bool operator==(const CliffordTableau& a, const CliffordTableau& b) {
    return a.x_ == b.x_ && a.z_ == b.z_;
  }

 private:
  std::vector<PauliString> x_, z_, inv_x_, inv_z_;
};

inline CliffordTableau CliffordTableau::from_images(std::vector<PauliString> x_images,
                                                    std::vector<PauliString> z_images) {
  const std::size_t n = x_images.size();
  if (z_images.size() != n) throw std::invalid_argument("tableau needs n X and n Z images");
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto* img : {&x_images[a], &z_images[a]}) {
      if (img->num_qubits() != n) throw std::invalid_argument("tableau image has wrong size");
      if (!img->is_hermitian()) throw std::invalid_argument("tableau image is not Hermitian");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const bool ok = commutes(x_images[a], x_images[b]) && commutes(z_images[a], z_images[b]) &&
                      (commutes(x_images[a], z_images[b]) == (a != b)) &&
                      (commutes(z_images[a], x_images[b]) == (a != b));
      if (!ok) throw std::invalid_argument("tableau images violate the symplectic condition");
    }
  }
  CliffordTableau t;
  t.x_ = std::move(x_images);
  t.z_ = std::move(z_images);
  // Unsigned inverse from the symplectic transpose, then fix signs by
  // pushing each candidate forward.
  t.inv_x_.assign(n, PauliString(n));
  t.inv_z_.assign(n, PauliString(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t q = 0; q < n; ++q) {
      t.inv_x_[j].set_x(q, t.z_[q].z(j));
      t.inv_x_[j].set_z(q, t.x_[q].z(j));
      t.inv_z_[j].set_x(q, t.z_[q].x(j));
      t.inv_z_[j].set_z(q, t.x_[q].x(j));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (auto* row : {&t.inv_x_[j], &t.inv_z_[j]}) {
      const PauliString fwd = t.conjugate(*row);
      row->set_phase_exp(fwd.phase_exp());  // fwd is +-generator; copy the sign
    }
  }
  return t;
}

inline CliffordTableau CliffordTableau::gate(GateId id, std::span<const std::uint32_t> targets,
                                             std::size_t n) {
  const int arity = gate_arity(id);
  if (targets.size() != static_cast<std::size_t>(arity)) {
    throw std::invalid_argument("gate '" + std::string(gate_name(id)) + "' takes " +
                                std::to_string(arity) + " target(s)");
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] >= n) throw std::out_of_range("gate target out of range");
    for (std::size_t j = 0; j < k; ++j) {
      if (targets[j] == targets[k]) throw std::invalid_argument("repeated gate target");
    }
  }
  std::vector<PauliString> xs, zs;
  for (std::size_t q = 0; q < n; ++q) {
    xs.push_back(PauliString::single(n, q, 'X'));
    zs.push_back(PauliString::single(n, q, 'Z'));
  }
  for (auto t : targets) {
    apply_gate(xs[t], id, targets);
    apply_gate(zs[t], id, targets);
  }
  return from_images(std::move(xs), std::move(zs));
}

/// Tableau of later * earlier (earlier acts first).
inline CliffordTableau compose(const CliffordTableau& later, const CliffordTableau& earlier) {
  if (later.num_qubits() != earlier.num_qubits()) {
    throw std::invalid_argument("tableau size mismatch");
  }
  const std::size_t n = later.num_qubits();
  std::vector<PauliString> xs, zs;
  xs.reserve(n);
  zs.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    xs.push_back(later.conjugate(earlier.x_image(q)));
    zs.push_back(later.conjugate(earlier.z_image(q)));
  }
  return CliffordTableau::from_images(std::move(xs), std::move(zs));
}

inline PauliString conjugate_pauli(const CliffordTableau& t, const PauliString& p) {
  return t.conjugate(p);
}
inline PauliString conjugate_pauli_inverse(const CliffordTableau& t, const PauliString& p) {
  return t.conjugate_inverse(p);
}

/// Mutable forward-only tableau S, updated by right multiplication
/// S <- S * U_gate at O(1) row products per gate. Used to sweep a circuit
/// backwards while holding the suffix product.
class CliffordFrame {
 public:
  explicit CliffordFrame(std::size_t n) {
    for (std::size_t q = 0; q < n; ++q) {
      x_.push_back(PauliString::single(n, q, 'X'));
      z_.push_back(PauliString::single(n, q, 'Z'));
    }
  }

  std::size_t num_qubits() const { return x_.size(); }

  /// S P S^dagger.
  PauliString conjugate(const PauliString& p) const { return detail::map_through_rows(x_, z_, p); }

  const PauliString& x_image(std::size_t q) const { return x_[q]; }
  const PauliString& z_image(std::size_t q) const { return z_[q]; }

  /// S <- S * U, where U is the gate on `targets`.
  void right_multiply(GateId id, std::span<const std::uint32_t> targets) {
    const GateInfo& g = gate_info(id);
    if (id == GateId::I) return;
    std::array<PauliString, 4> fresh;
    for (int k = 0; k < g.arity; ++k) {
      for (int zpart = 0; zpart < 2; ++zpart) {
        const unsigned idx = 1u << (k + zpart * g.arity);
        fresh[2 * k + zpart] = image_of_local(g.forward[idx], targets, g.arity);
      }
    }
    for (int k = 0; k < g.arity; ++k) {
      x_[targets[k]] = std::move(fresh[2 * k]);
      z_[targets[k]] = std::move(fresh[2 * k + 1]);
    }
  }

  CliffordTableau to_tableau() const { return CliffordTableau::from_images(x_, z_); }

 private:
  PauliString image_of_local(const LocalImage& e, std::span<const std::uint32_t> targets,
                             int arity) const {
    PauliString out(num_qubits());
    int k = e.phase;
    for (int j = 0; j < arity; ++j) {
      const bool xb = (e.x >> j) & 1u, zb = (e.z >> j) & 1u;
      if (xb) out *= x_[targets[j]];
      if (zb) out *= z_[targets[j]];
      if (xb && zb) ++k;
    }
    out.add_phase_exp(k);
    return out;
  }

  std::vector<PauliString> x_, z_;
};

}  // namespace errgen
