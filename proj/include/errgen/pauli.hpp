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

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace errgen {

using Complex = std::complex<double>;

/// i^k for k mod 4.
inline Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// An n-qubit Pauli operator i^phase_exp * (P_0 (x) P_1 (x) ... ), stored as
/// packed X and Z bit vectors. Qubit q is Y iff both bits are set.
///
/// The text form is an optional sign prefix ("+", "-", "+i", "-i", "i")
/// followed by one character per qubit from {I,X,Y,Z}; qubit 0 is leftmost.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t num_qubits)
      : n_(num_qubits), words_(word_count(num_qubits)), bits_(2 * words_, 0) {}

  static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

  static PauliString parse(std::string_view text);
  std::string str() const;

  /// Single-qubit Pauli embedded at `qubit` ('I','X','Y','Z').
  static PauliString single(std::size_t n, std::size_t qubit, char p) {
    PauliString out(n);
    out.set(qubit, p);
    return out;
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t num_words() const { return words_; }
  int phase_exp() const { return phase_; }
  void set_phase_exp(int k) { phase_ = static_cast<std::uint8_t>(((k % 4) + 4) % 4); }
  void add_phase_exp(int k) { set_phase_exp(phase_ + k); }
  Complex phase() const { return i_pow(phase_); }

  bool x(std::size_t q) const { return (bits_[q >> 6] >> (q & 63)) & 1u; }
  bool z(std::size_t q) const { return (bits_[words_ + (q >> 6)] >> (q & 63)) & 1u; }
  void set_x(std::size_t q, bool v) { set_bit(bits_[q >> 6], q, v); }
  void set_z(std::size_t q, bool v) { set_bit(bits_[words_ + (q >> 6)], q, v); }

  /// The Pauli letter on a qubit, ignoring the global phase.
  char at(std::size_t q) const {
    const bool xb = x(q), zb = z(q);
    return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  void set(std::size_t q, char p);

  std::span<std::uint64_t> xs() { return {bits_.data(), words_}; }
  std::span<std::uint64_t> zs() { return {bits_.data() + words_, words_}; }
  std::span<const std::uint64_t> xs() const { return {bits_.data(), words_}; }
  std::span<const std::uint64_t> zs() const { return {bits_.data() + words_, words_}; }

  bool is_identity() const {
    for (auto w : bits_) {
      if (w) return false;
    }
    return true;
  }
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < words_; ++i) w += std::popcount(bits_[i] | bits_[words_ + i]);
    return w;
  }
  bool is_hermitian() const { return (phase_ & 1u) == 0; }

  /// Copy with the phase stripped; the map key for every EEG index.
  PauliString unsigned_part() const {
    PauliString out = *this;
    out.phase_ = 0;
    return out;
  }

  /// Qubit indices with a non-identity letter.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t m = bits_[w] | bits_[words_ + w];
      while (m) {
        out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(m)));
        m &= m - 1;
      }
    }
    return out;
  }

  /// In-place right multiplication: *this = *this * rhs.
  PauliString& operator*=(const PauliString& rhs);

  friend PauliString operator*(PauliString a, const PauliString& b) {
    a *= b;
    return a;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.phase_ == b.phase_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const PauliString& a, const PauliString& b) { return !(a == b); }

  /// Equality of the unsigned parts.
  bool same_letters(const PauliString& other) const {
    return n_ == other.n_ && bits_ == other.bits_;
  }

  std::size_t hash_letters() const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ n_;
    for (auto w : bits_) {
      h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ull;
      h ^= h >> 31;
    }
    return static_cast<std::size_t>(h);
  }

  const std::vector<std::uint64_t>& raw_bits() const { return bits_; }

 private:
  static void set_bit(std::uint64_t& word, std::size_t q, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (q & 63);
    word = v ? (word | m) : (word & ~m);
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;  // [x words | z words]
  std::uint8_t phase_ = 0;
};

namespace detail {
inline void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("Pauli size mismatch: " + std::to_string(a.num_qubits()) +
                                " vs " + std::to_string(b.num_qubits()));
  }
}
}  // namespace detail

inline void PauliString::set(std::size_t q, char p) {
  if (q >= n_) throw std::out_of_range("qubit index out of range");
  switch (p) {
    case 'I': set_x(q, false); set_z(q, false); break;
    case 'X': set_x(q, true); set_z(q, false); break;
    case 'Y': set_x(q, true); set_z(q, true); break;
    case 'Z': set_x(q, false); set_z(q, true); break;
    default: throw std::invalid_argument(std::string("illegal Pauli character '") + p + "'");
  }
}

// With Y = i X Z, a letter sigma(x,z) equals i^{xz} X^x Z^z, so
//   sigma(a) sigma(b) = i^{|xa&za| + |xb&zb| + 2|za&xb| - |xc&zc|} sigma(c).
inline PauliString& PauliString::operator*=(const PauliString& rhs) {
  detail::require_same_size(*this, rhs);
  int k = phase_ + rhs.phase_;
  const std::uint64_t* bx = rhs.bits_.data();
  const std::uint64_t* bz = rhs.bits_.data() + words_;
  std::uint64_t* ax = bits_.data();
  std::uint64_t* az = bits_.data() + words_;
  for (std::size_t w = 0; w < words_; ++w) {
    const std::uint64_t cx = ax[w] ^ bx[w];
    const std::uint64_t cz = az[w] ^ bz[w];
    k += std::popcount(ax[w] & az[w]) + std::popcount(bx[w] & bz[w]) +
         2 * std::popcount(az[w] & bx[w]) - std::popcount(cx & cz);
    ax[w] = cx;
    az[w] = cz;
  }
  set_phase_exp(k);
  return *this;
}

/// True iff the operators commute (symplectic product is even).
inline bool commutes(const PauliString& a, const PauliString& b) {
  detail::require_same_size(a, b);
  const auto ax = a.xs(), az = a.zs(), bx = b.xs(), bz = b.zs();
  int parity = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) {
    parity ^= std::popcount((ax[w] & bz[w]) ^ (az[w] & bx[w])) & 1;
  }
  return parity == 0;
}

inline PauliString PauliString::parse(std::string_view text) {
  int k = 0;
  if (text.starts_with("+i")) {
    k = 1;
    text.remove_prefix(2);
  } else if (text.starts_with("-i")) {
    k = 3;
    text.remove_prefix(2);
  } else if (text.starts_with("i")) {
    k = 1;
    text.remove_prefix(1);
  } else if (text.starts_with("+")) {
    text.remove_prefix(1);
  } else if (text.starts_with("-")) {
    k = 2;
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("empty Pauli string");
  PauliString out(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) out.set(q, text[q]);
  out.set_phase_exp(k);
  return out;
}

inline std::string PauliString::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  std::string out = kPrefix[phase_];
  out.reserve(n_ + 2);
  for (std::size_t q = 0; q < n_; ++q) out.push_back(at(q));
  return out;
}

/// Letter rank in the canonical order I < X < Y < Z.
inline int letter_rank(bool x, bool z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); }

/// Total order on unsigned Paulis: the string read as a base-4 integer with
/// qubit 0 most significant. Returns <0, 0, >0. Phases are ignored.
inline int compare_letters(const PauliString& a, const PauliString& b) {
  detail::require_same_size(a, b);
  const auto ax = a.xs(), az = a.zs(), bx = b.xs(), bz = b.zs();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    const std::uint64_t diff = (ax[w] ^ bx[w]) | (az[w] ^ bz[w]);
    if (!diff) continue;
    const auto bit = static_cast<std::size_t>(std::countr_zero(diff));
    const int ra = letter_rank((ax[w] >> bit) & 1u, (az[w] >> bit) & 1u);
    const int rb = letter_rank((bx[w] >> bit) & 1u, (bz[w] >> bit) & 1u);
    return ra - rb;
  }
  return 0;
}

struct PauliLettersHash {
  std::size_t operator()(const PauliString& p) const { return p.hash_letters(); }
};
struct PauliLettersEqual {
  bool operator()(const PauliString& a, const PauliString& b) const { return a.same_letters(b); }
};

}  // namespace errgen

template <>
struct std::hash<errgen::PauliString> {
  std::size_t operator()(const errgen::PauliString& p) const {
    return p.hash_letters() ^ static_cast<std::size_t>(p.phase_exp());
  }
};
