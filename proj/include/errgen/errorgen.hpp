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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errgen/clifford.hpp"
#include "errgen/pauli.hpp"
#include "errgen/stabilizer.hpp"

namespace errgen {

/// Hamiltonian, stochastic, correlated and active error generators.
enum class Kind : std::uint8_t { H = 0, S = 1, C = 2, A = 3 };

inline char kind_char(Kind k) { return "HSCA"[static_cast<int>(k)]; }
inline Kind kind_from_char(char c) {
  switch (c) {
    case 'H': return Kind::H;
    case 'S': return Kind::S;
    case 'C': return Kind::C;
    case 'A': return Kind::A;
    default: throw std::invalid_argument(std::string("unknown error generator kind '") + c + "'");
  }
}
inline bool is_pair_kind(Kind k) { return k == Kind::C || k == Kind::A; }

/// Canonical EEG index. For H and S the second Pauli is stored empty.
struct TermKey {
  Kind kind = Kind::H;
  PauliString p;
  PauliString q;

  const PauliString& second() const { return is_pair_kind(kind) ? q : p; }

  friend bool operator==(const TermKey& a, const TermKey& b) {
    return a.kind == b.kind && a.p.same_letters(b.p) && a.q.same_letters(b.q);
  }

  std::string str() const {
    std::string s(1, kind_char(kind));
    s += "_" + p.str().substr(1);
    if (is_pair_kind(kind)) s += "," + q.str().substr(1);
    return s;
  }
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const {
    std::size_t h = k.p.hash_letters() * 31u + static_cast<std::size_t>(k.kind);
    if (is_pair_kind(k.kind)) h ^= k.q.hash_letters() + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return h;
  }
};

/// Canonical order: kind, then P, then Q.
inline bool term_key_less(const TermKey& a, const TermKey& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (int c = compare_letters(a.p, b.p); c != 0) return c < 0;
  if (is_pair_kind(a.kind)) return compare_letters(a.q, b.q) < 0;
  return false;
}

/// Builds the canonical key for (kind, P, Q), stripping phases. Returns the
/// sign picked up by the rate (-1 when an A index pair is swapped).
inline std::pair<TermKey, double> canonical_key(Kind kind, const PauliString& p,
                                                const PauliString& q) {
  TermKey key{kind, p.unsigned_part(), {}};
  if (key.p.is_identity()) throw std::invalid_argument("error generator Pauli must not be identity");
  if (!is_pair_kind(kind)) return {std::move(key), 1.0};
  detail::require_same_size(p, q);
  key.q = q.unsigned_part();
  if (key.q.is_identity()) throw std::invalid_argument("error generator Pauli must not be identity");
  const int c = compare_letters(key.p, key.q);
  if (c == 0) throw std::invalid_argument("C/A generators need two distinct Paulis");
  if (c > 0) {
    std::swap(key.p, key.q);
    return {std::move(key), kind == Kind::A ? -1.0 : 1.0};
  }
  return {std::move(key), 1.0};
}

inline TermKey make_key(Kind kind, const PauliString& p) { return canonical_key(kind, p, p).first; }
inline TermKey make_key(Kind kind, const PauliString& p, const PauliString& q) {
  return canonical_key(kind, p, q).first;
}

inline bool is_negligible(double r, double tol) { return std::abs(r) <= tol; }

/// Sparse linear combination of EEGs: the Lindbladian sum_G rate_G G.
/// `Rate` is double for numeric work or a linear form over named
/// parameters for symbolic propagation.
template <class Rate>
class GeneratorT {
 public:
  using Map = std::unordered_map<TermKey, Rate, TermKeyHash>;

  GeneratorT() = default;
  explicit GeneratorT(std::size_t n) : n_(n) {}

  std::size_t num_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Map& map() const { return terms_; }
  void reserve(std::size_t k) { terms_.reserve(k); }

  /// Adds `rate` to (kind, P, Q); an A pair given out of order contributes
  /// with flipped sign.
  void add(Kind kind, const PauliString& p, const PauliString& q, const Rate& rate) {
    auto [key, sign] = canonical_key(kind, p, q);
    add_key(std::move(key), sign < 0 ? rate * -1.0 : rate);
  }
  void add(Kind kind, const PauliString& p, const Rate& rate) { add(kind, p, p, rate); }

  void add_key(TermKey key, const Rate& rate) {
    check_size(key.p);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), rate);
    } else {
      it->second = it->second + rate;
    }
  }

  /// Rate of a term, or `zero` when absent.
  Rate get(const TermKey& key, const Rate& zero = Rate{}) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? zero : it->second;
  }

  GeneratorT& operator+=(const GeneratorT& other) {
    if (n_ == 0) n_ = other.n_;
    for (const auto& [k, r] : other.terms_) add_key(k, r);
    return *this;
  }

  GeneratorT scaled(double s) const {
    GeneratorT out(n_);
    out.terms_.reserve(terms_.size());
    for (const auto& [k, r] : terms_) out.terms_.emplace(k, r * s);
    return out;
  }

  /// Drops entries whose rate is within `tol` of zero.
  void prune(double tol = 1e-14) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (is_negligible(it->second, tol)) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  /// Terms in canonical order, for deterministic output and reductions.
  std::vector<std::pair<TermKey, Rate>> sorted_terms() const {
    std::vector<std::pair<TermKey, Rate>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return term_key_less(a.first, b.first); });
    return out;
  }

 private:
  void check_size(const PauliString& p) {
    if (n_ == 0) n_ = p.num_qubits();
    if (p.num_qubits() != n_) throw std::invalid_argument("term size does not match generator");
  }

  std::size_t n_ = 0;
  Map terms_;
};

using SparseGenerator = GeneratorT<double>;

/// Generator equality up to `tol` per rate (absent terms count as zero).
inline bool approx_equal(const SparseGenerator& a, const SparseGenerator& b, double tol) {
  for (const auto& [k, r] : a.map()) {
    if (std::abs(r - b.get(k)) > tol) return false;
  }
  for (const auto& [k, r] : b.map()) {
    if (std::abs(r - a.get(k)) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sandwich normal form.

struct PauliPairHash {
  std::size_t operator()(const std::pair<PauliString, PauliString>& k) const {
    return k.first.hash_letters() * 1000003u ^ k.second.hash_letters();
  }
};
struct PauliPairEqual {
  bool operator()(const std::pair<PauliString, PauliString>& a,
                  const std::pair<PauliString, PauliString>& b) const {
    return a.first.same_letters(b.first) && a.second.same_letters(b.second);
  }
};

/// rho -> sum coeff * L rho R with unsigned L, R; phases live in coeff.
class SandwichOperator {
 public:
  using Key = std::pair<PauliString, PauliString>;
  using Map = std::unordered_map<Key, Complex, PauliPairHash, PauliPairEqual>;

  SandwichOperator() = default;
  explicit SandwichOperator(std::size_t n) : n_(n) {}

  std::size_t num_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const Map& map() const { return terms_; }

  /// Adds coeff * L rho R for signed L, R.
  void add(Complex coeff, const PauliString& l, const PauliString& r) {
    if (n_ == 0) n_ = l.num_qubits();
    if (l.num_qubits() != n_ || r.num_qubits() != n_) {
      throw std::invalid_argument("sandwich term size mismatch");
    }
    coeff *= i_pow(l.phase_exp() + r.phase_exp());
    Key key{l.unsigned_part(), r.unsigned_part()};
    auto [it, fresh] = terms_.try_emplace(std::move(key), coeff);
    if (!fresh) it->second += coeff;
  }

  Complex get(const PauliString& l, const PauliString& r) const {
    auto it = terms_.find(Key{l.unsigned_part(), r.unsigned_part()});
    return it == terms_.end() ? Complex{} : it->second;
  }

  SandwichOperator& operator+=(const SandwichOperator& o) {
    for (const auto& [k, c] : o.terms_) add(c, k.first, k.second);
    return *this;
  }
  SandwichOperator& operator-=(const SandwichOperator& o) {
    for (const auto& [k, c] : o.terms_) add(-c, k.first, k.second);
    return *this;
  }

  void prune(double tol = 1e-14) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) <= tol) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  /// Entries sorted by (L, R) in canonical Pauli order.
  std::vector<std::pair<Key, Complex>> sorted_terms() const {
    std::vector<std::pair<Key, Complex>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (int c = compare_letters(a.first.first, b.first.first); c != 0) return c < 0;
      return compare_letters(a.first.second, b.first.second) < 0;
    });
    return out;
  }

 private:
  std::size_t n_ = 0;
  Map terms_;
};

/// first o second: rho -> first(second(rho)).
inline SandwichOperator compose(const SandwichOperator& first, const SandwichOperator& second) {
  SandwichOperator out(first.num_qubits());
  for (const auto& [ka, ca] : first.map()) {
    for (const auto& [kb, cb] : second.map()) {
      out.add(ca * cb, ka.first * kb.first, kb.second * ka.second);
    }
  }
  return out;
}

/// Calls fn(coeff, L, R) for each entry of the sandwich expansion of the
/// unit-rate EEG; L and R may carry phases.
template <class Fn>
void for_each_sandwich(const TermKey& key, Fn&& fn) {
  const PauliString& p = key.p;
  const PauliString id(p.num_qubits());
  const Complex I1{0.0, 1.0};
  switch (key.kind) {
    case Kind::H:
      fn(-I1, p, id);
      fn(I1, id, p);
      return;
    case Kind::S:
      fn(Complex{1.0}, p, p);
      fn(Complex{-1.0}, id, id);
      return;
    case Kind::C: {
      const PauliString& q = key.q;
      fn(Complex{1.0}, p, q);
      fn(Complex{1.0}, q, p);
      if (commutes(p, q)) {
        const PauliString m = p * q;
        fn(Complex{-1.0}, m, id);
        fn(Complex{-1.0}, id, m);
      }
      return;
    }
    case Kind::A: {
      const PauliString& q = key.q;
      fn(I1, p, q);
      fn(-I1, q, p);
      if (!commutes(p, q)) {
        const PauliString m = p * q;
        fn(I1, m, id);
        fn(I1, id, m);
      }
      return;
    }
  }
}

/// Appends the sandwich expansion of rate * G(kind, P, Q) to `out`.
inline void append_sandwich(SandwichOperator& out, const TermKey& key, Complex rate) {
  for_each_sandwich(key, [&](Complex c, const PauliString& l, const PauliString& r) {
    out.add(c * rate, l, r);
  });
}

inline SandwichOperator eeg_to_sandwich(const TermKey& key) {
  SandwichOperator out(key.p.num_qubits());
  append_sandwich(out, key, 1.0);
  return out;
}

inline SandwichOperator generator_to_sandwich(const SparseGenerator& g) {
  SandwichOperator out(g.num_qubits());
  for (const auto& [k, r] : g.sorted_terms()) append_sandwich(out, k, r);
  out.prune(0.0);
  return out;
}

/// Projects a Hermiticity-preserving, trace-annihilating sandwich operator
/// onto the EEG basis. Throws std::domain_error if the input is not a
/// generator (non-vanishing identity residual, inconsistent H entries or
/// complex rates beyond `tol`).
inline SparseGenerator sandwich_to_generator(const SandwichOperator& s, double tol = 1e-12,
                                             double prune_tol = 1e-14) {
  const std::size_t n = s.num_qubits();
  SparseGenerator out(n);
  if (s.empty()) return out;
  double scale = 1.0;
  for (const auto& [k, c] : s.map()) scale = std::max(scale, std::abs(c));
  const double check = tol * scale;

  SandwichOperator work = s;
  const PauliString id(n);
  auto real_rate = [&](Complex z, const char* what) {
    if (std::abs(z.imag()) > check) {
      throw std::domain_error(std::string("projected ") + what + " rate has imaginary part " +
                              std::to_string(z.imag()));
    }
    return z.real();
  };

  // (i) off-diagonal pairs of non-identity Paulis -> C and A.
  for (const auto& [key, c1] : s.sorted_terms()) {
    if (key.first.is_identity() || key.second.is_identity() || key.first.same_letters(key.second)) {
      continue;
    }
    PauliString l = key.first, r = key.second;
    if (compare_letters(l, r) > 0) {
      // Visit each unordered pair once, from its canonical side if present.
      if (s.map().count(SandwichOperator::Key{r, l})) continue;
      std::swap(l, r);
    }
    const Complex a = work.get(l, r), b = work.get(r, l);
    const Complex gc = (a + b) / 2.0;
    const Complex ga = (a - b) / Complex{0.0, 2.0};
    const TermKey kc{Kind::C, l, r}, ka{Kind::A, l, r};
    const double rc = real_rate(gc, "C"), ra = real_rate(ga, "A");
    SandwichOperator sub(n);
    append_sandwich(sub, kc, gc);
    append_sandwich(sub, ka, ga);
    work -= sub;
    if (std::abs(rc) > prune_tol) out.add_key(kc, rc);
    if (std::abs(ra) > prune_tol) out.add_key(ka, ra);
  }
  // (ii) diagonal -> S.
  for (const auto& [key, c] : work.sorted_terms()) {
    const auto& [l, r] = key;
    if (l.is_identity() || !l.same_letters(r)) continue;
    const double rs = real_rate(c, "S");
    SandwichOperator sub(n);
    append_sandwich(sub, TermKey{Kind::S, l, {}}, rs);
    work -= sub;
    if (std::abs(rs) > prune_tol) out.add_key(TermKey{Kind::S, l, {}}, rs);
  }
  // (iii) (P, I) and (I, P) -> H.
  for (const auto& [key, c] : work.sorted_terms()) {
    const auto& [l, r] = key;
    if (l.is_identity() && !r.is_identity()) {
      if (std::abs(work.get(r, id)) == 0.0 && std::abs(c) > check) {
        throw std::domain_error("inconsistent H coefficients for " + r.str());
      }
      continue;
    }
    if (l.is_identity() || !r.is_identity()) {
      if (!l.is_identity() && std::abs(c) > check) {
        throw std::domain_error("unprojected sandwich entry " + l.str() + " * " + r.str());
      }
      continue;
    }
    const Complex c_pi = c, c_ip = work.get(id, l);
    if (std::abs(c_ip + c_pi) > check) throw std::domain_error("inconsistent H coefficients for " + l.str());
    const double rh = real_rate(Complex{0.0, 1.0} * c_pi, "H");
    if (std::abs(rh) > prune_tol) out.add_key(TermKey{Kind::H, l, {}}, rh);
  }
  // (iv) identity residual.
  if (std::abs(work.get(id, id)) > check) {
    throw std::domain_error("sandwich operator is not trace-annihilating (residual " +
                            std::to_string(std::abs(work.get(id, id))) + ")");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clifford conjugation.

/// Maps every term through a signed Pauli map f (P -> +-P'), applying the
/// gamma factors: S unchanged, H by s_P, C and A by s_P s_Q.
template <class Rate, class PauliMap>
GeneratorT<Rate> map_generator(const GeneratorT<Rate>& g, const PauliMap& f) {
  GeneratorT<Rate> out(g.num_qubits());
  out.reserve(g.size());
  for (const auto& [k, r] : g.map()) {
    PauliString p = f(k.p);
    const int sp = p.phase_exp();
    if (!is_pair_kind(k.kind)) {
      const double gamma = (k.kind == Kind::H && sp == 2) ? -1.0 : 1.0;
      p.set_phase_exp(0);
      out.add_key(TermKey{k.kind, std::move(p), {}}, r * gamma);
      continue;
    }
    PauliString q = f(k.q);
    const double gamma = ((sp + q.phase_exp()) % 4 == 2) ? -1.0 : 1.0;
    out.add(k.kind, p.unsigned_part(), q.unsigned_part(), r * gamma);
  }
  return out;
}

/// U^dagger G U term by term (the inverse conjugation, P -> s_{U,P} P_U).
template <class Rate>
GeneratorT<Rate> conjugate_generator(const GeneratorT<Rate>& g, const CliffordTableau& t) {
  if (g.num_qubits() != 0 && g.num_qubits() != t.num_qubits()) {
    throw std::invalid_argument("generator and tableau sizes differ");
  }
  return map_generator(g, [&](const PauliString& p) { return t.conjugate_inverse(p); });
}

/// U G U^dagger term by term: moves an error that happened before U to
/// after it.
template <class Rate>
GeneratorT<Rate> conjugate_generator_forward(const GeneratorT<Rate>& g, const CliffordTableau& t) {
  if (g.num_qubits() != 0 && g.num_qubits() != t.num_qubits()) {
    throw std::invalid_argument("generator and tableau sizes differ");
  }
  return map_generator(g, [&](const PauliString& p) { return t.conjugate(p); });
}

// ---------------------------------------------------------------------------
// Products and commutators.

/// Sandwich form of g1 o g2 (g2 acts first).
inline SandwichOperator product(const SparseGenerator& g1, const SparseGenerator& g2) {
  auto out = compose(generator_to_sandwich(g1), generator_to_sandwich(g2));
  out.prune(0.0);
  return out;
}

namespace detail {
inline void term_paulis(const TermKey& k, std::vector<const PauliString*>& out) {
  out.clear();
  out.push_back(&k.p);
  if (is_pair_kind(k.kind)) out.push_back(&k.q);
}
}  // namespace detail

/// [g1, g2] = g1 g2 - g2 g1, computed by composing sandwich forms and
/// projecting. Term pairs whose Paulis all commute are skipped (their
/// sandwich terms commute entry by entry).
inline SparseGenerator commutator(const SparseGenerator& g1, const SparseGenerator& g2,
                                  double prune_tol = 1e-14) {
  const std::size_t n = std::max(g1.num_qubits(), g2.num_qubits());
  SandwichOperator acc(n);
  std::vector<const PauliString*> pa, pb;
  const auto t1 = g1.sorted_terms();
  const auto t2 = g2.sorted_terms();
  for (const auto& [ka, ra] : t1) {
    detail::term_paulis(ka, pa);
    const SandwichOperator sa = [&] {
      SandwichOperator s(n);
      append_sandwich(s, ka, ra);
      return s;
    }();
    for (const auto& [kb, rb] : t2) {
      detail::term_paulis(kb, pb);
      bool all_commute = true;
      for (auto* x : pa) {
        for (auto* y : pb) all_commute = all_commute && commutes(*x, *y);
      }
      if (all_commute) continue;
      SandwichOperator sb(n);
      append_sandwich(sb, kb, rb);
      acc += compose(sa, sb);
      acc -= compose(sb, sa);
    }
  }
  acc.prune(0.0);
  return sandwich_to_generator(acc, 1e-12, prune_tol);
}

// ---------------------------------------------------------------------------
// First-order observable coefficients.

/// 2^zeta Tr(|x><x| G[|psi><psi|]) for a unit-rate EEG.
inline double alpha(const StabilizerState& psi, const TermKey& t, const BitString& x) {
  if (t.p.num_qubits() != psi.num_qubits()) throw std::invalid_argument("term size mismatch");
  if (x.size() != psi.num_qubits()) throw std::invalid_argument("bitstring length mismatch");
  const Words xw = pack_bits(x);
  const PauliString id(psi.num_qubits());
  auto phi = [&](const PauliString& l, const PauliString& r) { return psi.phi_packed(xw.data(), l, r); };
  switch (t.kind) {
    case Kind::S: return (phi(t.p, t.p) - phi(id, id)).real();
    case Kind::H: return 2.0 * phi(t.p, id).imag();
    case Kind::C: {
      const PauliString pq = t.p * t.q, qp = t.q * t.p;
      return 2.0 * phi(t.p, t.q).real() - (phi(pq, id) + phi(qp, id)).real();
    }
    case Kind::A: {
      const PauliString pq = t.p * t.q, qp = t.q * t.p;
      return 2.0 * phi(t.q, t.p).imag() + (phi(qp, id) - phi(pq, id)).imag();
    }
  }
  return 0.0;
}

/// Tr(P G[|psi><psi|]) for a unit-rate EEG and Hermitian P.
inline double beta(const StabilizerState& psi, const TermKey& t, const PauliString& p) {
  if (t.p.num_qubits() != psi.num_qubits() || p.num_qubits() != psi.num_qubits()) {
    throw std::invalid_argument("size mismatch");
  }
  switch (t.kind) {
    case Kind::S:
      // <QPQ> - <P> = -2<P> when they anticommute.
      return commutes(p, t.p) ? 0.0 : -2.0 * psi.signed_pauli_expectation(p).real();
    case Kind::H:
      // -i<[P,Q]> = -2i<PQ> when they anticommute.
      return commutes(p, t.p) ? 0.0
                              : (Complex{0.0, -2.0} * psi.signed_pauli_expectation(p * t.p)).real();
    default: {
      SandwichOperator s(p.num_qubits());
      append_sandwich(s, t, 1.0);
      Complex acc = 0.0;
      for (const auto& [k, c] : s.sorted_terms()) {
        acc += c * psi.signed_pauli_expectation(k.second * p * k.first);
      }
      return acc.real();
    }
  }
}

}  // namespace errgen
