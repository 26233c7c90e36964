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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "errgen/errorgen.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/parallel.hpp"
#include "errgen/propagate.hpp"
#include "errgen/stabilizer.hpp"

namespace errgen {

/// Omega = Omega_1 (+ Omega_2): the approximate log of the end-of-circuit
/// error channel.
struct CircuitErrorGenerator {
  SparseGenerator generator;
  int bch_order = 1;

  std::size_t num_terms() const { return generator.size(); }
  double total_rate() const {
    double t = 0.0;
    for (const auto& [k, r] : generator.map()) t += std::abs(r);
    return t;
  }
  /// The expansion is only meaningful for small total error.
  bool perturbative() const { return total_rate() <= 0.1; }
};

/// k=1: plain sum of the propagated layers. k=2: adds
/// 1/2 sum_{i>j} [Theta_i, Theta_j], later layers on the left, matching the
/// product E'_d ... E'_1.
inline CircuitErrorGenerator bch_combine(const PropagatedLayers& layers, int k,
                                         double prune_tol = 1e-14) {
  if (k != 1 && k != 2) throw std::invalid_argument("BCH order must be 1 or 2");
  const std::size_t n = layers.psi.num_qubits();
  CircuitErrorGenerator out{SparseGenerator(n), k};
  SparseGenerator prefix(n);
  SparseGenerator second(n);
  for (const auto& theta : layers.layers) {
    if (k == 2 && !prefix.empty() && !theta.empty()) {
      second += commutator(theta, prefix, prune_tol).scaled(0.5);
    }
    prefix += theta;
  }
  out.generator = std::move(prefix);
  if (k == 2) out.generator += second;
  out.generator.prune(prune_tol);
  return out;
}

/// Propagate and combine in one call. For k=1 the layers are streamed into
/// the sum without being stored.
inline std::pair<CircuitErrorGenerator, StabilizerState> circuit_error_generator(
    const Circuit& c, const NoiseModel& model, const std::map<std::string, double>& bindings, int k,
    double prune_tol = 1e-14) {
  if (k == 2) {
    auto layers = propagate(c, model, bindings);
    auto gen = bch_combine(layers, 2, prune_tol);
    return {std::move(gen), std::move(layers.psi)};
  }
  if (k != 1) throw std::invalid_argument("BCH order must be 1 or 2");
  if (c.layers.empty()) throw std::invalid_argument("circuit depth must be at least 1");
  const auto values = model.resolve(bindings);
  SparseGenerator sum(c.num_qubits);
  CliffordFrame frame = propagate_stream<double>(
      c, model, [&](const RateSpec& r) { return model.evaluate(r, values); },
      [&](std::size_t, SparseGenerator&& g) { sum += g; });
  sum.prune(prune_tol);
  return {CircuitErrorGenerator{std::move(sum), 1}, StabilizerState::from_tableau(frame.to_tableau())};
}

// ---------------------------------------------------------------------------
// Coefficient arithmetic used by the observable engine. A rate becomes a
// complex coefficient once multiplied into a sandwich term; second-order
// sums accumulate products of two coefficients.

template <class Rate>
struct CoefTraits;

template <>
struct CoefTraits<double> {
  using Coef = Complex;
  using Acc = Complex;
  static Coef make(const double& r, Complex c) { return c * r; }
  static Coef zero_like(const Coef&) { return {}; }
  static void axpy(Coef& y, Complex s, const Coef& x) { y += s * x; }
  static bool is_zero(const Coef& c) { return c == Complex{}; }
  static Acc acc_zero(const Coef&) { return {}; }
  static void outer(Acc& acc, const Coef& a, const Coef& b) { acc += a * b; }
  static void acc_add(Acc& acc, const Acc& x, double s) { acc += s * x; }
};

struct WordsHash {
  std::size_t operator()(const Words& w) const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (auto v : w) {
      h ^= v;
      h *= 0x100000001B3ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Evaluates observables of exp(Omega)[|psi><psi|] to first and second
/// Taylor order.
///
/// Second order uses the first-order image Omega[|psi><psi|] collected in a
/// coset basis: sandwich entries L rho R with the same pair of stabilizer
/// syndromes map |psi><psi| to the same operator up to a phase, so they are
/// merged into one group. The second application of Omega is then joined
/// against the groups with hash lookups instead of a double loop.
template <class Rate>
class ObservableEngine {
 public:
  using Traits = CoefTraits<Rate>;
  using Coef = typename Traits::Coef;
  using Acc = typename Traits::Acc;

  ObservableEngine(const GeneratorT<Rate>& gen, const StabilizerState& psi, const Rate& zero = Rate{})
      : gen_(&gen), psi_(&psi), zero_(zero) {
    if (gen.num_qubits() != 0 && gen.num_qubits() != psi.num_qubits()) {
      throw std::invalid_argument("generator and state sizes differ");
    }
  }

  const StabilizerState& state() const { return *psi_; }

  /// Noise-free probability of x.
  double zeroth_probability(const BitString& x) const {
    return psi_->in_support(x) ? std::ldexp(1.0, -static_cast<int>(psi_->zeta())) : 0.0;
  }
  double zeroth_expectation(const PauliString& p) const {
    return psi_->signed_pauli_expectation(p).real();
  }

  /// 2^-zeta sum_G alpha(psi, G, x) rate_G.
  Rate first_order_probability(const BitString& x) const {
    Rate acc = zero_;
    const double scale = std::ldexp(1.0, -static_cast<int>(psi_->zeta()));
    for (const auto& [k, r] : sorted()) {
      const double a = alpha(*psi_, k, x);
      if (a != 0.0) acc = acc + r * (a * scale);
    }
    return acc;
  }

  /// sum_G beta(psi, G, P) rate_G.
  Rate first_order_expectation(const PauliString& p) const {
    Rate acc = zero_;
    for (const auto& [k, r] : sorted()) {
      const double b = beta(*psi_, k, p);
      if (b != 0.0) acc = acc + r * b;
    }
    return acc;
  }

  /// Tr(|x><x| Omega^2[|psi><psi|]) (without the 1/2).
  Acc second_order_probability(const BitString& x) const {
    build_groups();
    const std::size_t n = psi_->num_qubits();
    if (x.size() != n) throw std::invalid_argument("bitstring length mismatch");
    const Words xw = pack_bits(x);
    Words shift = pack_bits(psi_->support_point());
    for (std::size_t w = 0; w < shift.size(); ++w) shift[w] ^= xw[w];
    psi_->reduce_x(shift.data());
    const double scale = std::ldexp(1.0, -static_cast<int>(psi_->zeta()));
    Acc acc = Traits::acc_zero(entries_.empty() ? Coef{} : entries_[0].c);
    Words key(2 * shift.size());
    for (const auto& e : entries_) {
      const std::size_t nw = shift.size();
      for (std::size_t w = 0; w < nw; ++w) {
        key[w] = e.xl[w] ^ shift[w];
        key[nw + w] = e.xr[w] ^ shift[w];
      }
      auto it = by_xred_.find(key);
      if (it == by_xred_.end()) continue;
      Coef tmp = Traits::zero_like(e.c);
      for (std::size_t g : it->second) {
        const Group& grp = groups_[g];
        const Complex v = psi_->phi_packed(xw.data(), e.l * grp.l, grp.r * e.r);
        if (v != Complex{}) Traits::axpy(tmp, v * scale, grp.m);
      }
      Traits::outer(acc, e.c, tmp);
    }
    return acc;
  }

  /// Tr(P Omega^2[|psi><psi|]) (without the 1/2), via the dual
  /// Y = Omega*[P] = sum_a c_a R_a P L_a.
  Acc second_order_expectation(const PauliString& p) const {
    build_groups();
    std::unordered_map<PauliString, std::size_t, PauliLettersHash, PauliLettersEqual> index;
    std::vector<std::pair<PauliString, Coef>> dual;
    for (const auto& e : entries_) {
      PauliString y = e.r * p;
      y *= e.l;
      const Complex ph = i_pow(y.phase_exp());
      y.set_phase_exp(0);
      auto [it, fresh] = index.try_emplace(y, dual.size());
      if (fresh) dual.emplace_back(y, Traits::zero_like(e.c));
      Traits::axpy(dual[it->second].second, ph, e.c);
    }
    Acc acc = Traits::acc_zero(entries_.empty() ? Coef{} : entries_[0].c);
    for (const auto& [y, yc] : dual) {
      if (Traits::is_zero(yc)) continue;
      auto it = by_syndrome_.find(psi_->syndrome(y));
      if (it == by_syndrome_.end()) continue;
      Coef tmp = Traits::zero_like(yc);
      for (std::size_t g : it->second) {
        const Group& grp = groups_[g];
        PauliString prod = grp.r * y;
        prod *= grp.l;
        const int k = psi_->expectation_exponent(prod);
        if (k >= 0) Traits::axpy(tmp, i_pow(k), grp.m);
      }
      Traits::outer(acc, yc, tmp);
    }
    return acc;
  }

 private:
  struct Entry {
    PauliString l, r;
    Coef c;
    Words xl, xr;  // X parts reduced modulo the state's X span
  };
  struct Group {
    PauliString l, r;
    Coef m;
  };

  const std::vector<std::pair<TermKey, Rate>>& sorted() const {
    if (!sorted_built_) {
      sorted_ = gen_->sorted_terms();
      sorted_built_ = true;
    }
    return sorted_;
  }

  Words reduced_x(const PauliString& p) const {
    Words w(p.xs().begin(), p.xs().end());
    psi_->reduce_x(w.data());
    return w;
  }

  void build_groups() const {
    if (groups_built_) return;
    groups_built_ = true;
    // Sandwich entries with phases folded, merged by (L, R).
    std::unordered_map<SandwichOperator::Key, std::size_t, PauliPairHash, PauliPairEqual> at;
    for (const auto& [k, r] : sorted()) {
      for_each_sandwich(k, [&](Complex c, const PauliString& l, const PauliString& rr) {
        const Complex ph = c * i_pow(l.phase_exp() + rr.phase_exp());
        SandwichOperator::Key key{l.unsigned_part(), rr.unsigned_part()};
        auto [it, fresh] = at.try_emplace(key, entries_.size());
        if (fresh) {
          entries_.push_back(Entry{key.first, key.second, Traits::make(r, ph), {}, {}});
        } else {
          Traits::axpy(entries_[it->second].c, 1.0, Traits::make(r, ph));
        }
      });
    }
    std::unordered_map<Words, std::size_t, WordsHash> group_at;
    for (auto& e : entries_) {
      e.xl = reduced_x(e.l);
      e.xr = reduced_x(e.r);
      const Words sl = psi_->syndrome(e.l), sr = psi_->syndrome(e.r);
      Words key(sl);
      key.insert(key.end(), sr.begin(), sr.end());
      auto [it, fresh] = group_at.try_emplace(std::move(key), groups_.size());
      if (fresh) {
        groups_.push_back(Group{e.l, e.r, e.c});
        Words s(sl);
        for (std::size_t w = 0; w < s.size(); ++w) s[w] ^= sr[w];
        by_syndrome_[s].push_back(groups_.size() - 1);
        Words xk(e.xl);
        xk.insert(xk.end(), e.xr.begin(), e.xr.end());
        by_xred_[xk].push_back(groups_.size() - 1);
        continue;
      }
      Group& g = groups_[it->second];
      // L_e|psi> = <L_g L_e> L_g|psi> and <psi|R_e = <R_e R_g> <psi|R_g.
      const int kl = psi_->expectation_exponent(g.l * e.l);
      const int kr = psi_->expectation_exponent(e.r * g.r);
      if (kl < 0 || kr < 0) throw std::logic_error("coset representative mismatch");
      Traits::axpy(g.m, i_pow(kl + kr), e.c);
    }
  }

  const GeneratorT<Rate>* gen_;
  const StabilizerState* psi_;
  Rate zero_;
  mutable bool sorted_built_ = false;
  mutable std::vector<std::pair<TermKey, Rate>> sorted_;
  mutable bool groups_built_ = false;
  mutable std::vector<Entry> entries_;
  mutable std::vector<Group> groups_;
  mutable std::unordered_map<Words, std::vector<std::size_t>, WordsHash> by_syndrome_;
  mutable std::unordered_map<Words, std::vector<std::size_t>, WordsHash> by_xred_;
};

/// A perturbative probability, clamped to [0, 1]; `raw` keeps the
/// unclamped value.
struct ProbabilityEstimate {
  double value = 0.0;
  double raw = 0.0;
};

inline void check_taylor_order(int l) {
  if (l != 1 && l != 2) throw std::invalid_argument("Taylor order must be 1 or 2");
}

/// Numeric observables of one circuit error generator and output state.
/// Holds references: both arguments must outlive the evaluator.
class Evaluator {
 public:
  Evaluator(const CircuitErrorGenerator& gen, const StabilizerState& psi)
      : engine_(gen.generator, psi) {}
  Evaluator(CircuitErrorGenerator&&, const StabilizerState&) = delete;
  Evaluator(const CircuitErrorGenerator&, StabilizerState&&) = delete;

  ProbabilityEstimate probability(const BitString& x, int l) const {
    check_taylor_order(l);
    double p = engine_.zeroth_probability(x) + engine_.first_order_probability(x);
    if (l == 2) p += 0.5 * engine_.second_order_probability(x).real();
    return {std::clamp(p, 0.0, 1.0), p};
  }

  double expectation(const PauliString& p, int l) const {
    check_taylor_order(l);
    if (!p.is_hermitian()) throw std::invalid_argument("observable must be Hermitian");
    double v = engine_.zeroth_expectation(p) + engine_.first_order_expectation(p);
    if (l == 2) v += 0.5 * engine_.second_order_expectation(p).real();
    return v;
  }

  /// Probability that a bit with a definite noise-free value reads the
  /// other value: (1 - s <Z_b>) / 2 with s the noise-free <Z_b>.
  double flip_probability(std::size_t bit, int l) const {
    const std::size_t n = engine_.state().num_qubits();
    const PauliString z = PauliString::single(n, bit, 'Z');
    const double s = engine_.zeroth_expectation(z);
    if (std::abs(s) != 1.0) {
      throw std::invalid_argument("bit " + std::to_string(bit) + " has no definite noise-free value");
    }
    return 0.5 * (1.0 - s * expectation(z, l));
  }

  /// omega = sum_b |p_flip(b)|.
  double expected_flips(const std::vector<std::uint32_t>& bits, int l,
                        std::size_t threads = 1) const {
    std::vector<double> per(bits.size());
    // Build shared caches once before fanning out.
    if (!bits.empty()) per[0] = std::abs(flip_probability(bits[0], l));
    parallel_for(bits.size() > 1 ? bits.size() - 1 : 0, threads,
                 [&](std::size_t i) { per[i + 1] = std::abs(flip_probability(bits[i + 1], l)); });
    double total = 0.0;
    for (double v : per) total += v;
    return total;
  }

 private:
  ObservableEngine<double> engine_;
};

inline ProbabilityEstimate probability(const CircuitErrorGenerator& gen, const StabilizerState& psi,
                                       const BitString& x, int l) {
  return Evaluator(gen, psi).probability(x, l);
}

inline double pauli_expectation(const CircuitErrorGenerator& gen, const StabilizerState& psi,
                                const PauliString& p, int l) {
  return Evaluator(gen, psi).expectation(p, l);
}

inline double expected_flips(const CircuitErrorGenerator& gen, const StabilizerState& psi,
                             const std::vector<std::uint32_t>& bits, int l = 2) {
  return Evaluator(gen, psi).expected_flips(bits, l);
}

/// eps_inf,1 = sum of S rates + sum of squared H rates. C and A terms do
/// not enter at this order.
inline double process_infidelity(const SparseGenerator& gen) {
  double acc = 0.0;
  for (const auto& [k, r] : gen.sorted_terms()) {
    if (k.kind == Kind::S) acc += r;
    if (k.kind == Kind::H) acc += r * r;
  }
  return acc;
}
inline double process_infidelity(const CircuitErrorGenerator& gen) {
  return process_infidelity(gen.generator);
}

/// Effective stochastic weight on each qubit: S rates plus squared H rates
/// of the terms whose Pauli acts on that qubit.
inline std::vector<double> marginal_error_probabilities(const SparseGenerator& gen) {
  std::vector<double> out(gen.num_qubits(), 0.0);
  for (const auto& [k, r] : gen.sorted_terms()) {
    if (k.kind != Kind::S && k.kind != Kind::H) continue;
    const double w = k.kind == Kind::S ? r : r * r;
    for (auto q : k.p.support()) out[q] += w;
  }
  return out;
}

inline double marginal_error_probability(const SparseGenerator& gen, std::size_t q) {
  if (q >= gen.num_qubits()) throw std::out_of_range("qubit out of range");
  return marginal_error_probabilities(gen)[q];
}

/// chi = x_coh / x_stoc; empty when x_stoc is numerically zero.
inline std::optional<double> coherent_amplification(double x_coh, double x_stoc) {
  if (std::abs(x_stoc) < 1e-300) return std::nullopt;
  return x_coh / x_stoc;
}

}  // namespace errgen
