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

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "errgen/expand.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/propagate.hpp"

namespace errgen {

/// A rate written as a linear form over the model parameters (dense, in
/// model declaration order). An empty coefficient vector is the zero form.
struct SensitivityForm {
  std::vector<double> c;

  friend SensitivityForm operator+(const SensitivityForm& a, const SensitivityForm& b) {
    if (a.c.empty()) return b;
    if (b.c.empty()) return a;
    if (a.c.size() != b.c.size()) throw std::invalid_argument("sensitivity form size mismatch");
    SensitivityForm out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
    return out;
  }
  friend SensitivityForm operator*(const SensitivityForm& a, double s) {
    SensitivityForm out = a;
    for (auto& v : out.c) v *= s;
    return out;
  }

  double evaluate(const std::vector<double>& x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += c[i] * x.at(i);
    return acc;
  }
};

inline bool is_negligible(const SensitivityForm& f, double tol) {
  for (double v : f.c) {
    if (std::abs(v) > tol) return false;
  }
  return true;
}

template <>
struct CoefTraits<SensitivityForm> {
  using Coef = std::vector<Complex>;
  using Acc = std::vector<Complex>;  // P x P, row-major
  static Coef make(const SensitivityForm& r, Complex c) {
    Coef out(r.c.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * r.c[i];
    return out;
  }
  static Coef zero_like(const Coef& like) { return Coef(like.size()); }
  static void axpy(Coef& y, Complex s, const Coef& x) {
    if (y.empty()) y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
  }
  static bool is_zero(const Coef& c) {
    for (const auto& v : c) {
      if (v != Complex{}) return false;
    }
    return true;
  }
  static Acc acc_zero(const Coef& like) { return Acc(like.size() * like.size()); }
  static void outer(Acc& acc, const Coef& a, const Coef& b) {
    const std::size_t p = a.size();
    for (std::size_t i = 0; i < p; ++i) {
      if (a[i] == Complex{}) continue;
      for (std::size_t j = 0; j < p; ++j) acc[i * p + j] += a[i] * b[j];
    }
  }
};

/// Omega_1 with symbolic rates. When `squared` is set, every form is over
/// the squared parameters theta_P^2 (a stochastic-equivalent model).
struct SymbolicGenerator {
  std::vector<std::string> params;
  GeneratorT<SensitivityForm> generator;
  StabilizerState psi;
  bool squared = false;

  SensitivityForm zero() const { return SensitivityForm{std::vector<double>(params.size(), 0.0)}; }
};

/// Propagates the model with every rate kept as a linear form. Constant
/// rates are rejected, as are models mixing theta and theta^2 rates.
/// Only first-order BCH is supported symbolically.
inline SymbolicGenerator symbolic_circuit_generator(const Circuit& c, const NoiseModel& model,
                                                    int bch_order = 1) {
  if (bch_order != 1) {
    throw std::invalid_argument("symbolic rates support BCH order 1 only");
  }
  SymbolicGenerator out;
  for (const auto& [name, v] : model.parameters) out.params.push_back(name);
  const std::size_t p = out.params.size();
  int power = 0;
  auto rate_of = [&](const RateSpec& r) {
    if (r.is_constant()) {
      if (r.constant == 0.0) return SensitivityForm{std::vector<double>(p, 0.0)};
      throw std::invalid_argument("symbolic propagation needs parameterized rates");
    }
    if (power != 0 && power != r.power) {
      throw std::invalid_argument("symbolic model mixes theta and theta^2 rates");
    }
    power = r.power;
    SensitivityForm f{std::vector<double>(p, 0.0)};
    f.c[*model.param_index(r.param)] = r.coefficient;
    return f;
  };
  auto layers = propagate_with<SensitivityForm>(c, model, rate_of);
  out.generator = GeneratorT<SensitivityForm>(c.num_qubits);
  for (auto& g : layers.layers) out.generator += g;
  out.generator.prune(1e-14);
  out.psi = std::move(layers.psi);
  out.squared = power == 2;
  return out;
}

/// x(theta) = constant + linear . theta + theta^T S theta for the coherent
/// model, and x_stoc = sum_P v_P theta_P^2 for its stochastic equivalent.
struct QuadraticSensitivity {
  std::vector<std::string> params;
  std::vector<double> matrix;  // P x P symmetric, row-major
  std::vector<double> linear;  // first-order part in theta (zero for definite bits)
  std::vector<double> v;       // stochastic sensitivity vector

  std::size_t size() const { return params.size(); }
  double s(std::size_t i, std::size_t j) const { return matrix[i * size() + j]; }

  double evaluate(const std::vector<double>& theta) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      acc += linear.empty() ? 0.0 : linear[i] * theta[i];
      for (std::size_t j = 0; j < size(); ++j) acc += theta[i] * s(i, j) * theta[j];
    }
    return acc;
  }
  double evaluate_stochastic(const std::vector<double>& theta) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * theta[i] * theta[i];
    return acc;
  }
};

/// Observables with quadratic sensitivity.
struct FlipObservable {
  std::vector<std::uint32_t> bits;  // one bit: its flip probability; several: omega
};
struct MarginalObservable {
  std::size_t qubit = 0;
};
struct InfidelityObservable {};
using ObservableSpec = std::variant<FlipObservable, MarginalObservable, InfidelityObservable>;

namespace detail {

struct Partial {
  std::vector<double> lin;   // coefficient on theta (or theta^2 when squared)
  std::vector<double> quad;  // P x P
};

inline void add_form(std::vector<double>& acc, const SensitivityForm& f, double s) {
  for (std::size_t i = 0; i < f.c.size(); ++i) acc[i] += s * f.c[i];
}
inline void add_outer(std::vector<double>& acc, const SensitivityForm& f, double s) {
  const std::size_t p = f.c.size();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) acc[i * p + j] += s * f.c[i] * f.c[j];
  }
}

inline Partial evaluate_symbolic(const SymbolicGenerator& g, const ObservableSpec& spec, int taylor_order) {
  const std::size_t p = g.params.size();
  Partial out{std::vector<double>(p, 0.0), std::vector<double>(p * p, 0.0)};
  if (const auto* flip = std::get_if<FlipObservable>(&spec)) {
    ObservableEngine<SensitivityForm> engine(g.generator, g.psi, g.zero());
    const std::size_t n = g.psi.num_qubits();
    for (auto b : flip->bits) {
      const PauliString z = PauliString::single(n, b, 'Z');
      const double s = engine.zeroth_expectation(z);
      if (std::abs(s) != 1.0) {
        throw std::invalid_argument("bit " + std::to_string(b) + " has no definite noise-free value");
      }
      // p_flip = (1 - s <Z>) / 2 with <Z> = s + first + second / 2.
      add_form(out.lin, engine.first_order_expectation(z), -0.5 * s);
      if (taylor_order == 2) {
        const auto acc = engine.second_order_expectation(z);
        for (std::size_t i = 0; i < p * p; ++i) out.quad[i] += -0.25 * s * acc[i].real();
      }
    }
    return out;
  }
  auto touches = [&](const TermKey& k) {
    if (const auto* m = std::get_if<MarginalObservable>(&spec)) {
      if (m->qubit >= g.psi.num_qubits()) throw std::out_of_range("qubit out of range");
      return k.p.x(m->qubit) || k.p.z(m->qubit);
    }
    return true;
  };
  for (const auto& [k, f] : g.generator.sorted_terms()) {
    if (!touches(k)) continue;
    if (k.kind == Kind::S) add_form(out.lin, f, 1.0);
    if (k.kind == Kind::H) {
      if (g.squared) throw std::invalid_argument("H rates cannot be squared forms");
      add_outer(out.quad, f, 1.0);
    }
  }
  return out;
}

inline void symmetrize(std::vector<double>& m, std::size_t p) {
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double avg = 0.5 * (m[i * p + j] + m[j * p + i]);
      m[i * p + j] = m[j * p + i] = avg;
    }
  }
}

}  // namespace detail

/// S_x (and the linear part) from the coherent symbolic generator, and
/// v_x from the stochastic-equivalent one when given.
inline QuadraticSensitivity quadratic_observable(const SymbolicGenerator& coherent,
                                                 const SymbolicGenerator* stochastic,
                                                 const ObservableSpec& spec) {
  if (coherent.squared) throw std::invalid_argument("coherent generator must have linear rates");
  QuadraticSensitivity out;
  out.params = coherent.params;
  const std::size_t p = out.params.size();
  auto coh = detail::evaluate_symbolic(coherent, spec, 2);
  detail::symmetrize(coh.quad, p);
  out.matrix = std::move(coh.quad);
  out.linear = std::move(coh.lin);
  out.v.assign(p, 0.0);
  if (stochastic) {
    if (!stochastic->squared && !stochastic->generator.empty()) {
      throw std::invalid_argument("stochastic generator must use squared parameters");
    }
    if (stochastic->params != coherent.params) throw std::invalid_argument("parameter lists differ");
    out.v = detail::evaluate_symbolic(*stochastic, spec, 1).lin;
  }
  return out;
}

/// JSON with ordered parameter names, the dense symmetric matrix and the
/// stochastic vector.
inline nlohmann::ordered_json to_json(const QuadraticSensitivity& q) {
  nlohmann::ordered_json j;
  j["parameters"] = q.params;
  const std::size_t p = q.size();
  nlohmann::ordered_json m = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < p; ++i) {
    m.push_back(std::vector<double>(q.matrix.begin() + i * p, q.matrix.begin() + (i + 1) * p));
  }
  j["matrix"] = m;
  j["linear"] = q.linear;
  j["stochastic_vector"] = q.v;
  return j;
}

/// CSV: a header row of parameter names, then one matrix row per
/// parameter, then a final "v" row.
inline std::string to_csv(const QuadraticSensitivity& q) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "param";
  for (const auto& name : q.params) os << ',' << name;
  os << '\n';
  for (std::size_t i = 0; i < q.size(); ++i) {
    os << q.params[i];
    for (std::size_t j = 0; j < q.size(); ++j) os << ',' << q.s(i, j);
    os << '\n';
  }
  os << 'v';
  for (double x : q.v) os << ',' << x;
  os << '\n';
  return os.str();
}

/// Parameter values in model order, with bindings overriding defaults.
inline std::vector<double> parameter_vector(const NoiseModel& model,
                                            const std::map<std::string, double>& bindings = {}) {
  return model.resolve(bindings);
}

}  // namespace errgen
