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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "errgen/circuit.hpp"
#include "errgen/errorgen.hpp"

namespace errgen {

/// A rate: either a constant or coefficient * param^power.
struct RateSpec {
  double constant = 0.0;
  std::string param;  // empty for constants
  double coefficient = 1.0;
  int power = 1;

  bool is_constant() const { return param.empty(); }
  friend bool operator==(const RateSpec&, const RateSpec&) = default;
};

struct ErrorSpec {
  Kind kind = Kind::H;
  std::vector<std::string> labels;  // 1 label for H/S, 2 for C/A
  RateSpec rate;
  friend bool operator==(const ErrorSpec&, const ErrorSpec&) = default;
};

/// Attaches errors after matching gates, or directly to whole layers.
///
/// Gate rules: `gate` set; labels have the gate's arity and letter k lands
/// on the op's k-th target. Optional filters: `layers` (inclusive range),
/// `qubits` (all targets must be listed), `targets` (exact target tuples).
/// Layer rules: `gate` unset; labels span all n qubits.
struct NoiseRule {
  std::optional<GateId> gate;
  std::optional<std::pair<std::size_t, std::size_t>> layers;
  std::vector<std::uint32_t> qubits;
  std::vector<std::vector<std::uint32_t>> targets;
  std::vector<ErrorSpec> errors;
  friend bool operator==(const NoiseRule&, const NoiseRule&) = default;

  bool in_layers(std::size_t i) const { return !layers || (i >= layers->first && i <= layers->second); }

  bool matches(std::size_t layer_index, const Operation& op) const {
    if (!gate || *gate != op.gate || !in_layers(layer_index)) return false;
    const auto ts = op.target_span();
    if (!qubits.empty()) {
      for (auto t : ts) {
        if (std::find(qubits.begin(), qubits.end(), t) == qubits.end()) return false;
      }
    }
    if (!targets.empty()) {
      bool hit = false;
      for (const auto& tt : targets) hit = hit || std::equal(tt.begin(), tt.end(), ts.begin(), ts.end());
      if (!hit) return false;
    }
    return true;
  }
};

/// Ordered parameter bindings: names with values, in declaration order.
using ParamList = std::vector<std::pair<std::string, double>>;

class NoiseModel {
 public:
  ParamList parameters;
  std::vector<NoiseRule> rules;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

  std::optional<std::size_t> param_index(const std::string& name) const {
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      if (parameters[i].first == name) return i;
    }
    return std::nullopt;
  }

  /// Parameter values with `bindings` overriding the defaults. Unknown
  /// binding names are rejected.
  std::vector<double> resolve(const std::map<std::string, double>& bindings = {}) const {
    std::vector<double> out;
    for (const auto& [name, v] : parameters) {
      auto it = bindings.find(name);
      out.push_back(it == bindings.end() ? v : it->second);
    }
    for (const auto& [name, v] : bindings) {
      if (!param_index(name)) throw std::invalid_argument("unknown parameter '" + name + "'");
    }
    return out;
  }

  double evaluate(const RateSpec& r, const std::vector<double>& values) const {
    if (r.is_constant()) return r.constant;
    const auto idx = param_index(r.param);
    if (!idx) throw std::invalid_argument("unknown parameter '" + r.param + "'");
    const double v = values.at(*idx);
    return r.coefficient * (r.power == 2 ? v * v : v);
  }

  static NoiseModel from_json(const nlohmann::ordered_json& j);
  static NoiseModel parse(const std::string& text) {
    return from_json(nlohmann::ordered_json::parse(text));
  }
  nlohmann::ordered_json to_json() const;
};

namespace detail {

inline RateSpec parse_rate(const nlohmann::ordered_json& j) {
  RateSpec r;
  if (j.is_number()) {
    r.constant = j.get<double>();
    return r;
  }
  if (!j.is_object() || !j.contains("param")) {
    throw std::invalid_argument("rate must be a number or {\"param\": ...}");
  }
  r.param = j.at("param").get<std::string>();
  r.coefficient = j.value("coefficient", 1.0);
  r.power = j.value("power", 1);
  if (r.power != 1 && r.power != 2) throw std::invalid_argument("rate power must be 1 or 2");
  return r;
}

inline nlohmann::ordered_json rate_to_json(const RateSpec& r) {
  if (r.is_constant()) return r.constant;
  nlohmann::ordered_json j;
  j["param"] = r.param;
  j["coefficient"] = r.coefficient;
  if (r.power != 1) j["power"] = r.power;
  return j;
}

}  // namespace detail

inline NoiseModel NoiseModel::from_json(const nlohmann::ordered_json& j) {
  NoiseModel m;
  if (j.contains("parameters")) {
    for (const auto& [name, v] : j.at("parameters").items()) {
      if (!v.is_number()) throw std::invalid_argument("parameter '" + name + "' must be a number");
      m.parameters.emplace_back(name, v.get<double>());
    }
  }
  if (!j.contains("rules")) return m;
  for (const auto& jr : j.at("rules")) {
    NoiseRule rule;
    if (jr.contains("gate")) rule.gate = gate_from_name(jr.at("gate").get<std::string>());
    if (jr.contains("layer")) {
      const auto l = jr.at("layer").get<std::size_t>();
      rule.layers = std::make_pair(l, l);
    }
    if (jr.contains("layers")) {
      const auto& lr = jr.at("layers");
      if (!lr.is_array() || lr.size() != 2) throw std::invalid_argument("\"layers\" must be [from, to]");
      rule.layers = std::make_pair(lr[0].get<std::size_t>(), lr[1].get<std::size_t>());
    }
    if (jr.contains("qubits")) rule.qubits = jr.at("qubits").get<std::vector<std::uint32_t>>();
    if (jr.contains("targets")) {
      rule.targets = jr.at("targets").get<std::vector<std::vector<std::uint32_t>>>();
    }
    if (!rule.gate && !rule.layers) throw std::invalid_argument("rule needs \"gate\" or \"layer(s)\"");
    for (const auto& je : jr.at("errors")) {
      ErrorSpec e;
      const auto kind = je.at("kind").get<std::string>();
      if (kind.size() != 1) throw std::invalid_argument("unknown error generator kind '" + kind + "'");
      e.kind = kind_from_char(kind[0]);
      e.labels = je.at("paulis").get<std::vector<std::string>>();
      const std::size_t want = is_pair_kind(e.kind) ? 2 : 1;
      if (e.labels.size() != want) {
        throw std::invalid_argument(std::string("kind ") + kind + " needs " + std::to_string(want) +
                                    " Pauli label(s)");
      }
      if (rule.gate) {
        for (const auto& lab : e.labels) {
          if (lab.size() != static_cast<std::size_t>(gate_arity(*rule.gate))) {
            throw std::invalid_argument("label '" + lab + "' does not match the arity of gate '" +
                                        std::string(gate_name(*rule.gate)) + "'");
          }
        }
      }
      e.rate = detail::parse_rate(je.at("rate"));
      if (!e.rate.is_constant() && !m.param_index(e.rate.param)) {
        throw std::invalid_argument("unknown parameter '" + e.rate.param + "'");
      }
      rule.errors.push_back(std::move(e));
    }
    m.rules.push_back(std::move(rule));
  }
  return m;
}

inline nlohmann::ordered_json NoiseModel::to_json() const {
  nlohmann::ordered_json j;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [name, v] : parameters) j["parameters"][name] = v;
  j["rules"] = nlohmann::ordered_json::array();
  for (const auto& r : rules) {
    nlohmann::ordered_json jr;
    if (r.gate) jr["gate"] = std::string(gate_name(*r.gate));
    if (r.layers) jr["layers"] = {r.layers->first, r.layers->second};
    if (!r.qubits.empty()) jr["qubits"] = r.qubits;
    if (!r.targets.empty()) jr["targets"] = r.targets;
    jr["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : r.errors) {
      nlohmann::ordered_json je;
      je["kind"] = std::string(1, kind_char(e.kind));
      je["paulis"] = e.labels;
      je["rate"] = detail::rate_to_json(e.rate);
      jr["errors"].push_back(je);
    }
    j["rules"].push_back(jr);
  }
  return j;
}

/// Pauli label lifted to n qubits: gate-local labels land on the targets
/// in order, layer labels are taken as-is.
inline PauliString lift_label(const std::string& label, std::span<const std::uint32_t> targets,
                              std::size_t n) {
  if (targets.empty()) {
    PauliString p = PauliString::parse(label);
    if (p.num_qubits() != n) {
      throw std::invalid_argument("layer label '" + label + "' must have " + std::to_string(n) + " letters");
    }
    return p;
  }
  if (label.size() != targets.size()) {
    throw std::invalid_argument("label '" + label + "' does not match the gate arity");
  }
  PauliString p(n);
  for (std::size_t k = 0; k < targets.size(); ++k) p.set(targets[k], label[k]);
  return p;
}

/// Adds every error that `model` attaches to layer `i` into `out`, with
/// rates produced by `rate_of(const RateSpec&)`.
template <class Rate, class RateFn>
void accumulate_layer(GeneratorT<Rate>& out, const NoiseModel& model, const Circuit& c,
                      std::size_t i, const RateFn& rate_of) {
  const std::size_t n = c.num_qubits;
  const Layer& layer = c.layers.at(i);
  auto emit = [&](const ErrorSpec& e, std::span<const std::uint32_t> targets) {
    const PauliString p = lift_label(e.labels[0], targets, n);
    const PauliString q = is_pair_kind(e.kind) ? lift_label(e.labels[1], targets, n) : p;
    out.add(e.kind, p, q, rate_of(e.rate));
  };
  for (const auto& rule : model.rules) {
    if (rule.gate) {
      for (const auto& op : layer) {
        if (!rule.matches(i, op)) continue;
        for (const auto& e : rule.errors) emit(e, op.target_span());
      }
    } else if (rule.in_layers(i)) {
      for (const auto& e : rule.errors) emit(e, {});
    }
  }
}

/// Numeric generator of layer i.
inline SparseGenerator layer_generator(const NoiseModel& model, const Circuit& c, std::size_t i,
                                       const std::vector<double>& values) {
  SparseGenerator out(c.num_qubits);
  accumulate_layer(out, model, c, i, [&](const RateSpec& r) { return model.evaluate(r, values); });
  out.prune(0.0);
  return out;
}

inline SparseGenerator layer_generator(const NoiseModel& model, const Circuit& c, std::size_t i,
                                       const std::map<std::string, double>& bindings = {}) {
  return layer_generator(model, c, i, model.resolve(bindings));
}

/// The generator attached to a single op (gate rules only), on n qubits.
inline SparseGenerator op_generator(const NoiseModel& model, const Circuit& c, std::size_t i,
                                    const Operation& op, const std::vector<double>& values) {
  SparseGenerator out(c.num_qubits);
  for (const auto& rule : model.rules) {
    if (!rule.gate || !rule.matches(i, op)) continue;
    for (const auto& e : rule.errors) {
      const PauliString p = lift_label(e.labels[0], op.target_span(), c.num_qubits);
      const PauliString q = is_pair_kind(e.kind) ? lift_label(e.labels[1], op.target_span(), c.num_qubits) : p;
      out.add(e.kind, p, q, model.evaluate(e.rate, values));
    }
  }
  out.prune(0.0);
  return out;
}

/// Replaces every H error of rate c (or c * theta) by an S error of rate
/// c^2 (or c^2 * theta^2). Rejects C and A errors.
inline NoiseModel equivalent_stochastic(const NoiseModel& model) {
  NoiseModel out = model;
  for (auto& rule : out.rules) {
    for (auto& e : rule.errors) {
      if (is_pair_kind(e.kind)) {
        throw std::invalid_argument("equivalent stochastic model is undefined for C/A errors");
      }
      if (e.kind != Kind::H) continue;
      e.kind = Kind::S;
      if (e.rate.is_constant()) {
        e.rate.constant *= e.rate.constant;
      } else {
        if (e.rate.power != 1) throw std::invalid_argument("H rate with power 2 cannot be squared");
        e.rate.coefficient *= e.rate.coefficient;
        e.rate.power = 2;
      }
    }
  }
  return out;
}

}  // namespace errgen
