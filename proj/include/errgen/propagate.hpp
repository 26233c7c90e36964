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

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "errgen/circuit.hpp"
#include "errgen/clifford.hpp"
#include "errgen/errorgen.hpp"
#include "errgen/noise_model.hpp"
#include "errgen/stabilizer.hpp"

namespace errgen {

/// Every layer's error generator moved to the end of the circuit, plus the
/// ideal circuit tableau and output state.
template <class Rate>
struct PropagatedLayersT {
  std::vector<GeneratorT<Rate>> layers;  // index i: layer i's propagated generator
  CliffordTableau circuit_tableau;
  StabilizerState psi;
};
using PropagatedLayers = PropagatedLayersT<double>;

/// Streams propagated layer generators to `sink(i, generator)`, from the
/// last layer to the first. Layer i's noise acts after layer i's gates, so
/// it is conjugated by the suffix U_{d:i+1}. The suffix is held as a
/// forward frame and extended on the right one layer at a time.
///
/// Returns the frame after the sweep, which is the circuit's own tableau.
template <class Rate, class RateFn, class Sink>
CliffordFrame propagate_stream(const Circuit& c, const NoiseModel& model, const RateFn& rate_of,
                               Sink&& sink) {
  c.validate();
  CliffordFrame suffix(c.num_qubits);
  for (std::size_t i = c.layers.size(); i-- > 0;) {
    GeneratorT<Rate> raw(c.num_qubits);
    accumulate_layer(raw, model, c, i, rate_of);
    sink(i, map_generator(raw, [&](const PauliString& p) { return suffix.conjugate(p); }));
    for (const auto& op : c.layers[i]) suffix.right_multiply(op.gate, op.target_span());
  }
  return suffix;
}

template <class Rate, class RateFn>
PropagatedLayersT<Rate> propagate_with(const Circuit& c, const NoiseModel& model, const RateFn& rate_of) {
  if (c.layers.empty()) throw std::invalid_argument("circuit depth must be at least 1");
  PropagatedLayersT<Rate> out;
  out.layers.resize(c.layers.size());
  CliffordFrame frame = propagate_stream<Rate>(c, model, rate_of, [&](std::size_t i, GeneratorT<Rate>&& g) {
    out.layers[i] = std::move(g);
  });
  out.circuit_tableau = frame.to_tableau();
  out.psi = StabilizerState::from_tableau(out.circuit_tableau);
  return out;
}

/// Numeric propagation with parameter bindings overriding model defaults.
inline PropagatedLayers propagate(const Circuit& c, const NoiseModel& model,
                                  const std::map<std::string, double>& bindings = {}) {
  const auto values = model.resolve(bindings);
  auto out = propagate_with<double>(c, model, [&](const RateSpec& r) { return model.evaluate(r, values); });
  for (auto& g : out.layers) g.prune(0.0);
  return out;
}

}  // namespace errgen
