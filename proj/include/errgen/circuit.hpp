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
#include <charconv>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errgen/clifford.hpp"

namespace errgen {

struct Operation {
  GateId gate = GateId::I;
  std::array<std::uint32_t, 2> targets{};

  int arity() const { return gate_arity(gate); }
  std::span<const std::uint32_t> target_span() const {
    return {targets.data(), static_cast<std::size_t>(arity())};
  }
  friend bool operator==(const Operation&, const Operation&) = default;
};

inline Operation make_op(GateId g, std::uint32_t a) { return {g, {a, 0}}; }
inline Operation make_op(GateId g, std::uint32_t a, std::uint32_t b) { return {g, {a, b}}; }

using Layer = std::vector<Operation>;

/// A sequence of layers of Clifford gates. Gates inside one layer act on
/// pairwise disjoint qubits.
struct Circuit {
  std::size_t num_qubits = 0;
  std::vector<Layer> layers;
  std::vector<std::uint32_t> measured_bits;

  std::size_t depth() const { return layers.size(); }

  /// Throws std::invalid_argument on out-of-range or overlapping targets.
  void validate() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Parse failure with 1-based line/column information.
class CircuitParseError : public std::invalid_argument {
 public:
  CircuitParseError(std::size_t line, std::size_t column, const std::string& msg)
      : std::invalid_argument("line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

inline void Circuit::validate() const {
  std::vector<std::size_t> seen(num_qubits, SIZE_MAX);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    for (const auto& op : layers[l]) {
      for (auto t : op.target_span()) {
        if (t >= num_qubits) {
          throw std::invalid_argument("layer " + std::to_string(l) + ": qubit " +
                                      std::to_string(t) + " out of range");
        }
        if (seen[t] == l) {
          throw std::invalid_argument("layer " + std::to_string(l) + ": overlapping targets on qubit " +
                                      std::to_string(t));
        }
        seen[t] = l;
      }
    }
  }
  for (auto b : measured_bits) {
    if (b >= num_qubits) throw std::invalid_argument("measured bit out of range");
  }
}

namespace detail {

struct Tokenizer {
  std::string_view line;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= line.size();
  }
  std::string_view word() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != ';' &&
           line[pos] != '\r') {
      ++pos;
    }
    return line.substr(start, pos - start);
  }
};

inline std::uint64_t parse_uint(std::string_view s, std::size_t line, std::size_t col) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw CircuitParseError(line, col, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

/// Grammar, one statement per line:
///   qubits N
///   layer: <gate> <targets> [; <gate> <targets>]*
///   measure: <bit> <bit> ...
/// '#' starts a comment. An empty `layer:` is an identity layer.
inline Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_qubits = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    detail::Tokenizer tk{line};
    if (tk.at_end()) continue;
    const std::size_t kw_col = tk.pos + 1;
    const std::string_view kw = tk.word();
    if (kw == "qubits") {
      if (have_qubits) throw CircuitParseError(line_no, kw_col, "duplicate 'qubits' statement");
      const std::size_t col = tk.pos + 1;
      c.num_qubits = detail::parse_uint(tk.word(), line_no, col);
      have_qubits = true;
      if (!tk.at_end()) throw CircuitParseError(line_no, tk.pos + 1, "trailing text");
      continue;
    }
    if (!have_qubits) throw CircuitParseError(line_no, kw_col, "'qubits N' must come first");
    if (kw == "measure:") {
      while (!tk.at_end()) {
        const std::size_t col = tk.pos + 1;
        const auto b = detail::parse_uint(tk.word(), line_no, col);
        if (b >= c.num_qubits) throw CircuitParseError(line_no, col, "bad qubit index " + std::to_string(b));
        c.measured_bits.push_back(static_cast<std::uint32_t>(b));
      }
      continue;
    }
    if (kw != "layer:") {
      throw CircuitParseError(line_no, kw_col, "unknown statement '" + std::string(kw) + "'");
    }
    Layer layer;
    std::vector<bool> used(c.num_qubits, false);
    while (!tk.at_end()) {
      const std::size_t gcol = tk.pos + 1;
      const std::string_view gname = tk.word();
      GateId g;
      try {
        g = gate_from_name(gname);
      } catch (const std::invalid_argument& e) {
        throw CircuitParseError(line_no, gcol, e.what());
      }
      Operation op{g, {0, 0}};
      for (int k = 0; k < gate_arity(g); ++k) {
        if (tk.at_end() || tk.line[tk.pos] == ';') {
          throw CircuitParseError(line_no, tk.pos + 1, "gate '" + std::string(gname) + "' needs " +
                                                           std::to_string(gate_arity(g)) + " target(s)");
        }
        const std::size_t col = tk.pos + 1;
        const auto q = detail::parse_uint(tk.word(), line_no, col);
        if (q >= c.num_qubits) throw CircuitParseError(line_no, col, "bad qubit index " + std::to_string(q));
        if (used[q]) throw CircuitParseError(line_no, col, "overlapping targets on qubit " + std::to_string(q));
        used[q] = true;
        op.targets[k] = static_cast<std::uint32_t>(q);
      }
      layer.push_back(op);
      if (tk.at_end()) break;
      if (tk.line[tk.pos] != ';') throw CircuitParseError(line_no, tk.pos + 1, "expected ';'");
      ++tk.pos;
    }
    c.layers.push_back(std::move(layer));
  }
  if (!have_qubits) throw CircuitParseError(line_no == 0 ? 1 : line_no, 1, "missing 'qubits N'");
  return c;
}

inline std::string format_circuit(const Circuit& c) {
  std::ostringstream out;
  out << "qubits " << c.num_qubits << "\n";
  for (const auto& layer : c.layers) {
    out << "layer:";
    for (std::size_t i = 0; i < layer.size(); ++i) {
      out << (i ? " ; " : " ") << gate_name(layer[i].gate);
      for (auto t : layer[i].target_span()) out << ' ' << t;
    }
    out << "\n";
  }
  if (!c.measured_bits.empty()) {
    out << "measure:";
    for (auto b : c.measured_bits) out << ' ' << b;
    out << "\n";
  }
  return out.str();
}

/// Tableau of a single layer.
inline CliffordTableau layer_tableau(const Layer& layer, std::size_t n) {
  CliffordFrame f(n);
  for (const auto& op : layer) f.right_multiply(op.gate, op.target_span());
  return f.to_tableau();
}

/// Tableau of the whole circuit U_d ... U_1.
inline CliffordTableau circuit_tableau(const Circuit& c) {
  CliffordFrame f(c.num_qubits);
  for (std::size_t i = c.layers.size(); i-- > 0;) {
    for (const auto& op : c.layers[i]) f.right_multiply(op.gate, op.target_span());
  }
  return f.to_tableau();
}

}  // namespace errgen
