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


#include <gtest/gtest.h>

#include "support.hpp"

namespace errgen {
namespace {

TEST(Circuit, ParsesGhz2) {
  const Circuit c = parse_circuit("qubits 2\nlayer: h 0\nlayer: cx 0 1\n");
  EXPECT_EQ(c.num_qubits, 2u);
  ASSERT_EQ(c.depth(), 2u);
  EXPECT_EQ(c.layers[0][0].gate, GateId::H);
  EXPECT_EQ(c.layers[1][0].gate, GateId::CX);
  EXPECT_EQ(c.layers[1][0].targets[1], 1u);
}

TEST(Circuit, CommentsMeasureAndEmptyLayer) {
  const Circuit c = parse_circuit("# header\nqubits 3  # three\nlayer:\nlayer: s 2 ; cz 0 1\nmeasure: 0 2\n");
  EXPECT_EQ(c.depth(), 2u);
  EXPECT_TRUE(c.layers[0].empty());
  EXPECT_EQ(c.measured_bits, (std::vector<std::uint32_t>{0, 2}));
}

void expect_error_at(const std::string& text, std::size_t line, std::size_t col, const std::string& what) {
  try {
    parse_circuit(text);
    FAIL() << "expected a parse error for: " << text;
  } catch (const CircuitParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), col) << e.what();
    EXPECT_NE(std::string(e.what()).find(what), std::string::npos) << e.what();
  }
}

TEST(Circuit, ReportsErrorsWithPosition) {
  expect_error_at("qubits 2\nlayer: h 0 ; cx 0 1\n", 2, 17, "overlapping");
  expect_error_at("qubits 2\nlayer: foo 0\n", 2, 8, "unknown gate");
  expect_error_at("qubits 2\nlayer: h 2\n", 2, 10, "bad qubit index");
  expect_error_at("layer: h 0\n", 1, 1, "qubits N");
  expect_error_at("qubits 2\nlayer: cx 0\n", 2, 12, "needs 2");
  expect_error_at("qubits 2\nlayer: h 0 h 1\n", 2, 12, "expected ';'");
  expect_error_at("qubits 2\nmeasure: 0 x\n", 2, 12, "integer");
}

TEST(Circuit, FormatRoundTrip) {
  const std::string text = "qubits 3\nlayer: h 0 ; cx 1 2\nlayer: y90dg 2\nmeasure: 1 2\n";
  EXPECT_EQ(format_circuit(parse_circuit(text)), text);
}

TEST(Circuit, GeneratedCircuitsRoundTrip) {
  const auto sc = gen_surface_code_syndrome(3);
  const std::string text = format_circuit(sc.circuit);
  EXPECT_EQ(parse_circuit(text), sc.circuit);
  EXPECT_EQ(format_circuit(parse_circuit(text)), text);
  const auto b = gen_birb(6, 5, 3);
  EXPECT_EQ(parse_circuit(format_circuit(b.circuit)), b.circuit);
  const auto r = gen_random_edgegrab(Grid{3, 3}, 8, 0.5, 0.3, 2);
  EXPECT_EQ(parse_circuit(format_circuit(r)), r);
}

TEST(Circuit, ValidateRejectsOverlap) {
  Circuit c;
  c.num_qubits = 2;
  c.layers = {{make_op(GateId::H, 0), make_op(GateId::CX, 0, 1)}};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.layers = {{make_op(GateId::H, 3)}};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace errgen
