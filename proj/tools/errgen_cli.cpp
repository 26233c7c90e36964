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


// errgen command-line front end.
//
//   errgen simulate     --circuit c.txt [--noise m.json] [queries...]
//   errgen sensitivity  --circuit c.txt --noise m.json [--target omega]
//   errgen oracle-check --circuit c.txt [--noise m.json]
//   errgen gen <ghz|edgegrab|surface|birb|random> [params...]
//
// Results are JSON on stdout or --out. Any failure prints an error object
// and exits with status 2.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "errgen/errgen.hpp"

namespace {

using errgen::BitString;
using errgen::Circuit;
using errgen::NoiseModel;
using errgen::PauliString;
using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string circuit_path;
  std::string noise_path;
  std::vector<std::string> bind;
  int bch_order = 1;
  int taylor_order = 2;
  double prune = 1e-14;
  std::vector<std::string> bitstrings;
  std::vector<std::string> observables;
  bool marginals = false;
  bool syndrome = false;
  bool sensitivity = false;
  std::string out;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  bool timing = false;
  // sensitivity
  std::string target = "omega";
  std::string format = "json";
  // oracle-check
  double tolerance = -1.0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << text;
}

Circuit load_circuit(const RunConfig& cfg) {
  if (cfg.circuit_path.empty()) throw std::invalid_argument("--circuit is required");
  return errgen::parse_circuit(read_file(cfg.circuit_path));
}

NoiseModel load_noise(const RunConfig& cfg) {
  if (cfg.noise_path.empty()) return NoiseModel{};
  try {
    return NoiseModel::parse(read_file(cfg.noise_path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("noise model: ") + e.what());
  }
}

std::map<std::string, double> parse_bindings(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("bad --bind '" + item + "', want name=value");
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad --bind value '" + value + "'");
    }
    out[item.substr(0, eq)] = v;
  }
  return out;
}

/// Character q is the outcome of qubit q.
BitString parse_bitstring(const std::string& s, std::size_t n) {
  if (s.size() != n) {
    throw std::invalid_argument("bitstring '" + s + "' has length " + std::to_string(s.size()) + ", circuit has " +
                                std::to_string(n) + " qubits");
  }
  BitString b(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (s[q] != '0' && s[q] != '1') throw std::invalid_argument("bitstring '" + s + "' must contain only 0 and 1");
    b[q] = s[q] == '1';
  }
  return b;
}

PauliString parse_observable(const std::string& s, std::size_t n) {
  const auto p = PauliString::parse(s);
  if (p.num_qubits() != n) throw std::invalid_argument("observable '" + s + "' does not match the qubit count");
  return p;
}

void validate(const RunConfig& cfg) {
  if (cfg.bch_order != 1 && cfg.bch_order != 2) throw std::invalid_argument("--bch-order must be 1 or 2");
  if (cfg.taylor_order != 1 && cfg.taylor_order != 2) throw std::invalid_argument("--taylor-order must be 1 or 2");
  if (!(cfg.prune >= 0.0)) throw std::invalid_argument("--prune must be non-negative");
}

std::size_t thread_count(const RunConfig& cfg) { return cfg.threads > 0 ? cfg.threads : errgen::default_threads(); }

Json header(const char* command, const RunConfig& cfg, const std::map<std::string, double>& bindings) {
  Json j;
  j["version"] = errgen::kVersion;
  j["command"] = command;
  Json in;
  in["circuit"] = cfg.circuit_path;
  in["noise"] = cfg.noise_path.empty() ? Json() : Json(cfg.noise_path);
  in["bindings"] = Json::object();
  for (const auto& [k, v] : bindings) in["bindings"][k] = v;
  in["bch_order"] = cfg.bch_order;
  in["taylor_order"] = cfg.taylor_order;
  in["prune"] = cfg.prune;
  in["seed"] = cfg.seed;
  j["inputs"] = in;
  return j;
}

Json circuit_summary(const Circuit& c) {
  Json j;
  j["qubits"] = c.num_qubits;
  j["depth"] = c.layers.size();
  j["measured_bits"] = c.measured_bits;
  return j;
}

std::vector<std::uint32_t> measured_bits(const Circuit& c) {
  if (c.measured_bits.empty()) throw std::invalid_argument("circuit has no 'measure:' line");
  return c.measured_bits;
}

errgen::QuadraticSensitivity omega_sensitivity(const Circuit& c, const NoiseModel& model,
                                               const errgen::ObservableSpec& spec) {
  const auto coh = errgen::symbolic_circuit_generator(c, model);
  const auto sto = errgen::symbolic_circuit_generator(c, errgen::equivalent_stochastic(model));
  return errgen::quadratic_observable(coh, &sto, spec);
}

// ---------------------------------------------------------------------------

Json cmd_simulate(const RunConfig& cfg) {
  validate(cfg);
  const Circuit c = load_circuit(cfg);
  const NoiseModel model = load_noise(cfg);
  const auto bindings = parse_bindings(cfg.bind);
  const std::size_t n = c.num_qubits;
  std::vector<BitString> bits;
  for (const auto& s : cfg.bitstrings) bits.push_back(parse_bitstring(s, n));
  std::vector<PauliString> obs;
  for (const auto& s : cfg.observables) obs.push_back(parse_observable(s, n));

  const auto [gen, psi] = errgen::circuit_error_generator(c, model, bindings, cfg.bch_order, cfg.prune);
  const errgen::Evaluator ev(gen, psi);
  const int l = cfg.taylor_order;

  Json j = header("simulate", cfg, bindings);
  j["circuit"] = circuit_summary(c);
  j["num_terms"] = gen.num_terms();
  j["total_rate"] = gen.total_rate();
  j["perturbative"] = gen.perturbative();
  j["process_infidelity"] = errgen::process_infidelity(gen);
  const auto p0 = ev.probability(BitString(n, 0), l);
  j["p0"] = p0.value;

  if (!bits.empty()) {
    Json arr = Json::array();
    for (std::size_t k = 0; k < bits.size(); ++k) {
      const auto p = ev.probability(bits[k], l);
      arr.push_back(Json{{"bitstring", cfg.bitstrings[k]}, {"probability", p.value}, {"raw", p.raw}});
    }
    j["probabilities"] = arr;
  }
  if (!obs.empty()) {
    std::vector<double> values(obs.size());
    // The first query fills the shared caches; the rest only read them.
    values[0] = ev.expectation(obs[0], l);
    errgen::parallel_for(obs.size() - 1, thread_count(cfg),
                         [&](std::size_t k) { values[k + 1] = ev.expectation(obs[k + 1], l); });
    Json arr = Json::array();
    for (std::size_t k = 0; k < obs.size(); ++k) arr.push_back(Json{{"observable", cfg.observables[k]}, {"value", values[k]}});
    j["expectations"] = arr;
  }
  if (cfg.marginals) {
    const auto coh = errgen::marginal_error_probabilities(gen.generator);
    const auto [sgen, spsi] =
        errgen::circuit_error_generator(c, errgen::equivalent_stochastic(model), bindings, 1, cfg.prune);
    const auto sto = errgen::marginal_error_probabilities(sgen.generator);
    Json chi = Json::array();
    for (std::size_t q = 0; q < n; ++q) {
      const auto x = errgen::coherent_amplification(coh[q], sto[q]);
      chi.push_back(x ? Json(*x) : Json());
    }
    j["marginals"] = Json{{"coherent", coh}, {"stochastic", sto}, {"chi", chi}};
  }
  if (cfg.syndrome) {
    const auto mb = measured_bits(c);
    std::vector<double> flips(mb.size());
    flips[0] = ev.flip_probability(mb[0], l);
    errgen::parallel_for(mb.size() - 1, thread_count(cfg),
                         [&](std::size_t k) { flips[k + 1] = ev.flip_probability(mb[k + 1], l); });
    double omega = 0.0;
    for (double f : flips) omega += std::abs(f);
    j["syndrome"] = Json{{"bits", mb}, {"flip_probabilities", flips}, {"omega", omega}};
  }
  if (cfg.sensitivity) {
    j["sensitivity"] = errgen::to_json(omega_sensitivity(c, model, errgen::FlipObservable{measured_bits(c)}));
  }
  return j;
}

errgen::ObservableSpec parse_target(const std::string& t, const Circuit& c) {
  if (t == "omega") return errgen::FlipObservable{measured_bits(c)};
  if (t == "infidelity") return errgen::InfidelityObservable{};
  const auto colon = t.find(':');
  if (colon != std::string::npos) {
    const std::string kind = t.substr(0, colon);
    const std::string arg = t.substr(colon + 1);
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && used > 0) {
      if (v >= c.num_qubits) throw std::invalid_argument("target qubit out of range");
      if (kind == "flip") return errgen::FlipObservable{{static_cast<std::uint32_t>(v)}};
      if (kind == "marginal") return errgen::MarginalObservable{v};
    }
  }
  throw std::invalid_argument("bad --target '" + t + "', want omega, infidelity, flip:B or marginal:Q");
}

std::string cmd_sensitivity(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") throw std::invalid_argument("--format must be json or csv");
  const Circuit c = load_circuit(cfg);
  if (cfg.noise_path.empty()) throw std::invalid_argument("--noise is required");
  const NoiseModel model = load_noise(cfg);
  const auto q = omega_sensitivity(c, model, parse_target(cfg.target, c));
  if (cfg.format == "csv") return errgen::to_csv(q);
  Json j = header("sensitivity", cfg, {});
  j["circuit"] = circuit_summary(c);
  j["target"] = cfg.target;
  j["sensitivity"] = errgen::to_json(q);
  return j.dump(2) + "\n";
}

Json cmd_oracle_check(const RunConfig& cfg) {
  validate(cfg);
  const Circuit c = load_circuit(cfg);
  const NoiseModel model = load_noise(cfg);
  const auto bindings = parse_bindings(cfg.bind);
  const std::size_t n = c.num_qubits;
  if (n > errgen::oracle::kMaxDistributionQubits) {
    throw std::invalid_argument("oracle-check limited to " + std::to_string(errgen::oracle::kMaxDistributionQubits) +
                                " qubits");
  }
  std::vector<PauliString> obs;
  for (const auto& s : cfg.observables) obs.push_back(parse_observable(s, n));
  const auto exact = errgen::oracle::exact_circuit(c, model, bindings, obs);
  const auto [gen, psi] = errgen::circuit_error_generator(c, model, bindings, cfg.bch_order, cfg.prune);
  const errgen::Evaluator ev(gen, psi);
  const int l = cfg.taylor_order;

  double max_dp = 0.0;
  std::size_t argmax = 0;
  for (std::size_t x = 0; x < exact.probabilities.size(); ++x) {
    BitString b(n);
    for (std::size_t q = 0; q < n; ++q) b[q] = (x >> q) & 1u;
    const double d = std::abs(ev.probability(b, l).raw - exact.probabilities[x]);
    if (d > max_dp) {
      max_dp = d;
      argmax = x;
    }
  }
  std::string worst(n, '0');
  for (std::size_t q = 0; q < n; ++q) worst[q] = ((argmax >> q) & 1u) ? '1' : '0';

  Json j = header("oracle-check", cfg, bindings);
  j["circuit"] = circuit_summary(c);
  j["max_abs_dp"] = max_dp;
  j["worst_bitstring"] = worst;
  double max_de = 0.0;
  if (!obs.empty()) {
    Json arr = Json::array();
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const double approx = ev.expectation(obs[k], l);
      max_de = std::max(max_de, std::abs(approx - exact.expectations[k]));
      arr.push_back(Json{{"observable", cfg.observables[k]}, {"approx", approx}, {"exact", exact.expectations[k]}});
    }
    j["expectations"] = arr;
    j["max_abs_dexpectation"] = max_de;
  }
  double dfid = 0.0;
  if (n <= errgen::oracle::kMaxProcessQubits) {
    const double exact_inf = 1.0 - errgen::oracle::process_fidelity(c, model, bindings);
    const double approx_inf = errgen::process_infidelity(gen);
    dfid = std::abs(approx_inf - exact_inf);
    j["process_infidelity"] = Json{{"approx", approx_inf}, {"exact", exact_inf}, {"abs_diff", dfid}};
  } else {
    j["process_infidelity"] = Json();
  }
  if (cfg.tolerance >= 0.0) {
    j["tolerance"] = cfg.tolerance;
    j["within_tolerance"] = max_dp <= cfg.tolerance && max_de <= cfg.tolerance && dfid <= cfg.tolerance;
  }
  return j;
}

// ---------------------------------------------------------------------------
// gen

struct GenConfig {
  std::size_t n = 2, eta = 0, depth = 8, rows = 4, cols = 4, distance = 3, terms = 2;
  double theta = 1e-4, cz_density = 0.25, h_density = 0.5, eps = 1e-3;
  std::string schedule = "standard";
  std::string noise_out;
};

std::string with_comments(const std::vector<std::string>& lines, const Circuit& c) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out + errgen::format_circuit(c);
}

std::string cmd_gen(const std::string& kind, const GenConfig& g, const RunConfig& cfg) {
  NoiseModel noise;
  bool has_noise = false;
  std::string text;
  char buf[128];
  if (kind == "ghz") {
    const auto ghz = errgen::gen_ghz_loop(g.n, g.eta, g.theta);
    std::snprintf(buf, sizeof buf, "theta_acc %.17g p0 %.17g", ghz.theta_acc, ghz.p0);
    text = with_comments({"ghz loop n " + std::to_string(g.n) + " eta " + std::to_string(g.eta), buf}, ghz.circuit);
    noise = ghz.model;
    has_noise = true;
  } else if (kind == "edgegrab") {
    const Circuit c = errgen::gen_random_edgegrab(errgen::Grid{g.rows, g.cols}, g.depth, g.cz_density, g.h_density, cfg.seed);
    text = errgen::format_circuit(c);
    noise = errgen::z_rotation_model(g.theta);
    has_noise = true;
  } else if (kind == "surface") {
    errgen::CnotSchedule s;
    if (g.schedule == "standard") {
      s = errgen::CnotSchedule::kStandard;
    } else if (g.schedule == "swapped") {
      s = errgen::CnotSchedule::kSwapped;
    } else {
      throw std::invalid_argument("--schedule must be standard or swapped");
    }
    const auto sc = errgen::gen_surface_code_syndrome(g.distance, s);
    text = errgen::format_circuit(sc.circuit);
    noise = errgen::surface_code_model(sc);
    has_noise = true;
  } else if (kind == "birb") {
    const auto b = errgen::gen_birb(g.n, g.depth, cfg.seed, g.cz_density);
    text = with_comments({"birb target " + b.target.str() + " initial " + b.initial.str()}, b.circuit);
    noise = errgen::birb_noise_model(cfg.seed);
    has_noise = true;
  } else if (kind == "random") {
    const Circuit c = errgen::gen_random_clifford(g.n, g.depth, cfg.seed);
    text = errgen::format_circuit(c);
    noise = errgen::random_sparse_noise(c, g.terms, g.eps, cfg.seed);
    has_noise = true;
  } else {
    throw std::invalid_argument("unknown generator '" + kind + "'");
  }
  if (!g.noise_out.empty() && has_noise) write_output(g.noise_out, noise.to_json().dump(2) + "\n");
  return text;
}

Json error_json(const std::string& command, const std::string& message) {
  Json j;
  j["version"] = errgen::kVersion;
  j["command"] = command;
  j["error"] = message;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"errgen: noisy Clifford circuit simulation by error generator propagation"};
  app.require_subcommand(1);
  RunConfig cfg;
  GenConfig gen;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--circuit", cfg.circuit_path, "Circuit text file");
    sub->add_option("--noise", cfg.noise_path, "Noise model JSON file");
    sub->add_option("--bind", cfg.bind, "Parameter binding name=value (repeatable)");
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--seed", cfg.seed, "Seed, echoed in the output");
    sub->add_flag("--timing", cfg.timing, "Embed wall-clock timing in the JSON");
  };
  auto add_expansion = [&](CLI::App* sub) {
    sub->add_option("--bch-order", cfg.bch_order, "BCH order k (1 or 2)")->capture_default_str();
    sub->add_option("--taylor-order", cfg.taylor_order, "Taylor order l (1 or 2)")->capture_default_str();
    sub->add_option("--prune", cfg.prune, "Drop generator rates below this magnitude")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (default ERRGEN_THREADS, else all cores)");
  };

  auto* sim = app.add_subcommand("simulate", "Approximate noisy probabilities and observables");
  add_common(sim);
  add_expansion(sim);
  sim->add_option("--bitstring", cfg.bitstrings, "Outcome to evaluate; character q is qubit q (repeatable)");
  sim->add_option("--observable", cfg.observables, "Pauli observable; character q is qubit q (repeatable)");
  sim->add_flag("--marginals", cfg.marginals, "Per-qubit marginal error rates and coherent amplification");
  sim->add_flag("--syndrome", cfg.syndrome, "Flip probabilities of the measured bits and their sum");
  sim->add_flag("--sensitivity", cfg.sensitivity, "Quadratic sensitivity of the summed syndrome flips");

  auto* sens = app.add_subcommand("sensitivity", "Quadratic sensitivity matrix of an observable");
  add_common(sens);
  sens->add_option("--target", cfg.target, "omega, infidelity, flip:B or marginal:Q")->capture_default_str();
  sens->add_option("--format", cfg.format, "json or csv")->capture_default_str();

  auto* orc = app.add_subcommand("oracle-check", "Compare against the dense density-matrix oracle (n <= 10)");
  add_common(orc);
  add_expansion(orc);
  orc->add_option("--observable", cfg.observables, "Pauli observable to compare (repeatable)");
  orc->add_option("--tolerance", cfg.tolerance, "Report whether all differences are within this bound");

  auto* gsub = app.add_subcommand("gen", "Generate a circuit (and its companion noise model)");
  std::string kind;
  gsub->add_option("kind", kind, "ghz, edgegrab, surface, birb or random")->required();
  gsub->add_option("--n", gen.n, "Qubits (ghz, birb, random)")->capture_default_str();
  gsub->add_option("--eta", gen.eta, "GHZ qubits rotated by -theta")->capture_default_str();
  gsub->add_option("--theta", gen.theta, "Rotation angle (ghz, edgegrab)")->capture_default_str();
  gsub->add_option("--depth", gen.depth, "Layers (edgegrab, birb, random)")->capture_default_str();
  gsub->add_option("--rows", gen.rows, "Grid rows (edgegrab)")->capture_default_str();
  gsub->add_option("--cols", gen.cols, "Grid columns (edgegrab)")->capture_default_str();
  gsub->add_option("--cz-density", gen.cz_density, "Expected cz density")->capture_default_str();
  gsub->add_option("--h-density", gen.h_density, "Probability of h on a free qubit (edgegrab)")->capture_default_str();
  gsub->add_option("--distance", gen.distance, "Surface code distance")->capture_default_str();
  gsub->add_option("--schedule", gen.schedule, "Surface CNOT schedule: standard or swapped")->capture_default_str();
  gsub->add_option("--terms", gen.terms, "Noise terms per layer (random)")->capture_default_str();
  gsub->add_option("--eps", gen.eps, "Total absolute noise rate (random)")->capture_default_str();
  gsub->add_option("--noise-out", gen.noise_out, "Write the companion noise model here");
  gsub->add_option("--out", cfg.out, "Output file (default stdout)");
  gsub->add_option("--seed", cfg.seed, "Seed")->capture_default_str();

  std::string command = "errgen";
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_json(command, e.what()).dump(2) << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::string text;
    Json j;
    bool is_json = true;
    if (sim->parsed()) {
      command = "simulate";
      j = cmd_simulate(cfg);
    } else if (orc->parsed()) {
      command = "oracle-check";
      j = cmd_oracle_check(cfg);
    } else if (sens->parsed()) {
      command = "sensitivity";
      text = cmd_sensitivity(cfg);
      is_json = false;
    } else {
      command = "gen";
      text = cmd_gen(kind, gen, cfg);
      is_json = false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (is_json) {
      if (cfg.timing) j["timing"] = Json{{"seconds", secs}};
      text = j.dump(2) + "\n";
    }
    write_output(cfg.out, text);
    std::fprintf(stderr, "errgen %s: %.3f s\n", command.c_str(), secs);
    return 0;
  } catch (const std::exception& e) {
    std::cout << error_json(command, e.what()).dump(2) << "\n";
    return 2;
  }
}
