// Copyright 2026 The psieve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runners behind the `psieve` command-line tool.
//
// A run is described by one JSON document:
//
//   {
//     "experiment": "fig1" | "short-time" | "spin-sieve" | "qbm-sieve",
//     "model": {"N": 6, "omega": 1.0, "epsilon": 0.1, "coupling": "x" | "xy"},
//     "environment": "mixed" | "x-polarized",
//     "initial_state": "0z" | "0x" | [a0, a1] | [[re, im], [re, im]],
//     "time": {"t_max": 40, "samples": 400, "t_final": null, "h": 0.001},
//     "weights": null | [w_x, w_y],
//     "qbm": {"M": 2, "m": 0.5, "N": 4, "Omega": 1, "omega": 1, "weights": [1, 1]},
//     "optimizer": {"restarts": 8, "max_iterations": 4000, "tolerance": 1e-7},
//     "seed": 0,
//     "output": null
//   }
//
// Every key is optional; missing keys take the values shown.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "psieve/psieve.hpp"

namespace psieve::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitUnsupported = 3;

/// Invalid configuration; field() names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SpinSettings {
  int N = 6;
  double omega = 1.0;
  double epsilon = 0.1;
  spin::Coupling coupling = spin::Coupling::XX;
};

struct TimeSettings {
  double t_max = 40.0;
  int samples = 400;
  std::optional<double> t_final;
  double h = 1e-3;
};

struct ExperimentConfig {
  std::string experiment = "fig1";
  SpinSettings model;
  std::string environment = "mixed";
  /// "0z", "0x" or "custom".
  std::string initial_label = "0z";
  ComplexVector initial_amplitudes;
  TimeSettings time;
  std::vector<double> weights;
  oscillator::QbmParams qbm{.M = 2.0, .m = 0.5, .N = 4, .Omega = 1.0, .omega = 1.0};
  oscillator::Weights qbm_weights;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
};

/// Applies "a.b.c=value" overrides; value is parsed as JSON when possible,
/// otherwise taken as a string.
void apply_override(Json& doc, const std::string& assignment);

ExperimentConfig parse_config(const Json& doc);

Ket initial_state(const ExperimentConfig& cfg);
DensityMatrix environment_state(const ExperimentConfig& cfg);
FactorizedModel spin_model(const ExperimentConfig& cfg);

struct Fig1Output {
  std::string csv;
  Json summary;
};

Fig1Output run_fig1(const ExperimentConfig& cfg);
Json run_short_time(const ExperimentConfig& cfg);
Json run_spin_sieve(const ExperimentConfig& cfg);
Json run_qbm_sieve(const ExperimentConfig& cfg);

struct OutputFile {
  std::string path;
  std::string content;
};

/// Runs the configured experiment and renders its output files.
std::vector<OutputFile> run_experiment(const ExperimentConfig& cfg);

/// %.17g, which round-trips and prints integral values without a fraction.
std::string format_number(double value);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace psieve::cli
