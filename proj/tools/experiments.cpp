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

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace psieve::cli {

namespace {

// Short-time fit: 1 - P = a t^2 on a dedicated grid, independent of the
// (coarse) output grid.
constexpr double kFitWindow = 0.3;
constexpr int kFitPoints = 61;
constexpr double kShortTimeThreshold = 1e-3;
constexpr double kZeroCoefficient = 1e-8;
constexpr double kZeroSecondDerivative = 1e-6;

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where.empty() ? "config" : where, "expected a JSON object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!keys.contains(item.key())) throw ConfigError(join_path(where, item.key()), "unknown key");
  }
}

double number(const Json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  const Json& v = obj[key];
  if (!v.is_number()) throw ConfigError(join_path(where, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join_path(where, key), "must be finite");
  return x;
}

double positive(const Json& obj, const std::string& where, const char* key, double fallback) {
  const double x = number(obj, where, key, fallback);
  if (!(x > 0.0)) throw ConfigError(join_path(where, key), "must be positive");
  return x;
}

long long integer(const Json& obj, const std::string& where, const char* key, long long fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  const Json& v = obj[key];
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  throw ConfigError(join_path(where, key), "expected an integer");
}

std::string text(const Json& obj, const std::string& where, const char* key, const std::string& fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_string()) throw ConfigError(join_path(where, key), "expected a string");
  return obj[key].get<std::string>();
}

std::vector<double> number_list(const Json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) throw ConfigError(field, "expected finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

ComplexVector parse_amplitudes(const Json& v) {
  const std::string field = "initial_state";
  if (!v.is_array() || v.size() != 2) throw ConfigError(field, "expected \"0z\", \"0x\" or two amplitudes");
  ComplexVector amps(2);
  for (std::size_t i = 0; i < 2; ++i) {
    const Json& a = v[i];
    if (a.is_number()) {
      amps(static_cast<Index>(i)) = a.get<double>();
    } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      amps(static_cast<Index>(i)) = Complex(a[0].get<double>(), a[1].get<double>());
    } else {
      throw ConfigError(field, "amplitudes must be numbers or [re, im] pairs");
    }
  }
  if (!amps.allFinite() || amps.norm() < 1e-12) throw ConfigError(field, "amplitudes must be finite and non-zero");
  return amps / amps.norm();
}

std::size_t term_count(spin::Coupling c) { return c == spin::Coupling::XX ? 1 : 2; }

Json bloch_angles(std::span<const double> p) { return Json{{"theta", p[0]}, {"phi", p[1]}}; }

Json gaussian_json(const oscillator::GaussianState& g) {
  return Json{{"dx2", g.dx2}, {"dp2", g.dp2}, {"sxp", g.sxp}, {"uncertainty", g.uncertainty()}};
}

OptimizerConfig optimizer_for(const ExperimentConfig& cfg) {
  OptimizerConfig opt = cfg.optimizer;
  opt.seed = cfg.seed;
  return opt;
}

std::string summary_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.ends_with(ext)) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".summary.json";
  }
  return csv_path + ".summary.json";
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  Json* node = &doc;
  std::stringstream parts(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) {
    if (key.empty()) throw ConfigError("--set", "empty key in '" + path + "'");
    keys.push_back(key);
  }
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    Json& child = (*node)[keys[i]];
    if (child.is_null()) child = Json::object();
    if (!child.is_object()) throw ConfigError(path, "'" + keys[i] + "' is not an object");
    node = &child;
  }
  (*node)[keys.back()] = std::move(value);
}

ExperimentConfig parse_config(const Json& doc) {
  check_keys(doc, "",
             {"experiment", "model", "environment", "initial_state", "time", "weights", "qbm", "optimizer", "seed",
              "output"});
  ExperimentConfig cfg;

  cfg.experiment = text(doc, "", "experiment", cfg.experiment);
  static const std::set<std::string> experiments{"fig1", "short-time", "spin-sieve", "qbm-sieve"};
  if (!experiments.contains(cfg.experiment)) {
    throw ConfigError("experiment", "expected one of fig1, short-time, spin-sieve, qbm-sieve");
  }

  if (doc.contains("model")) {
    const Json& m = doc["model"];
    check_keys(m, "model", {"N", "omega", "epsilon", "coupling"});
    const long long n = integer(m, "model", "N", cfg.model.N);
    if (n < 1 || n > 11) throw ConfigError("model.N", "must be between 1 and 11");
    cfg.model.N = static_cast<int>(n);
    cfg.model.omega = number(m, "model", "omega", cfg.model.omega);
    cfg.model.epsilon = number(m, "model", "epsilon", cfg.model.epsilon);
    const std::string coupling = text(m, "model", "coupling", "x");
    if (coupling == "x") {
      cfg.model.coupling = spin::Coupling::XX;
    } else if (coupling == "xy") {
      cfg.model.coupling = spin::Coupling::XXYY;
    } else {
      throw ConfigError("model.coupling", "expected \"x\" or \"xy\"");
    }
  }

  cfg.environment = text(doc, "", "environment", cfg.environment);
  if (cfg.environment != "mixed" && cfg.environment != "x-polarized") {
    throw ConfigError("environment", "expected \"mixed\" or \"x-polarized\"");
  }

  if (doc.contains("initial_state") && !doc["initial_state"].is_null()) {
    const Json& s = doc["initial_state"];
    if (s.is_string()) {
      cfg.initial_label = s.get<std::string>();
      if (cfg.initial_label != "0z" && cfg.initial_label != "0x") {
        throw ConfigError("initial_state", "expected \"0z\", \"0x\" or two amplitudes");
      }
    } else {
      cfg.initial_label = "custom";
      cfg.initial_amplitudes = parse_amplitudes(s);
    }
  }

  if (doc.contains("time")) {
    const Json& t = doc["time"];
    check_keys(t, "time", {"t_max", "samples", "t_final", "h"});
    cfg.time.t_max = positive(t, "time", "t_max", cfg.time.t_max);
    const long long samples = integer(t, "time", "samples", cfg.time.samples);
    if (samples < 2 || samples > 1000000) throw ConfigError("time.samples", "must be between 2 and 1000000");
    cfg.time.samples = static_cast<int>(samples);
    if (t.contains("t_final") && !t["t_final"].is_null()) cfg.time.t_final = positive(t, "time", "t_final", 1.0);
    cfg.time.h = positive(t, "time", "h", cfg.time.h);
    if (cfg.time.h > 0.1) throw ConfigError("time.h", "must not exceed 0.1");
  }

  if (doc.contains("weights") && !doc["weights"].is_null()) {
    cfg.weights = number_list(doc["weights"], "weights");
    if (cfg.weights.size() != term_count(cfg.model.coupling)) {
      throw ConfigError("weights", "expected one weight per interaction term (" +
                                       std::to_string(term_count(cfg.model.coupling)) + ")");
    }
    for (double w : cfg.weights) {
      if (w < 0.0) throw ConfigError("weights", "must be non-negative");
    }
  }

  if (doc.contains("qbm")) {
    const Json& q = doc["qbm"];
    check_keys(q, "qbm", {"M", "m", "N", "Omega", "omega", "weights"});
    cfg.qbm.M = positive(q, "qbm", "M", cfg.qbm.M);
    cfg.qbm.m = positive(q, "qbm", "m", cfg.qbm.m);
    cfg.qbm.Omega = positive(q, "qbm", "Omega", cfg.qbm.Omega);
    cfg.qbm.omega = positive(q, "qbm", "omega", cfg.qbm.omega);
    const long long n = integer(q, "qbm", "N", cfg.qbm.N);
    if (n < 0 || n > 1000000000) throw ConfigError("qbm.N", "must be a non-negative integer");
    cfg.qbm.N = static_cast<int>(n);
    if (q.contains("weights") && !q["weights"].is_null()) {
      const auto w = number_list(q["weights"], "qbm.weights");
      if (w.size() != 2) throw ConfigError("qbm.weights", "expected [momentum, position]");
      if (!(w[0] > 0.0 && w[1] > 0.0)) throw ConfigError("qbm.weights", "must be positive");
      cfg.qbm_weights = {w[0], w[1]};
    }
  }

  if (doc.contains("optimizer")) {
    const Json& o = doc["optimizer"];
    check_keys(o, "optimizer", {"restarts", "max_iterations", "tolerance"});
    const long long restarts = integer(o, "optimizer", "restarts", cfg.optimizer.restarts);
    if (restarts < 1 || restarts > 10000) throw ConfigError("optimizer.restarts", "must be between 1 and 10000");
    cfg.optimizer.restarts = static_cast<int>(restarts);
    const long long iters = integer(o, "optimizer", "max_iterations", cfg.optimizer.max_iterations);
    if (iters < 1 || iters > 100000000) throw ConfigError("optimizer.max_iterations", "must be positive");
    cfg.optimizer.max_iterations = static_cast<int>(iters);
    cfg.optimizer.tolerance = positive(o, "optimizer", "tolerance", cfg.optimizer.tolerance);
  }

  const long long seed = integer(doc, "", "seed", 0);
  if (seed < 0) throw ConfigError("seed", "must be a non-negative integer");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (doc.contains("output") && !doc["output"].is_null()) {
    cfg.output = text(doc, "", "output", "");
    if (cfg.output->empty()) throw ConfigError("output", "must not be empty");
  }
  return cfg;
}

Ket initial_state(const ExperimentConfig& cfg) {
  if (cfg.initial_label == "custom") return Ket::normalized(cfg.initial_amplitudes);
  return spin::named_state(cfg.initial_label);
}

DensityMatrix environment_state(const ExperimentConfig& cfg) {
  return cfg.environment == "x-polarized" ? spin::x_polarized_bath(cfg.model.N) : spin::mixed_bath(cfg.model.N);
}

FactorizedModel spin_model(const ExperimentConfig& cfg) {
  return spin::central_spin_model(cfg.model.N, cfg.model.omega, cfg.model.epsilon, cfg.model.coupling);
}

Fig1Output run_fig1(const ExperimentConfig& cfg) {
  const FactorizedModel model = spin_model(cfg);
  const DensityMatrix rho_e = environment_state(cfg);
  const auto times = uniform_times(cfg.time.t_max, cfg.time.samples);
  const PuritySeries z = purity_series(model, spin::up_z(), rho_e, times);
  const PuritySeries x = purity_series(model, spin::up_x(), rho_e, times);

  std::string csv = "t,purity_0z,purity_0x,pmax_0z,pmax_0x\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    csv += format_number(times[i]) + ',' + format_number(z.values[i]) + ',' + format_number(x.values[i]) + ',' +
           format_number(z.pmax[i]) + ',' + format_number(x.pmax[i]) + '\n';
  }

  const auto fit_times = uniform_times(kFitWindow, kFitPoints);
  const auto fit = [&](const Ket& psi) {
    const PuritySeries s = purity_series(model, psi, rho_e, fit_times);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < fit_times.size(); ++i) {
      const double t2 = fit_times[i] * fit_times[i];
      num += (1.0 - s.values[i]) * t2;
      den += t2 * t2;
    }
    return num / den;
  };
  const auto analytic = [&](const Ket& psi) -> Json {
    if (model.terms().size() != 1) return nullptr;
    return 0.5 * short_time_coefficient(model, psi, rho_e);
  };

  // Ordering at short times, on the output grid and on a dense grid over (0, 1].
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times.size() && times[i] <= 1.0; ++i) {
    min_gap = std::min(min_gap, x.values[i] - z.values[i]);
  }
  const auto dense = uniform_times(1.0, 101);
  const PuritySeries dz = purity_series(model, spin::up_z(), rho_e, dense);
  const PuritySeries dx = purity_series(model, spin::up_x(), rho_e, dense);
  for (std::size_t i = 1; i < dense.size(); ++i) min_gap = std::min(min_gap, dx.values[i] - dz.values[i]);

  Json summary;
  summary["experiment"] = "fig1";
  summary["model"] = {{"N", cfg.model.N},
                      {"omega", cfg.model.omega},
                      {"epsilon", cfg.model.epsilon},
                      {"coupling", cfg.model.coupling == spin::Coupling::XX ? "x" : "xy"}};
  summary["environment"] = cfg.environment;
  summary["t_max"] = cfg.time.t_max;
  summary["samples"] = cfg.time.samples;
  summary["short_time_fit"] = {{"model", "1 - P = a t^2"},
                               {"window", kFitWindow},
                               {"points", kFitPoints},
                               {"coefficient_0z", fit(spin::up_z())},
                               {"coefficient_0x", fit(spin::up_x())},
                               {"analytic_0z", analytic(spin::up_z())},
                               {"analytic_0x", analytic(spin::up_x())}};
  summary["min_purity_gap_0x_minus_0z_t_le_1"] = min_gap;
  summary["purity_0x_ge_0z_for_t_le_1"] = min_gap >= 0.0;
  return {std::move(csv), std::move(summary)};
}

Json run_short_time(const ExperimentConfig& cfg) {
  const FactorizedModel model = spin_model(cfg);
  const DensityMatrix rho_e = environment_state(cfg);
  const Ket psi = initial_state(cfg);
  const double c = short_time_coefficient(model, psi, rho_e);  // throws for multi-term models
  const auto& term = model.terms().front();
  const double ds2 = mean_dispersion(term.system, psi).disp2;
  const double de2 = mean_dispersion(term.environment, rho_e).disp2;
  const PurityDerivatives d = numeric_second_derivative(model, psi, rho_e, cfg.time.h);

  Json report;
  report["experiment"] = "short-time";
  report["initial_state"] = cfg.initial_label;
  report["h"] = cfg.time.h;
  report["system_dispersion"] = ds2;
  report["environment_dispersion"] = de2;
  report["analytic_coefficient"] = c;
  report["numeric_first_derivative"] = d.first;
  report["numeric_second_derivative"] = d.second;
  bool pass = false;
  if (c >= kZeroCoefficient) {
    const double rel = std::abs(d.second + c) / c;
    report["relative_error"] = rel;
    pass = rel < kShortTimeThreshold;
  } else {
    report["relative_error"] = nullptr;
    pass = std::abs(d.second) < kZeroSecondDerivative;
  }
  report["threshold"] = kShortTimeThreshold;
  report["pass"] = pass;
  report["no_decoherence"] = de2 == 0.0;
  if (de2 == 0.0) {
    report["status"] = "no decoherence";
  } else if (ds2 < 1e-12) {
    report["status"] = "interaction eigenstate";
  } else {
    report["status"] = "decoherence";
  }
  return report;
}

Json run_spin_sieve(const ExperimentConfig& cfg) {
  const FactorizedModel model = spin_model(cfg);
  const DensityMatrix rho_e = environment_state(cfg);
  double t_final = 0.0;
  if (cfg.time.t_final) {
    t_final = *cfg.time.t_final;
  } else if (cfg.model.omega != 0.0) {
    t_final = default_sieve_time(model);
  } else {
    throw ConfigError("time.t_final", "required when model.omega is 0");
  }

  const StateChart chart = StateChart::bloch();
  const SieveResult r = modified_sieve(model, rho_e, t_final, chart, optimizer_for(cfg), cfg.weights);
  const DispersionObjective objective(model, rho_e, cfg.weights);

  Json restarts = Json::array();
  for (const auto& rec : r.history) {
    Json item = bloch_angles(rec.parameters);
    item["start"] = bloch_angles(rec.start);
    item["objective"] = rec.objective;
    item["iterations"] = rec.iterations;
    item["converged"] = rec.converged;
    restarts.push_back(std::move(item));
  }

  Json report;
  report["experiment"] = "spin-sieve";
  report["t_final"] = t_final;
  report["kappa"] = objective.effective().kappa;
  report["objective"] = r.objective;
  report["minimizer"] = bloch_angles(r.parameters);
  report["degenerate_manifold"] = r.degenerate_manifold;
  report["ambiguous"] = r.ambiguous;
  report["restart_spread"] = r.restart_spread;
  report["converged"] = r.converged;
  report["objective_0z"] = objective.integrate(spin::up_z(), t_final).value;
  report["objective_0x"] = objective.integrate(spin::up_x(), t_final).value;
  report["seed"] = cfg.seed;
  report["restarts"] = std::move(restarts);
  return report;
}

Json run_qbm_sieve(const ExperimentConfig& cfg) {
  const double w = oscillator::omega_tilde(cfg.qbm);
  const double M = cfg.qbm.M;
  const OptimizerConfig opt = optimizer_for(cfg);
  const oscillator::GaussianState pointer = oscillator::qbm_pointer_state(M, w);
  const oscillator::QbmSieveResult r = oscillator::qbm_sieve(M, w, cfg.qbm_weights, opt);

  Json analytic = gaussian_json(pointer);
  analytic["objective"] = oscillator::qbm_objective(pointer, cfg.qbm_weights, M, w);
  Json found = gaussian_json(r.state);
  found["objective"] = r.objective;
  found["converged"] = r.converged;

  Json sweep = Json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double ratio : {0.01, 1.0, 100.0}) {
    const oscillator::QbmSieveResult s = oscillator::qbm_sieve(M, w, {ratio, 1.0}, opt);
    lo = std::min(lo, s.state.dx2);
    hi = std::max(hi, s.state.dx2);
    sweep.push_back({{"ratio", ratio},
                     {"weights", {ratio, 1.0}},
                     {"dx2", s.state.dx2},
                     {"relative_deviation", std::abs(s.state.dx2 - pointer.dx2) / pointer.dx2},
                     {"converged", s.converged}});
  }

  Json report;
  report["experiment"] = "qbm-sieve";
  report["params"] = {{"M", M}, {"m", cfg.qbm.m}, {"N", cfg.qbm.N}, {"Omega", cfg.qbm.Omega}, {"omega", cfg.qbm.omega}};
  report["omega_tilde"] = w;
  report["weights"] = {cfg.qbm_weights.momentum, cfg.qbm_weights.position};
  report["analytic"] = std::move(analytic);
  report["optimizer"] = std::move(found);
  report["relative_deviation"] = {{"dx2", std::abs(r.state.dx2 - pointer.dx2) / pointer.dx2},
                                  {"dp2", std::abs(r.state.dp2 - pointer.dp2) / pointer.dp2}};
  report["weight_sweep"] = std::move(sweep);
  report["max_pairwise_dx2_deviation"] = (hi - lo) / lo;
  report["seed"] = cfg.seed;
  return report;
}

std::vector<OutputFile> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "fig1") {
    const std::string csv_path = cfg.output.value_or("fig1.csv");
    Fig1Output out = run_fig1(cfg);
    return {{csv_path, std::move(out.csv)}, {summary_path(csv_path), render(out.summary)}};
  }
  const std::string path = cfg.output.value_or(cfg.experiment + ".json");
  if (cfg.experiment == "short-time") return {{path, render(run_short_time(cfg))}};
  if (cfg.experiment == "spin-sieve") return {{path, render(run_spin_sieve(cfg))}};
  return {{path, render(run_qbm_sieve(cfg))}};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run a pointer-state experiment described by a JSON config."};
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_path;
  app.add_option("config", config_path, "JSON experiment config")->required();
  app.add_option("--set", overrides, "Override a config key, e.g. --set model.N=4")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--out", out_path, "Output path (overrides the config's output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config", "cannot open '" + config_path + "'");
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config", "'" + config_path + "' is not valid JSON");
    for (const auto& o : overrides) apply_override(doc, o);
    if (!out_path.empty()) doc["output"] = out_path;
    const ExperimentConfig cfg = parse_config(doc);

    for (const auto& file : run_experiment(cfg)) {
      std::ofstream os(file.path, std::ios::binary | std::ios::trunc);
      os << file.content;
      if (!os) throw ConfigError("output", "cannot write '" + file.path + "'");
      out << "wrote " << file.path << "\n";
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedModel& e) {
    err << "unsupported model: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace psieve::cli
