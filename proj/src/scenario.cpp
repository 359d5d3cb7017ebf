// Copyright 2026 The qdyn authors
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

#include "qdyn/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include "qdyn/rng.hpp"

namespace qdyn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kGeneratorClasses = {
    "dephasing", "weyl", "gksl", "from_map_family", "microscopic"};
const std::set<std::string> kCriterionNames = {
    "divisibility",    "trace_distance", "fidelity",  "relative_entropy",
    "heisenberg_norm", "extended_norm",  "negativity"};

ScalarSignal signal_from_text(const std::string& text) {
  expr::Expression e;
  try {
    e = expr::Expression::parse(text);
  } catch (const expr::ParseError& err) {
    throw ConfigError("bad expression \"" + text + "\": " + err.what());
  }
  ScalarSignal s;
  s.f = [e](double t) { return Complex(e.eval(t), 0.0); };
  s.description = text;
  return s;
}

Complex entry_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ConfigError("matrix entry must be a number or [re, im]");
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a matrix");
  const Eigen::Index rows = Eigen::Index(j.size());
  const Eigen::Index cols = Eigen::Index(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (Eigen::Index(j[r].size()) != cols) {
      throw ConfigError("ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry_from_json(j[r][c]);
  }
  return m;
}

SignalMatrix signal_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("expected a matrix of expressions");
  }
  SignalMatrix out;
  for (const auto& row : j) {
    if (!row.is_array()) throw ConfigError("expected a matrix of expressions");
    std::vector<ScalarSignal> r;
    for (const auto& cell : row) {
      if (!cell.is_string()) throw ConfigError("expression must be a string");
      r.push_back(signal_from_text(cell.get<std::string>()));
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_line(std::ofstream& f, double t, double v, int flag) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", t, v, flag);
  f << buf;
}

bool inside_any(const std::vector<std::pair<double, double>>& intervals,
                double t) {
  for (const auto& [a, b] : intervals) {
    if (t >= a && t <= b) return true;
  }
  return false;
}

void write_witness_csv(const fs::path& dir, const WitnessSeries& s) {
  std::ofstream f(dir / (s.name + ".csv"), std::ios::binary);
  for (std::size_t k = 0; k < s.times.size(); ++k) {
    write_line(f, s.times[k], s.values[k],
               inside_any(s.violation_intervals, s.times[k]) ? 1 : 0);
  }
}

void write_gnuplot_script(const fs::path& dir, const std::string& name) {
  std::ofstream f(dir / (name + ".gp"), std::ios::binary);
  f << "set datafile separator ','\n"
    << "set terminal pngcairo size 900,600\n"
    << "set output '" << name << ".png'\n"
    << "set xlabel 't'\n"
    << "set ylabel '" << name << "'\n"
    << "plot '" << name << ".csv' using 1:2 with lines title '" << name
    << "'\n";
}

json intervals_to_json(const std::vector<std::pair<double, double>>& iv) {
  json out = json::array();
  for (const auto& [a, b] : iv) out.push_back({a, b});
  return out;
}

std::pair<DensityMatrix, DensityMatrix> default_state_pair(Eigen::Index d,
                                                           Rng& rng) {
  if (d == 2) {
    return {DensityMatrix(plus_projector()), DensityMatrix(minus_projector())};
  }
  // Two random orthogonal pure states.
  Matrix g = rng.ginibre(d, 2);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, 2);
  return {DensityMatrix((q.col(0) * q.col(0).adjoint()).eval()),
          DensityMatrix((q.col(1) * q.col(1).adjoint()).eval())};
}

std::pair<DensityMatrix, DensityMatrix> state_pair_for(
    const json& params, Eigen::Index d, Rng& rng) {
  if (params.contains("rho") != params.contains("sigma")) {
    throw ConfigError("state pair: supply both rho and sigma or neither");
  }
  if (params.contains("rho")) {
    Matrix r = matrix_from_json(params["rho"]);
    Matrix s = matrix_from_json(params["sigma"]);
    if (r.rows() != d || s.rows() != d) {
      throw ConfigError("state pair: dimension mismatch with system");
    }
    return {DensityMatrix(r), DensityMatrix(s)};
  }
  return default_state_pair(d, rng);
}

}  // namespace

double ScenarioConfig::tol(const std::string& key, double fallback) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig c;
  try {
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1) {
      throw ConfigError("schema_version must be 1");
    }
    c.d = j.value("d", 2);
    if (c.d < 2) throw ConfigError("d must be >= 2");
    c.seed = j.value("seed", std::uint64_t(0));

    const json& grid = j.at("grid");
    c.grid = TimeGrid(grid.at("t_end").get<double>(),
                      grid.at("n_steps").get<int>());

    const json& gen = j.at("generator");
    c.generator_class = gen.at("class").get<std::string>();
    if (!kGeneratorClasses.count(c.generator_class)) {
      throw ConfigError("unknown generator class '" + c.generator_class + "'");
    }
    c.generator_params = gen;

    for (const auto& crit : j.value("criteria", json::array())) {
      CriterionSpec spec;
      spec.name = crit.at("name").get<std::string>();
      if (!kCriterionNames.count(spec.name)) {
        throw ConfigError("unknown criterion '" + spec.name + "'");
      }
      spec.params = crit;
      c.criteria.push_back(std::move(spec));
    }

    const json tols = j.value("tolerances", json::object());
    for (const auto& [key, val] : tols.items()) {
      c.tolerances[key] = val.get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  // Static validation: expressions parse, shapes are consistent.
  if (c.generator_class == "microscopic") {
    c.build_microscopic();
    for (const auto& crit : c.criteria) {
      if (crit.name == "divisibility") {
        throw ConfigError("divisibility needs a generator-based scenario");
      }
    }
  } else {
    c.build_generator();
  }
  return c;
}

ScenarioConfig ScenarioConfig::from_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

std::optional<TimeDependentGenerator> ScenarioConfig::build_generator() const {
  const json& p = generator_params;
  try {
    if (generator_class == "dephasing") {
      if (d != 2) throw ConfigError("dephasing requires d = 2");
      return dephasing_generator(
          signal_from_text(p.value("omega", "0")),
          signal_from_text(p.at("gamma").get<std::string>()));
    }
    if (generator_class == "weyl") {
      SignalMatrix c = signal_matrix_from_json(p.at("c"));
      std::vector<ScalarSignal> h;
      for (const auto& cell : p.value("h", json::array())) {
        h.push_back(signal_from_text(cell.get<std::string>()));
      }
      while (Eigen::Index(h.size()) < d - 1) h.push_back(ScalarSignal::zero());
      return weyl_generator(d, std::move(c), std::move(h));
    }
    if (generator_class == "gksl") {
      GkslData data;
      data.hamiltonian = p.contains("H") ? matrix_from_json(p["H"])
                                         : Matrix::Zero(d, d).eval();
      data.rates = matrix_from_json(p.at("rates"));
      data.basis = gell_mann_basis(d);
      const Superoperator l = gksl_build(data);
      TimeDependentGenerator gen;
      gen.d = d;
      gen.declared_class = GeneratorClass::gksl;
      gen.rule = [l](double) { return l; };
      return gen;
    }
    if (generator_class == "from_map_family") {
      SignalMatrix n = signal_matrix_from_json(p.at("n"));
      std::optional<SignalMatrix> theta;
      if (p.contains("theta_offdiag")) {
        theta = signal_matrix_from_json(p["theta_offdiag"]);
      }
      return generator_from_map_family(std::move(n), std::move(theta));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed generator spec: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid generator spec: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("invalid generator spec: ") + e.what());
  }
  return std::nullopt;  // microscopic
}

std::optional<MicroscopicModel> ScenarioConfig::build_microscopic() const {
  if (generator_class != "microscopic") return std::nullopt;
  const json& p = generator_params;
  try {
    MicroscopicModel m;
    m.d_system = d;
    m.d_reservoir = p.at("d_reservoir").get<Eigen::Index>();
    m.h_total = matrix_from_json(p.at("H_total"));
    m.omega_r = matrix_from_json(p.at("omega_R"));
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed microscopic spec: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid microscopic spec: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("invalid microscopic spec: ") + e.what());
  }
}

int run_scenario(const ScenarioConfig& config, const fs::path& out_dir,
                 bool fail_on_nonmarkovian) {
  try {
    fs::create_directories(out_dir);

    std::optional<TimeDependentGenerator> gen;
    MapFamily family;
    if (config.generator_class == "microscopic") {
      family = reduced_dynamics(*config.build_microscopic(), config.grid);
    } else {
      gen = config.build_generator();
      family = propagate(*gen, config.grid);
    }
    const double cp_tol = config.tol("cp_tol", 1e-9);
    const double g_tol = config.tol("g_tol", 1e-6);
    family.record_verdicts(cp_tol, config.tol("tp_tol", 1e-9));

    // Map validity report: per-node min Choi eigenvalue and TP flag.
    {
      std::ofstream f(out_dir / "map_validity.csv", std::ios::binary);
      for (int k = 0; k < config.grid.n_nodes(); ++k) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d\n",
                      config.grid.node(k),
                      family.cp_verdicts[k].min_choi_eigenvalue,
                      family.cp_verdicts[k].is_cp ? 1 : 0,
                      family.tp_verdicts[k] ? 1 : 0);
        f << buf;
      }
    }

    Rng rng(config.seed);
    std::optional<DivisibilityReport> div;
    std::vector<WitnessSeries> witnesses;

    for (const auto& crit : config.criteria) {
      Rng crit_rng = rng.split();
      if (crit.name == "divisibility") {
        if (!gen) throw ConfigError("divisibility needs a local generator");
        const double delta = crit.params.value("delta", config.grid.dt());
        div = divisibility_report(*gen, config.grid, delta, cp_tol, g_tol);
      } else if (crit.name == "trace_distance") {
        auto [rho, sigma] = state_pair_for(crit.params, config.d, crit_rng);
        witnesses.push_back(trace_distance_series(family, rho, sigma));
      } else if (crit.name == "fidelity") {
        auto [rho, sigma] = state_pair_for(crit.params, config.d, crit_rng);
        witnesses.push_back(fidelity_series(family, rho, sigma));
      } else if (crit.name == "relative_entropy") {
        auto [rho, sigma] = state_pair_for(crit.params, config.d, crit_rng);
        const std::string kind = crit.params.value("kind", "von_neumann");
        if (kind == "renyi") {
          witnesses.push_back(relative_entropy_series(
              family, rho, sigma, EntropyKind::renyi,
              crit.params.value("alpha", 0.5)));
        } else if (kind == "tsallis") {
          witnesses.push_back(relative_entropy_series(
              family, rho, sigma, EntropyKind::tsallis,
              crit.params.value("q", 0.5)));
        } else if (kind == "von_neumann") {
          witnesses.push_back(relative_entropy_series(
              family, rho, sigma, EntropyKind::von_neumann));
        } else {
          throw ConfigError("unknown relative entropy kind '" + kind + "'");
        }
      } else if (crit.name == "heisenberg_norm") {
        Matrix a;
        if (crit.params.contains("a")) {
          a = matrix_from_json(crit.params["a"]);
        } else {
          a = Matrix::Zero(config.d, config.d);
          a(0, config.d - 1) = 1;  // sigma_+ for d = 2
        }
        witnesses.push_back(heisenberg_norm_series(family, a));
      } else if (crit.name == "extended_norm") {
        const int n_random = crit.params.value("n_random", 20);
        std::vector<Matrix> ws;
        ws.push_back(max_entangled_projector(config.d));
        for (int k = 0; k < n_random; ++k) {
          Matrix w = crit_rng.hermitian(config.d * config.d);
          ws.push_back(w / trace_norm(w));
        }
        for (auto& s : extended_norm_series(family, ws)) {
          witnesses.push_back(std::move(s));
        }
      } else if (crit.name == "negativity") {
        if (crit.params.contains("W0")) {
          witnesses.push_back(
              negativity_series(family, matrix_from_json(crit.params["W0"])));
        } else {
          witnesses.push_back(negativity_series(family));
        }
      }
    }

    json violations = json::object();
    bool witness_violation = false;
    for (const auto& s : witnesses) {
      write_witness_csv(out_dir, s);
      write_gnuplot_script(out_dir, s.name);
      violations[s.name] = intervals_to_json(s.violation_intervals);
      if (!s.monotone) witness_violation = true;
    }

    double worst_choi = 0.0;
    double g_max = 0.0;
    for (const auto& v : family.cp_verdicts) {
      worst_choi = std::min(worst_choi, v.min_choi_eigenvalue);
    }
    Verdict verdict = Verdict::inconclusive;
    if (div) {
      // g series as its own witness file.
      {
        std::ofstream f(out_dir / "g_measure.csv", std::ios::binary);
        for (int k = 0; k < config.grid.n_nodes(); ++k) {
          write_line(f, config.grid.node(k), div->g_values[k],
                     div->g_values[k] > div->g_tol ? 1 : 0);
        }
      }
      write_gnuplot_script(out_dir, "g_measure");
      json dj;
      dj["delta"] = div->delta;
      dj["cp_tol"] = div->cp_tol;
      dj["g_tol"] = div->g_tol;
      dj["verdict"] = to_string(div->verdict);
      dj["g_max"] = div->g_max;
      dj["worst_choi_eigenvalue"] = div->worst_choi_eigenvalue;
      dj["worst_choi_time"] = div->worst_choi_time;
      dj["violation_intervals"] = intervals_to_json(div->violation_intervals);
      json per_interval = json::array();
      for (std::size_t k = 0; k < div->interval_cp.size(); ++k) {
        per_interval.push_back(
            {{"t", div->times[k]},
             {"min_choi_eigenvalue", div->interval_cp[k].min_choi_eigenvalue},
             {"is_cp", div->interval_cp[k].is_cp}});
      }
      dj["intervals"] = per_interval;
      std::ofstream f(out_dir / "divisibility_report.json", std::ios::binary);
      f << dj.dump(2) << "\n";

      worst_choi = std::min(worst_choi, div->worst_choi_eigenvalue);
      g_max = div->g_max;
      verdict = div->verdict;
      violations["divisibility"] = intervals_to_json(div->violation_intervals);
    }
    if (witness_violation) verdict = Verdict::non_markovian;

    json summary;
    summary["verdict"] = to_string(verdict);
    summary["g_max"] = g_max;
    summary["worst_choi_eigenvalue"] = worst_choi;
    summary["violation_intervals"] = violations;
    summary["seed"] = config.seed;
    summary["tolerances"] = {{"cp_tol", cp_tol},
                             {"g_tol", g_tol},
                             {"tp_tol", config.tol("tp_tol", 1e-9)}};
    {
      std::ofstream f(out_dir / "summary.json", std::ios::binary);
      f << summary.dump(2) << "\n";
    }

    if (fail_on_nonmarkovian && verdict == Verdict::non_markovian) {
      return kExitNonMarkovian;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}

int validate_scenario_file(const fs::path& path) {
  try {
    ScenarioConfig::from_file(path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  std::cout << "ok\n";
  return kExitOk;
}

}  // namespace qdyn
