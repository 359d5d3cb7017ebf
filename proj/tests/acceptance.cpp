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
//
// End-to-end acceptance checks.  Each case prints a single PASS/FAIL line so
// the suite doubles as a human-readable report.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qdyn/criteria.hpp"
#include "qdyn/rng.hpp"
#include "qdyn/scenario.hpp"

using namespace qdyn;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Acc {
  std::string label;
  bool ok = true;
  explicit Acc(std::string l) : label(std::move(l)) {}
  ~Acc() {
    std::cout << "[acceptance] " << label << ": " << (ok ? "PASS" : "FAIL")
              << std::endl;
  }
};

#define ACC(acc, expr)      \
  do {                      \
    const bool v_ = (expr); \
    CHECK(v_);              \
    (acc).ok &= v_;         \
  } while (0)

TimeDependentGenerator sin_dephasing(double omega = 0.0) {
  return dephasing_generator(
      ScalarSignal::constant(omega),
      ScalarSignal{[](double t) { return Complex(std::sin(t), 0); },
                   [](double t) { return Complex(std::cos(t), 0); }, "sin(t)"});
}

double offdiag_factor_real(const Superoperator& s) {
  return s.apply(sigma_plus())(0, 1).real();
}

}  // namespace

TEST_CASE("dephasing markovian semigroup") {
  Acc acc("criterion 1 (dephasing gamma=1 markovian)");
  const auto gen = dephasing_generator(ScalarSignal::constant(1.0),
                                       ScalarSignal::constant(1.0));
  const TimeGrid grid(5.0, 5000);

  const auto report = divisibility_report(gen, grid, grid.dt());
  ACC(acc, report.verdict == Verdict::markovian);
  double g_worst = 0.0;
  for (double g : report.g_values) g_worst = std::max(g_worst, g);
  ACC(acc, g_worst <= 1e-8);

  const MapFamily fam = propagate(gen, grid);
  double off_err = 0.0;
  for (int k = 0; k <= 5000; ++k) {
    const double t = grid.node(k);
    const Complex expect = std::exp(Complex(-t, -t));  // e^{-i Omega_t - Gamma_t}
    off_err = std::max(off_err,
                       std::abs(fam.maps[k].apply(sigma_plus())(0, 1) - expect));
  }
  ACC(acc, off_err <= 1e-8);

  Rng rng(109);
  double defect = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k1 = int(rng.uniform() * 2500);
    const int k2 = int(rng.uniform() * 2500);
    defect = std::max(defect, (fam.maps[k1 + k2].m -
                               fam.maps[k1].m * fam.maps[k2].m).norm());
  }
  ACC(acc, defect <= 1e-8);
}

TEST_CASE("dephasing non-markovian revival") {
  Acc acc("criterion 2 (dephasing gamma=sin t non-markovian)");
  const auto gen = sin_dephasing();
  const TimeGrid grid(2.0 * M_PI, 512);
  const double dt = grid.dt();

  double g_err = 0.0;
  for (int k = 0; k <= 512; ++k) {
    const double t = grid.node(k);
    g_err = std::max(g_err, std::abs(g_measure(gen, t) -
                                     std::max(0.0, -std::sin(t))));
  }
  ACC(acc, g_err <= 2e-4);

  const auto report = divisibility_report(gen, grid, dt);
  ACC(acc, report.verdict == Verdict::non_markovian);
  REQUIRE_FALSE(report.violation_intervals.empty());
  ACC(acc, std::abs(report.violation_intervals.front().first - M_PI) <= 2 * dt);
  ACC(acc, std::abs(report.violation_intervals.back().second - 2.0 * M_PI) <=
               2 * dt);

  const MapFamily fam = propagate(gen, grid);
  const auto dist = trace_distance_series(fam, DensityMatrix(plus_projector()),
                                          DensityMatrix(minus_projector()));
  double d_err = 0.0;
  for (std::size_t k = 0; k < dist.values.size(); ++k) {
    d_err = std::max(d_err, std::abs(dist.values[k] -
                                     std::exp(-(1.0 - std::cos(dist.times[k])))));
  }
  ACC(acc, d_err <= 1e-6);
  ACC(acc, !dist.monotone);
  REQUIRE_FALSE(dist.violation_intervals.empty());
  ACC(acc, std::abs(dist.violation_intervals.front().first - M_PI) <= 2 * dt);
  ACC(acc, std::abs(dist.violation_intervals.back().second - 2.0 * M_PI) <=
               2 * dt);

  const auto neg = negativity_series(fam);
  double n_err = 0.0;
  for (std::size_t k = 0; k < neg.values.size(); ++k) {
    n_err = std::max(n_err,
                     std::abs(neg.values[k] -
                              0.5 * std::exp(-(1.0 - std::cos(neg.times[k])))));
  }
  ACC(acc, n_err <= 1e-6);
}

TEST_CASE("heisenberg picture norm decay") {
  Acc acc("criterion 3 (heisenberg norm e^{-Gamma_t})");
  {
    const MapFamily fam = propagate(
        dephasing_generator(ScalarSignal::zero(), ScalarSignal::constant(1.0)),
        TimeGrid(5.0, 2000));
    const auto series = heisenberg_norm_series(fam, sigma_plus());
    double err = 0.0;
    for (std::size_t k = 0; k < series.values.size(); ++k) {
      err = std::max(err,
                     std::abs(series.values[k] - std::exp(-series.times[k])));
    }
    ACC(acc, err <= 1e-6);
  }
  {
    const MapFamily fam = propagate(sin_dephasing(), TimeGrid(2.0 * M_PI, 512));
    const auto series = heisenberg_norm_series(fam, sigma_plus());
    double err = 0.0;
    for (std::size_t k = 0; k < series.values.size(); ++k) {
      err = std::max(err, std::abs(series.values[k] -
                                   std::exp(-(1.0 - std::cos(series.times[k])))));
    }
    ACC(acc, err <= 1e-6);
  }
}

TEST_CASE("microscopic model revival") {
  Acc acc("criterion 4 (sigma_z x sigma_z reduced dynamics)");
  MicroscopicModel model;
  model.d_system = 2;
  model.d_reservoir = 2;
  model.h_total = kron(sigma_z(), sigma_z());
  model.omega_r = plus_projector();

  const TimeGrid grid(2.0 * M_PI, 256);
  MapFamily fam = reduced_dynamics(model, grid);

  double err = 0.0;
  for (int k = 0; k <= 256; ++k) {
    const double t = grid.node(k);
    err = std::max(err, std::abs(fam.maps[k].apply(sigma_plus())(0, 1) -
                                 Complex(std::cos(2.0 * t), 0)));
  }
  ACC(acc, err <= 1e-8);

  fam.record_verdicts(1e-9, 1e-9);
  bool all_valid = true;
  for (int k = 0; k <= 256; ++k) {
    all_valid = all_valid && fam.cp_verdicts[k].is_cp && fam.tp_verdicts[k];
  }
  ACC(acc, all_valid);

  const auto dist = trace_distance_series(fam, DensityMatrix(plus_projector()),
                                          DensityMatrix(minus_projector()));
  ACC(acc, !dist.monotone && !dist.violation_intervals.empty());

  // SWAP/2 is a witness whose extended norm 1 + |cos 2t| revives
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  const auto ext = extended_norm_series(fam, {0.5 * swap});
  ACC(acc, !ext[0].monotone && !ext[0].violation_intervals.empty());

  // full revival (map back at the identity) at t = pi: the factor returns
  // to +1, excluding the endpoints where cos 2t = 1 trivially
  int best = 1;
  double best_mag = -2.0;
  for (int k = 1; k <= 255; ++k) {
    const double mag = offdiag_factor_real(fam.maps[k]);
    if (mag > best_mag + 1e-12) {
      best_mag = mag;
      best = k;
    }
  }
  ACC(acc, std::abs(best_mag - 1.0) <= 1e-10);
  ACC(acc, std::abs(grid.node(best) - M_PI) <= grid.dt());
}

TEST_CASE("commutative class cumulant solutions") {
  Acc acc("criterion 5 (10 random commutative families, d=3)");
  Rng rng(113);
  int disagreements = 0;
  for (int trial = 0; trial < 10; ++trial) {
    // PSD baseline with a small indefinite modulation: maps stay O(1) and
    // the cumulant is legitimate at some nodes and not at others.
    const Matrix g = rng.ginibre(2, 2);
    const Matrix a = 0.15 * g * g.adjoint();
    const Matrix b = 0.1 * rng.hermitian(2);
    SignalMatrix c(2, std::vector<ScalarSignal>(2));
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        const Complex ak = a(k, l), bk = b(k, l);
        c[k][l] = ScalarSignal{
            [ak, bk](double t) { return ak + bk * std::sin(t); },
            [bk](double t) { return bk * std::cos(t); }, "a+b sin t"};
      }
    }
    std::vector<ScalarSignal> h = {
        ScalarSignal::constant(rng.complex_normal()),
        ScalarSignal::constant(rng.complex_normal())};
    const auto gen = weyl_generator(3, c, h);

    const double t_end = 1.5;
    const MapFamily fam = propagate(gen, TimeGrid(t_end, 1500));
    const CumulantSolution sol = commutative_solve(gen, t_end);
    ACC(acc, (sol.map.m - fam.maps.back().m).norm() <= 1e-6);

    const TimeGrid check_grid(2.0 * M_PI, 16);
    const auto verdicts = check_cumulant_legitimacy(gen, check_grid);
    for (int k = 0; k < check_grid.n_nodes(); ++k) {
      const bool oracle =
          k == 0 ||
          is_legitimate_gksl(commutative_solve(gen, check_grid.node(k)).cumulant);
      if (verdicts[k] != oracle) ++disagreements;
    }
  }
  ACC(acc, disagreements == 0);
}

TEST_CASE("gksl decomposition round trip") {
  Acc acc("criterion 6 (50 random GKSL round trips)");
  Rng rng(127);
  bool round_trip_ok = true, dissipative_ok = true, flip_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = (trial % 2 == 0) ? 2 : 3;
    const Eigen::Index n = d * d - 1;
    GkslData data;
    data.hamiltonian = rng.hermitian(d);
    const Matrix g = rng.ginibre(n, n);
    data.rates = g * g.adjoint() / double(n);
    data.basis = gell_mann_basis(d);

    const Superoperator l = gksl_build(data);
    const auto dec = gksl_decompose(l, data.basis);
    const Matrix h_traceless =
        data.hamiltonian -
        (data.hamiltonian.trace() / double(d)) * Matrix::Identity(d, d);
    round_trip_ok = round_trip_ok &&
                    (dec.rates - data.rates).norm() <= 1e-10 &&
                    (dec.hamiltonian - h_traceless).norm() <= 1e-10;
    dissipative_ok = dissipative_ok && dissipativity_check(l);

    // flip the largest rate eigenvalue negative
    Eigen::SelfAdjointEigenSolver<Matrix> es(data.rates);
    Eigen::VectorXd ev = es.eigenvalues();
    Eigen::Index imax;
    ev.maxCoeff(&imax);
    ev(imax) = -ev(imax);
    GkslData bad = data;
    bad.rates = es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<Complex>() *
                es.eigenvectors().adjoint();
    const Superoperator lbad = gksl_build(bad);
    flip_ok = flip_ok && !dissipativity_check(lbad) && !is_legitimate_gksl(lbad);
  }
  ACC(acc, round_trip_ok);
  ACC(acc, dissipative_ok);
  ACC(acc, flip_ok);
}

TEST_CASE("pure decoherence map family") {
  Acc acc("criterion 7 (n_kl = e^{-|k-l| t} decoherence)");
  SignalMatrix n(3, std::vector<ScalarSignal>(3));
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const double rate = std::abs(k - l);
      n[k][l] = ScalarSignal{
          [rate](double t) { return Complex(std::exp(-rate * t), 0); },
          [rate](double t) { return Complex(-rate * std::exp(-rate * t), 0); },
          "exp(-|k-l| t)"};
    }
  }
  const auto gen = generator_from_map_family(n);
  const TimeGrid grid(1.0, 1000);
  const MapFamily fam = propagate(gen, grid);

  double err = 0.0;
  for (int node : {500, 1000}) {
    const double t = grid.node(node);
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        Matrix e_kl = Matrix::Zero(3, 3);
        e_kl(k, l) = 1;
        const Matrix img = fam.maps[node].apply(e_kl);
        const double expect = std::exp(-std::abs(k - l) * t);  // 1 on diagonal
        err = std::max(err, (img - expect * e_kl).norm());
      }
    }
  }
  ACC(acc, err <= 1e-6);
}

TEST_CASE("known-map calibration") {
  Acc acc("criterion 8 (transpose Choi, chain inequality, alpha -> 1)");
  Superoperator transpose = Superoperator::zero(2);
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      transpose.m(i * 2 + j, j * 2 + i) = 1.0;
    }
  }
  ACC(acc, std::abs(is_completely_positive(transpose).min_choi_eigenvalue +
                    1.0) <= 1e-12);

  Rng rng(131);
  bool chain_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho(rng.density_matrix(2));
    const DensityMatrix sig(rng.density_matrix(2));
    const double f = fidelity(rho, sig);
    const double dist = 0.5 * trace_norm(rho.mat() - sig.mat());
    chain_ok = chain_ok && (1.0 - f <= dist + 1e-9) &&
               (dist <= std::sqrt(1.0 - f * f) + 1e-9);
  }
  ACC(acc, chain_ok);

  const MapFamily frozen = propagate(
      dephasing_generator(ScalarSignal::zero(), ScalarSignal::zero()),
      TimeGrid(1.0, 2));
  const DensityMatrix rho(rng.density_matrix(2));
  const DensityMatrix sig(rng.density_matrix(2));
  const double vn =
      relative_entropy_series(frozen, rho, sig, EntropyKind::von_neumann)
          .values[0];
  const double renyi =
      relative_entropy_series(frozen, rho, sig, EntropyKind::renyi, 0.99)
          .values[0];
  ACC(acc, std::abs(vn - renyi) <= 1e-2);
}

TEST_CASE("cli determinism and diagnostics") {
  Acc acc("criterion 9 (CLI determinism + validate diagnostics)");
  const char* cli = std::getenv("QDYN_CLI");
  REQUIRE(cli != nullptr);
  const fs::path work = fs::temp_directory_path() / "qdyn_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  json cfg;
  cfg["schema_version"] = 1;
  cfg["d"] = 2;
  cfg["seed"] = 42;
  cfg["grid"] = {{"t_end", 6.283185307179586}, {"n_steps", 128}};
  cfg["generator"] = {{"class", "dephasing"}, {"gamma", "sin(t)"}};
  cfg["criteria"] =
      json::array({{{"name", "divisibility"}},
                   {{"name", "trace_distance"}},
                   {{"name", "extended_norm"}, {"n_random", 3}}});
  {
    std::ofstream f(work / "scenario.json");
    f << cfg.dump(2);
  }

  auto run = [&](const std::string& out) {
    const std::string cmd = std::string(cli) + " run " +
                            (work / "scenario.json").string() + " --out " +
                            (work / out).string();
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  ACC(acc, run("a") == kExitOk);
  ACC(acc, run("b") == kExitOk);

  bool identical = true;
  int n_csv = 0;
  for (const auto& entry : fs::directory_iterator(work / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++n_csv;
    std::ifstream fa(entry.path(), std::ios::binary);
    std::ifstream fb(work / "b" / entry.path().filename(), std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    identical = identical && fb.good() && sa.str() == sb.str();
  }
  ACC(acc, n_csv >= 3);
  ACC(acc, identical);

  json bad = cfg;
  bad["generator"]["gamma"] = "sin(";
  {
    std::ofstream f(work / "bad.json");
    f << bad.dump(2);
  }
  const std::string vcmd = std::string(cli) + " validate " +
                           (work / "bad.json").string() + " 2> " +
                           (work / "stderr.txt").string();
  ACC(acc, WEXITSTATUS(std::system(vcmd.c_str())) == kExitConfigError);
  std::ifstream diag(work / "stderr.txt");
  std::ostringstream text;
  text << diag.rdbuf();
  ACC(acc, text.str().find("column 4") != std::string::npos);
}
