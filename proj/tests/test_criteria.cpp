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

#include <doctest.h>

#include "qdyn/criteria.hpp"
#include "qdyn/rng.hpp"

using namespace qdyn;

static TimeDependentGenerator const_dephasing(double gamma) {
  return dephasing_generator(ScalarSignal::zero(),
                             ScalarSignal::constant(gamma));
}

static TimeDependentGenerator sin_dephasing() {
  return dephasing_generator(
      ScalarSignal::zero(),
      ScalarSignal{[](double t) { return Complex(std::sin(t), 0); }, nullptr,
                   "sin(t)"});
}

static MapFamily dephasing_family(double gamma, double t_end = 2.0,
                                  int steps = 400) {
  return propagate(const_dephasing(gamma), TimeGrid(t_end, steps));
}

TEST_CASE("witness series slope detection") {
  std::vector<double> times = {0, 1, 2, 3, 4};
  const auto good = WitnessSeries::build("w", times, {4, 3, 2, 2, 1},
                                         Monotone::decreasing);
  CHECK(good.monotone);
  CHECK(good.violation_intervals.empty());

  const auto bad = WitnessSeries::build("w", times, {4, 3, 5, 6, 1},
                                        Monotone::decreasing);
  CHECK_FALSE(bad.monotone);
  REQUIRE(bad.violation_intervals.size() == 1);
  CHECK(bad.violation_intervals[0].first == doctest::Approx(1.0));
  CHECK(bad.violation_intervals[0].second == doctest::Approx(3.0));

  const auto up = WitnessSeries::build("w", times, {0, 1, 2, 3, 4},
                                       Monotone::increasing);
  CHECK(up.monotone);

  // non-finite sentinels do not trigger violations
  const double inf = std::numeric_limits<double>::infinity();
  const auto holes = WitnessSeries::build("w", times, {4, inf, 2, inf, 1},
                                          Monotone::decreasing);
  CHECK(holes.monotone);
}

TEST_CASE("g measure") {
  CHECK(g_measure(const_dephasing(0.0), 0.5) == doctest::Approx(0.0));
  CHECK(g_measure(const_dephasing(1.0), 0.5) == doctest::Approx(0.0));
  CHECK(g_measure(const_dephasing(-1.0), 0.5) == doctest::Approx(1.0).epsilon(1e-4));
  // gamma = sin t gives g = max(0, -sin t)
  CHECK(g_measure(sin_dephasing(), 0.5 * M_PI) == doctest::Approx(0.0));
  CHECK(g_measure(sin_dephasing(), 1.5 * M_PI) ==
        doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("g measure agrees with a direct perturbed-projector oracle") {
  const auto gen = sin_dephasing();
  const double t = 4.0;
  const Matrix p_plus = max_entangled_projector(2);
  const double eps = 1e-7;
  const Matrix pert = p_plus + eps * apply_extended(gen.at(t), p_plus);
  const double oracle = (trace_norm(pert) - 1.0) / eps;
  CHECK(g_measure(gen, t) == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("divisibility report") {
  const TimeGrid grid(2.0 * M_PI, 64);
  const double delta = grid.dt();

  const auto mk = divisibility_report(const_dephasing(1.0), grid, delta);
  CHECK(mk.verdict == Verdict::markovian);
  CHECK(mk.g_max == doctest::Approx(0.0));
  CHECK(mk.violation_intervals.empty());

  const auto nm = divisibility_report(sin_dephasing(), grid, delta);
  CHECK(nm.verdict == Verdict::non_markovian);
  CHECK(nm.g_max == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE_FALSE(nm.violation_intervals.empty());
  // the bad region is where sin t < 0, i.e. roughly (pi, 2pi)
  CHECK(nm.violation_intervals.front().first ==
        doctest::Approx(M_PI).epsilon(0.05));
  CHECK(nm.worst_choi_eigenvalue < 0.0);
  CHECK(nm.worst_choi_time > M_PI);

  const auto up = divisibility_report(const_dephasing(-1.0), TimeGrid(1.0, 16),
                                      1.0 / 16.0);
  CHECK(up.verdict == Verdict::non_markovian);

  CHECK_THROWS_AS(divisibility_report(sin_dephasing(), grid, 10.0 * delta),
                  std::invalid_argument);
}

TEST_CASE("trace distance series") {
  const MapFamily fam = dephasing_family(1.0);
  const DensityMatrix rho(plus_projector());
  const DensityMatrix sig(minus_projector());
  const auto series = trace_distance_series(fam, rho, sig);
  CHECK(series.monotone);
  REQUIRE(series.values.size() == fam.maps.size());
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    CHECK(series.values[k] == doctest::Approx(std::exp(-series.times[k])));
  }
  // contractivity: never above the initial distance
  for (double v : series.values) CHECK(v <= series.values[0] + 1e-12);
}

TEST_CASE("trace distance revival is flagged") {
  const MapFamily fam =
      propagate(sin_dephasing(), TimeGrid(2.0 * M_PI, 128));
  const auto series = trace_distance_series(fam, DensityMatrix(plus_projector()),
                                            DensityMatrix(minus_projector()));
  CHECK_FALSE(series.monotone);
  REQUIRE_FALSE(series.violation_intervals.empty());
  CHECK(series.violation_intervals.front().first ==
        doctest::Approx(M_PI).epsilon(0.05));
}

TEST_CASE("fidelity series") {
  const MapFamily fam = dephasing_family(1.0);
  const auto series = fidelity_series(fam, DensityMatrix(plus_projector()),
                                      DensityMatrix(minus_projector()));
  CHECK(series.expected == Monotone::increasing);
  CHECK(series.monotone);
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    CHECK(series.values[k] ==
          doctest::Approx(1.0 - std::exp(-2.0 * series.times[k])).epsilon(1e-6));
  }
}

TEST_CASE("relative entropy values and kinds") {
  // frozen family: the series is constant at the initial entropy
  const MapFamily fam = propagate(const_dephasing(0.0), TimeGrid(1.0, 4));
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  const DensityMatrix rho(p0);
  const DensityMatrix max_mixed(0.5 * Matrix::Identity(2, 2));

  const auto vn = relative_entropy_series(fam, rho, max_mixed,
                                          EntropyKind::von_neumann);
  for (double v : vn.values) CHECK(v == doctest::Approx(std::log(2.0)));

  // Renyi at alpha -> 1 approaches the von Neumann value
  const auto renyi = relative_entropy_series(fam, rho, max_mixed,
                                             EntropyKind::renyi, 0.999);
  CHECK(renyi.values[0] == doctest::Approx(std::log(2.0)).epsilon(1e-3));

  // Renyi alpha = 2 on commuting states: log sum p^2/q
  const auto renyi2 = relative_entropy_series(fam, rho, max_mixed,
                                              EntropyKind::renyi, 2.0);
  CHECK(renyi2.values[0] == doctest::Approx(std::log(2.0)));

  // Tsallis q in [0,1): (1 - sum p^q q^{1-q}) / (1 - q)
  const double q = 0.5;
  const auto tsallis = relative_entropy_series(fam, rho, max_mixed,
                                               EntropyKind::tsallis, q);
  CHECK(tsallis.values[0] ==
        doctest::Approx((1.0 - std::sqrt(0.5)) / (1.0 - q)));

  // support violation: sigma pure, rho full rank -> +inf sentinel
  const auto broken = relative_entropy_series(fam, max_mixed, rho,
                                              EntropyKind::von_neumann);
  CHECK(std::isinf(broken.values[0]));
  CHECK(broken.monotone);  // sentinels are excluded from the verdict

  CHECK_THROWS_AS(relative_entropy_series(fam, rho, max_mixed,
                                          EntropyKind::renyi, 3.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(relative_entropy_series(fam, rho, max_mixed,
                                          EntropyKind::tsallis, 1.5),
                  std::invalid_argument);
}

TEST_CASE("relative entropy decreases under markovian dephasing") {
  const MapFamily fam = dephasing_family(1.0);
  Rng rng(89);
  const DensityMatrix rho(rng.density_matrix(2));
  const DensityMatrix sig(rng.density_matrix(2));
  const auto series =
      relative_entropy_series(fam, rho, sig, EntropyKind::von_neumann);
  CHECK(series.monotone);
}

TEST_CASE("heisenberg norm series") {
  const MapFamily fam = dephasing_family(1.0);
  const auto series = heisenberg_norm_series(fam, sigma_plus());
  CHECK(series.monotone);
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    CHECK(series.values[k] ==
          doctest::Approx(std::exp(-series.times[k])).epsilon(1e-6));
  }
}

TEST_CASE("extended norm series") {
  const MapFamily fam = dephasing_family(1.0);
  Rng rng(97);
  std::vector<Matrix> w_set = {max_entangled_projector(2), rng.hermitian(4)};
  const auto series = extended_norm_series(fam, w_set);
  REQUIRE(series.size() == 2);
  for (const auto& s : series) {
    CHECK(s.monotone);
    CHECK(s.values.size() == fam.maps.size());
  }
  // trace-preserving positive evolution keeps the projector norm at 1
  for (double v : series[0].values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("negativity series") {
  const MapFamily fam = dephasing_family(1.0);
  const auto series = negativity_series(fam);
  CHECK(series.monotone);
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    CHECK(series.values[k] ==
          doctest::Approx(0.5 * std::exp(-series.times[k])).epsilon(1e-6));
  }

  const MapFamily revive =
      propagate(sin_dephasing(), TimeGrid(2.0 * M_PI, 128));
  CHECK_FALSE(negativity_series(revive).monotone);
}

TEST_CASE("markovian semigroup passes every witness") {
  const MapFamily fam = dephasing_family(0.7, 3.0, 300);
  Rng rng(101);
  const DensityMatrix rho(rng.density_matrix(2));
  const DensityMatrix sig(rng.density_matrix(2));
  CHECK(trace_distance_series(fam, rho, sig).monotone);
  CHECK(fidelity_series(fam, rho, sig).monotone);
  CHECK(relative_entropy_series(fam, rho, sig, EntropyKind::von_neumann)
            .monotone);
  CHECK(heisenberg_norm_series(fam, sigma_plus()).monotone);
  CHECK(negativity_series(fam).monotone);
}
