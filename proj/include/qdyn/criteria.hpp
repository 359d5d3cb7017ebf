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

#pragma once

#include "qdyn/dynamics.hpp"

namespace qdyn {

enum class Monotone { decreasing, increasing };

/// A criterion value sampled over the grid, with a monotonicity verdict.
/// Steps whose forward difference breaks the expected direction by more
/// than slope_tol are collected into maximal violation intervals.
/// Non-finite values (support-violation sentinels) are excluded from the
/// verdict.
struct WitnessSeries {
  std::string name;
  std::vector<double> times;
  std::vector<double> values;
  Monotone expected = Monotone::decreasing;
  double slope_tol = 0.0;
  bool monotone = true;
  std::vector<std::pair<double, double>> violation_intervals;

  static WitnessSeries build(std::string name, std::vector<double> times,
                             std::vector<double> values, Monotone expected);
};

enum class Verdict { markovian, non_markovian, inconclusive };

std::string to_string(Verdict v);

struct DivisibilityReport {
  std::vector<double> times;           // interval start times
  std::vector<CpVerdict> interval_cp;  // verdict on V_{t+delta,t}
  std::vector<double> g_values;        // g_t per node
  double delta = 0.0;
  double cp_tol = 0.0;
  double g_tol = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double worst_choi_eigenvalue = 0.0;
  double worst_choi_time = 0.0;
  double g_max = 0.0;
  std::vector<std::pair<double, double>> violation_intervals;
};

/// One-sided divisibility measure
/// g_t = lim_{eps->0+} (||P+ + eps (id otimes L_t) P+||_1 - 1) / eps,
/// evaluated by two-point Richardson extrapolation in eps over
/// {1e-5, 1e-6}; results below 1e-8 are reported as exactly 0.
double g_measure(const TimeDependentGenerator& l, double t);

/// Per-interval CP test of V_{t+delta,t} combined with a g_t sweep.
/// markovian requires every interval CP and max g_t <= g_tol; clear
/// violations (beyond 10x the tolerances) give non_markovian, marginal
/// ones inconclusive.
DivisibilityReport divisibility_report(const TimeDependentGenerator& l,
                                       const TimeGrid& grid, double delta,
                                       double cp_tol = 1e-9,
                                       double g_tol = 1e-6);

/// D(t) = 1/2 ||Lambda_t rho - Lambda_t sigma||_1, expected decreasing.
WitnessSeries trace_distance_series(const MapFamily& family,
                                    const DensityMatrix& rho,
                                    const DensityMatrix& sigma);

/// Uhlmann fidelity series, expected increasing.
WitnessSeries fidelity_series(const MapFamily& family,
                              const DensityMatrix& rho,
                              const DensityMatrix& sigma);

enum class EntropyKind { renyi, tsallis, von_neumann };

/// Renyi (alpha in [0,1) u (1,2]), Tsallis (q in [0,1)) or von Neumann
/// relative entropy series, expected decreasing.  Support violations give
/// +inf sentinels.
WitnessSeries relative_entropy_series(const MapFamily& family,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& sigma,
                                      EntropyKind kind, double param = 1.0);

/// ||dual(Lambda_t)(a)|| (operator norm), expected decreasing.
WitnessSeries heisenberg_norm_series(const MapFamily& family, const Matrix& a);

/// ||(id otimes Lambda_t) W||_1 per supplied Hermitian W, each expected
/// decreasing.
std::vector<WitnessSeries> extended_norm_series(
    const MapFamily& family, const std::vector<Matrix>& w_set);

/// Negativity of (Lambda_t otimes id) W0, expected decreasing.  W0 defaults
/// to the maximally entangled projector when not supplied.
WitnessSeries negativity_series(const MapFamily& family, const Matrix& w0);
WitnessSeries negativity_series(const MapFamily& family);

}  // namespace qdyn
