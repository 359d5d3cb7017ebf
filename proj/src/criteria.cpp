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

#include "qdyn/criteria.hpp"

#include <cmath>
#include <limits>

namespace qdyn {

static constexpr double kInf = std::numeric_limits<double>::infinity();

WitnessSeries WitnessSeries::build(std::string name, std::vector<double> times,
                                   std::vector<double> values,
                                   Monotone expected) {
  WitnessSeries s;
  s.name = std::move(name);
  s.times = std::move(times);
  s.values = std::move(values);
  s.expected = expected;

  double max_abs = 0.0;
  for (double v : s.values) {
    if (std::isfinite(v)) max_abs = std::max(max_abs, std::abs(v));
  }
  s.slope_tol = 1e-7 * (max_abs + 1.0);

  bool in_run = false;
  double run_start = 0.0;
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k) {
    const double v0 = s.values[k];
    const double v1 = s.values[k + 1];
    bool violating = false;
    if (std::isfinite(v0) && std::isfinite(v1)) {
      const double diff = v1 - v0;
      violating = (s.expected == Monotone::decreasing)
                      ? diff > s.slope_tol
                      : diff < -s.slope_tol;
    }
    if (violating && !in_run) {
      in_run = true;
      run_start = s.times[k];
    } else if (!violating && in_run) {
      in_run = false;
      s.violation_intervals.emplace_back(run_start, s.times[k]);
    }
  }
  if (in_run) {
    s.violation_intervals.emplace_back(run_start, s.times.back());
  }
  s.monotone = s.violation_intervals.empty();
  return s;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::markovian: return "markovian";
    case Verdict::non_markovian: return "non_markovian";
    default: return "inconclusive";
  }
}

double g_measure(const TimeDependentGenerator& l, double t) {
  const Matrix p_plus = max_entangled_projector(l.d);
  const Matrix perturbation = apply_extended(l.at(t), p_plus);
  auto g_at = [&](double eps) {
    return (trace_norm(p_plus + eps * perturbation) - 1.0) / eps;
  };
  const double e1 = 1e-5, e2 = 1e-6;
  const double g = (e1 * g_at(e2) - e2 * g_at(e1)) / (e1 - e2);
  if (g < 1e-8) return 0.0;
  return g;
}

DivisibilityReport divisibility_report(const TimeDependentGenerator& l,
                                       const TimeGrid& grid, double delta,
                                       double cp_tol, double g_tol) {
  if (!(delta > 0.0) || delta > grid.dt() * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "divisibility_report: need 0 < delta <= grid spacing");
  }
  DivisibilityReport rep;
  rep.delta = delta;
  rep.cp_tol = cp_tol;
  rep.g_tol = g_tol;
  rep.worst_choi_eigenvalue = kInf;

  std::vector<bool> node_fails(grid.n_nodes(), false);
  for (int k = 0; k < grid.n_nodes(); ++k) {
    const double t = grid.node(k);
    rep.g_values.push_back(g_measure(l, t));
    if (k < grid.n_steps) {
      rep.times.push_back(t);
      const Superoperator v = propagator(l, t, t + delta, 10);
      const CpVerdict cp = is_completely_positive(v, cp_tol);
      rep.interval_cp.push_back(cp);
      if (cp.min_choi_eigenvalue < rep.worst_choi_eigenvalue) {
        rep.worst_choi_eigenvalue = cp.min_choi_eigenvalue;
        rep.worst_choi_time = t;
      }
      if (!cp.is_cp) node_fails[k] = true;
    }
    if (rep.g_values.back() > g_tol) node_fails[k] = true;
  }
  rep.g_max = *std::max_element(rep.g_values.begin(), rep.g_values.end());

  bool in_run = false;
  double run_start = 0.0;
  for (int k = 0; k < grid.n_nodes(); ++k) {
    if (node_fails[k] && !in_run) {
      in_run = true;
      run_start = grid.node(k);
    } else if (!node_fails[k] && in_run) {
      in_run = false;
      rep.violation_intervals.emplace_back(run_start, grid.node(k));
    }
  }
  if (in_run) rep.violation_intervals.emplace_back(run_start, grid.t_end);

  const bool any_fail = !rep.violation_intervals.empty();
  const bool clear_fail =
      rep.worst_choi_eigenvalue < -10.0 * cp_tol || rep.g_max > 10.0 * g_tol;
  rep.verdict = !any_fail ? Verdict::markovian
                          : (clear_fail ? Verdict::non_markovian
                                        : Verdict::inconclusive);
  return rep;
}

static std::vector<double> node_times(const MapFamily& family) {
  std::vector<double> t(family.grid.n_nodes());
  for (int k = 0; k < family.grid.n_nodes(); ++k) t[k] = family.grid.node(k);
  return t;
}

WitnessSeries trace_distance_series(const MapFamily& family,
                                    const DensityMatrix& rho,
                                    const DensityMatrix& sigma) {
  if (rho.dim() != family.d || sigma.dim() != family.d) {
    throw DimensionError("trace_distance_series: state dimension mismatch");
  }
  const Matrix diff = rho.mat() - sigma.mat();
  std::vector<double> values;
  values.reserve(family.maps.size());
  for (const auto& s : family.maps) {
    values.push_back(0.5 * trace_norm(s.apply(diff)));
  }
  return WitnessSeries::build("trace_distance", node_times(family),
                              std::move(values), Monotone::decreasing);
}

// Clip tiny negatives from propagated states before spectral formulas.
static DensityMatrix evolve_state(const Superoperator& s, const Matrix& rho) {
  Matrix out = s.apply(rho);
  out = 0.5 * (out + out.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(out);
  RealVector vals = es.eigenvalues().cwiseMax(0.0);
  vals /= vals.sum();
  return DensityMatrix(es.eigenvectors() * vals.asDiagonal() *
                       es.eigenvectors().adjoint());
}

WitnessSeries fidelity_series(const MapFamily& family,
                              const DensityMatrix& rho,
                              const DensityMatrix& sigma) {
  std::vector<double> values;
  values.reserve(family.maps.size());
  for (const auto& s : family.maps) {
    values.push_back(fidelity(evolve_state(s, rho.mat()),
                              evolve_state(s, sigma.mat())));
  }
  return WitnessSeries::build("fidelity", node_times(family),
                              std::move(values), Monotone::increasing);
}

// Relative entropies from the two spectral decompositions; eigenvalues
// below kEigClip count as outside the support.
static constexpr double kEigClip = 1e-12;

static double relative_entropy_value(const Matrix& rho, const Matrix& sigma,
                                     EntropyKind kind, double param) {
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const RealVector p = er.eigenvalues().cwiseMax(0.0);
  const RealVector q = es.eigenvalues().cwiseMax(0.0);
  // overlap(i, j) = |<r_i|s_j>|^2
  const Matrix cross = er.eigenvectors().adjoint() * es.eigenvectors();
  const Eigen::MatrixXd overlap = cross.cwiseAbs2();

  if (kind == EntropyKind::von_neumann) {
    double s_rho = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (p(i) > kEigClip) s_rho += p(i) * std::log(p(i));
    }
    double s_cross = 0.0;
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      double weight = 0.0;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        weight += p(i) * overlap(i, j);
      }
      if (q(j) > kEigClip) {
        s_cross += weight * std::log(q(j));
      } else if (weight > 1e-10) {
        return kInf;  // supp(rho) not contained in supp(sigma)
      }
    }
    return std::max(s_rho - s_cross, 0.0);
  }

  const double a = param;
  // Tr rho^a sigma^(1-a) = sum_ij p_i^a q_j^(1-a) |<r_i|s_j>|^2
  double trace_term = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p(i) > kEigClip ? p(i) : 0.0;
    if (pi == 0.0 && a > 0.0) continue;
    const double pia = std::pow(pi, a);
    for (Eigen::Index j = 0; j < q.size(); ++j) {
      const double qj = q(j) > kEigClip ? q(j) : 0.0;
      if (qj == 0.0) {
        if (a > 1.0 && pia * overlap(i, j) > 1e-10) return kInf;
        continue;
      }
      trace_term += pia * std::pow(qj, 1.0 - a) * overlap(i, j);
    }
  }
  if (kind == EntropyKind::renyi) {
    if (trace_term <= 0.0) return kInf;
    return std::max(std::log(trace_term) / (a - 1.0), 0.0);
  }
  return std::max((1.0 - trace_term) / (1.0 - a), 0.0);
}

WitnessSeries relative_entropy_series(const MapFamily& family,
                                      const DensityMatrix& rho,
                                      const DensityMatrix& sigma,
                                      EntropyKind kind, double param) {
  std::string name;
  switch (kind) {
    case EntropyKind::renyi:
      if (!(param >= 0.0 && param <= 2.0) ||
          std::abs(param - 1.0) < 1e-12) {
        throw std::invalid_argument(
            "relative_entropy_series: alpha must be in [0,1) u (1,2]");
      }
      name = "renyi_relative_entropy";
      break;
    case EntropyKind::tsallis:
      if (!(param >= 0.0 && param < 1.0)) {
        throw std::invalid_argument(
            "relative_entropy_series: q must be in [0,1)");
      }
      name = "tsallis_relative_entropy";
      break;
    case EntropyKind::von_neumann:
      name = "relative_entropy";
      break;
  }
  std::vector<double> values;
  values.reserve(family.maps.size());
  for (const auto& s : family.maps) {
    values.push_back(relative_entropy_value(evolve_state(s, rho.mat()).mat(),
                                            evolve_state(s, sigma.mat()).mat(),
                                            kind, param));
  }
  return WitnessSeries::build(std::move(name), node_times(family),
                              std::move(values), Monotone::decreasing);
}

WitnessSeries heisenberg_norm_series(const MapFamily& family,
                                     const Matrix& a) {
  if (a.rows() != family.d || a.cols() != family.d) {
    throw DimensionError("heisenberg_norm_series: dimension mismatch");
  }
  std::vector<double> values;
  values.reserve(family.maps.size());
  for (const auto& s : family.maps) {
    values.push_back(operator_norm(dual(s).apply(a)));
  }
  return WitnessSeries::build("heisenberg_norm", node_times(family),
                              std::move(values), Monotone::decreasing);
}

std::vector<WitnessSeries> extended_norm_series(
    const MapFamily& family, const std::vector<Matrix>& w_set) {
  std::vector<WitnessSeries> out;
  out.reserve(w_set.size());
  int idx = 0;
  for (const auto& w : w_set) {
    if ((w - w.adjoint()).norm() > 1e-9 * std::max(w.norm(), 1.0)) {
      throw ValidationError("extended_norm_series: W must be Hermitian");
    }
    std::vector<double> values;
    values.reserve(family.maps.size());
    for (const auto& s : family.maps) {
      values.push_back(trace_norm(apply_extended(s, w)));
    }
    out.push_back(WitnessSeries::build(
        "extended_norm_" + std::to_string(idx++), node_times(family),
        std::move(values), Monotone::decreasing));
  }
  return out;
}

WitnessSeries negativity_series(const MapFamily& family, const Matrix& w0) {
  const Eigen::Index d = family.d;
  if (w0.rows() != d * d || w0.cols() != d * d) {
    throw DimensionError("negativity_series: W0 must be d^2-dimensional");
  }
  std::vector<double> values;
  values.reserve(family.maps.size());
  for (const auto& s : family.maps) {
    values.push_back(negativity(apply_extended_first(s, w0), d));
  }
  return WitnessSeries::build("negativity", node_times(family),
                              std::move(values), Monotone::decreasing);
}

WitnessSeries negativity_series(const MapFamily& family) {
  return negativity_series(family, max_entangled_projector(family.d));
}

}  // namespace qdyn
