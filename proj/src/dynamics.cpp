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

#include "qdyn/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qdyn {

TimeGrid::TimeGrid(double end, int steps) : t_end(end), n_steps(steps) {
  if (!(end > 0.0) || steps < 1) {
    throw ValidationError("TimeGrid: need t_end > 0 and n_steps >= 1");
  }
}

void MapFamily::record_verdicts(double cp_tol, double tp_tol) {
  cp_verdicts.clear();
  tp_verdicts.clear();
  cp_verdicts.reserve(maps.size());
  tp_verdicts.reserve(maps.size());
  for (const auto& s : maps) {
    cp_verdicts.push_back(is_completely_positive(s, cp_tol));
    tp_verdicts.push_back(is_trace_preserving(s, tp_tol));
  }
}

static Matrix generator_matrix_at(const TimeDependentGenerator& l, double t) {
  Matrix m = l.at(t).m;
  if (!m.allFinite()) {
    throw PropagationError("non-finite generator value at t = " +
                           std::to_string(t));
  }
  return m;
}

// One RK4 step of dY/dt = L_t Y.
static Matrix rk4_step(const TimeDependentGenerator& l, double t, double h,
                       const Matrix& y) {
  const Matrix l0 = generator_matrix_at(l, t);
  const Matrix lm = generator_matrix_at(l, t + 0.5 * h);
  const Matrix l1 = generator_matrix_at(l, t + h);
  const Matrix k1 = l0 * y;
  const Matrix k2 = lm * (y + 0.5 * h * k1);
  const Matrix k3 = lm * (y + 0.5 * h * k2);
  const Matrix k4 = l1 * (y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

MapFamily propagate(const TimeDependentGenerator& l, const TimeGrid& grid) {
  MapFamily fam;
  fam.d = l.d;
  fam.grid = grid;
  fam.provenance = Provenance::ode;
  fam.maps.reserve(grid.n_nodes());
  Matrix y = Matrix::Identity(l.d * l.d, l.d * l.d);
  fam.maps.push_back(Superoperator(l.d, y));
  const double h = grid.dt();
  for (int k = 0; k < grid.n_steps; ++k) {
    y = rk4_step(l, grid.node(k), h, y);
    fam.maps.push_back(Superoperator(l.d, y));
  }
  return fam;
}

Superoperator propagator(const TimeDependentGenerator& l, double s, double t,
                         int n_substeps) {
  if (t < s || s < 0.0) {
    throw std::invalid_argument("propagator: need t >= s >= 0");
  }
  if (t == s) return Superoperator::identity(l.d);
  if (n_substeps <= 0) {
    n_substeps = std::max(4, int(std::ceil((t - s) * 1000.0)));
  }
  const double h = (t - s) / n_substeps;
  Matrix y = Matrix::Identity(l.d * l.d, l.d * l.d);
  for (int k = 0; k < n_substeps; ++k) {
    y = rk4_step(l, s + k * h, h, y);
  }
  return {l.d, y};
}

Superoperator propagator_from_family(const MapFamily& family, int node_s,
                                     int node_t) {
  if (node_t < node_s || node_s < 0 ||
      node_t >= int(family.maps.size())) {
    throw std::invalid_argument("propagator_from_family: bad node indices");
  }
  const Matrix& ls = family.maps[node_s].m;
  Eigen::JacobiSVD<Matrix> svd(ls, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e10) {
    throw PropagationError(
        "propagator_from_family: Lambda_s is ill-conditioned (cond > 1e10), "
        "inverse refused");
  }
  return {family.d, family.maps[node_t].m * ls.inverse()};
}

static void require_commutative(const TimeDependentGenerator& l, double t_max,
                                double defect_tol) {
  const int samples = 5;
  for (int i = 0; i <= samples; ++i) {
    for (int j = i + 1; j <= samples; ++j) {
      const double ti = t_max * double(i) / samples;
      const double tj = t_max * double(j) / samples;
      const double defect = commutativity_defect(l, ti, tj);
      const double scale = std::max(
          1.0, operator_norm(l.at(ti).m) * operator_norm(l.at(tj).m));
      if (defect > defect_tol * scale) {
        throw ValidationError(
            "commutative family required: defect " + std::to_string(defect) +
            " at (t, u) = (" + std::to_string(ti) + ", " + std::to_string(tj) +
            ")");
      }
    }
  }
}

// Simpson rule on one interval using the midpoint.
static Matrix simpson_interval(const TimeDependentGenerator& l, double a,
                               double b) {
  return ((b - a) / 6.0) * (generator_matrix_at(l, a) +
                            4.0 * generator_matrix_at(l, 0.5 * (a + b)) +
                            generator_matrix_at(l, b));
}

CumulantSolution commutative_solve(const TimeDependentGenerator& l, double t,
                                   int quad_intervals, double defect_tol) {
  if (t < 0.0) throw std::invalid_argument("commutative_solve: t >= 0");
  if (t == 0.0) {
    return {Superoperator::identity(l.d), Superoperator::zero(l.d)};
  }
  require_commutative(l, t, defect_tol);
  Matrix cum = Matrix::Zero(l.d * l.d, l.d * l.d);
  for (int k = 0; k < quad_intervals; ++k) {
    const double a = t * double(k) / quad_intervals;
    const double b = t * double(k + 1) / quad_intervals;
    cum += simpson_interval(l, a, b);
  }
  return {Superoperator(l.d, cum.exp()), Superoperator(l.d, cum)};
}

std::vector<bool> check_cumulant_legitimacy(const TimeDependentGenerator& l,
                                            const TimeGrid& grid, double tol,
                                            double defect_tol) {
  require_commutative(l, grid.t_end, defect_tol);
  std::vector<bool> out;
  out.reserve(grid.n_nodes());
  Matrix cum = Matrix::Zero(l.d * l.d, l.d * l.d);
  out.push_back(true);  // zero cumulant at t = 0
  for (int k = 0; k < grid.n_steps; ++k) {
    cum += simpson_interval(l, grid.node(k), grid.node(k + 1));
    out.push_back(is_legitimate_gksl(Superoperator(l.d, cum), tol));
  }
  return out;
}

void MicroscopicModel::validate(Eigen::Index size_cap) const {
  const Eigen::Index total = d_system * d_reservoir;
  if (total > size_cap) {
    throw ValidationError("MicroscopicModel: d_S * d_R exceeds cap of " +
                          std::to_string(size_cap));
  }
  if (h_total.rows() != total || h_total.cols() != total) {
    throw DimensionError("MicroscopicModel: H_total dimension mismatch");
  }
  HermitianMatrix check_h(h_total);
  DensityMatrix check_w(omega_r);
  if (omega_r.rows() != d_reservoir) {
    throw DimensionError("MicroscopicModel: omega_R dimension mismatch");
  }
}

MapFamily reduced_dynamics(const MicroscopicModel& model,
                           const TimeGrid& grid) {
  model.validate();
  const Eigen::Index ds = model.d_system;
  const Eigen::Index dr = model.d_reservoir;
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (model.h_total + model.h_total.adjoint().eval()));
  const Matrix& evec = es.eigenvectors();
  const RealVector& eval = es.eigenvalues();

  MapFamily fam;
  fam.d = ds;
  fam.grid = grid;
  fam.provenance = Provenance::microscopic;
  fam.maps.reserve(grid.n_nodes());

  Matrix e = Matrix::Zero(ds, ds);
  for (int node = 0; node < grid.n_nodes(); ++node) {
    const double t = grid.node(node);
    Vector phases(eval.size());
    for (Eigen::Index i = 0; i < eval.size(); ++i) {
      phases(i) = std::exp(Complex(0, -eval(i) * t));
    }
    const Matrix u = evec * phases.asDiagonal() * evec.adjoint();
    Matrix sup(ds * ds, ds * ds);
    for (Eigen::Index i = 0; i < ds; ++i) {
      for (Eigen::Index j = 0; j < ds; ++j) {
        e(i, j) = 1;
        const Matrix total = u * kron(e, model.omega_r) * u.adjoint();
        e(i, j) = 0;
        const Matrix reduced = partial_trace(total, ds, dr, Keep::A);
        sup.col(j * ds + i) =
            Eigen::Map<const Vector>(reduced.data(), ds * ds);
      }
    }
    fam.maps.push_back(Superoperator(ds, sup));
  }
  return fam;
}

}  // namespace qdyn
