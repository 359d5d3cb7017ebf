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

#include "qdyn/generators.hpp"

namespace qdyn {

struct PropagationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Uniform grid on [0, t_end] with n_steps intervals (n_steps + 1 nodes).
struct TimeGrid {
  double t_end = 1.0;
  int n_steps = 1000;

  TimeGrid() = default;
  TimeGrid(double end, int steps);

  double dt() const { return t_end / n_steps; }
  int n_nodes() const { return n_steps + 1; }
  double node(int k) const { return t_end * double(k) / double(n_steps); }
};

enum class Provenance { ode, closed_form, microscopic };

/// The dynamical map sampled on a grid.  maps[0] is the identity; CP/TP
/// verdicts are recorded per node, never silently enforced.
struct MapFamily {
  Eigen::Index d = 0;
  TimeGrid grid;
  std::vector<Superoperator> maps;
  Provenance provenance = Provenance::ode;
  std::vector<CpVerdict> cp_verdicts;
  std::vector<bool> tp_verdicts;

  void record_verdicts(double cp_tol = -1.0, double tp_tol = 1e-9);
};

/// Fixed-step RK4 integration of dLambda/dt = L_t Lambda, Lambda_0 = id,
/// one step per grid interval.
MapFamily propagate(const TimeDependentGenerator& l, const TimeGrid& grid);

/// Propagator V_{t,s}: RK4 re-integration of dV/dt = L_t V from V_{s,s} = id.
Superoperator propagator(const TimeDependentGenerator& l, double s, double t,
                         int n_substeps = 0);

/// Fallback V_{t,s} = Lambda_t Lambda_s^{-1} from stored maps.  Refuses when
/// cond(Lambda_s) > 1e10; the inverse of a map need not exist nor be CP.
Superoperator propagator_from_family(const MapFamily& family, int node_s,
                                     int node_t);

struct CumulantSolution {
  Superoperator map;       // exp of the cumulant
  Superoperator cumulant;  // integral of L_u over [0, t]
};

/// Closed-form solution exp(int_0^t L_u du) for commutative families.
/// Refuses (reporting the measured defect) when the sampled commutativity
/// defect over [0, t] exceeds defect_tol.
CumulantSolution commutative_solve(const TimeDependentGenerator& l, double t,
                                   int quad_intervals = 200,
                                   double defect_tol = 1e-8);

/// Per-node legitimacy of the cumulant int_0^t L_u du (GKSL test), for
/// commutative families.
std::vector<bool> check_cumulant_legitimacy(const TimeDependentGenerator& l,
                                            const TimeGrid& grid,
                                            double tol = 1e-9,
                                            double defect_tol = 1e-8);

/// Closed system + reservoir model with a fixed reservoir state.
struct MicroscopicModel {
  Eigen::Index d_system = 0;
  Eigen::Index d_reservoir = 0;
  Matrix h_total;   // (d_S * d_R)^2 Hermitian
  Matrix omega_r;   // reservoir density matrix

  void validate(Eigen::Index size_cap = 64) const;
};

/// Exact reduced dynamics rho -> Tr_R[U_t (rho otimes omega_R) U_t^dag]
/// from one eigendecomposition of the total Hamiltonian.
MapFamily reduced_dynamics(const MicroscopicModel& model, const TimeGrid& grid);

}  // namespace qdyn
