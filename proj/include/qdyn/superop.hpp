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

#include "qdyn/matrix.hpp"

namespace qdyn {

// Column-stacking vectorization throughout: vec(A rho B^dag) =
// (conj(B) otimes A) vec(rho).

/// Linear map on d x d operators, stored as its d^2 x d^2 matrix.
struct Superoperator {
  Eigen::Index d = 0;
  Matrix m;  // d^2 x d^2

  Superoperator() = default;
  Superoperator(Eigen::Index dim, Matrix mat);

  static Superoperator identity(Eigen::Index d);
  static Superoperator zero(Eigen::Index d);
  /// rho -> A rho B^dag
  static Superoperator conjugation(const Matrix& a, const Matrix& b);
  /// rho -> -i [H, rho]
  static Superoperator hamiltonian(const Matrix& h);
  /// rho -> A rho
  static Superoperator left_mult(const Matrix& a);
  /// rho -> rho A
  static Superoperator right_mult(const Matrix& a);

  Matrix apply(const Matrix& a) const;

  Superoperator operator+(const Superoperator& o) const;
  Superoperator operator-(const Superoperator& o) const;
  Superoperator operator*(const Superoperator& o) const;  // composition
  Superoperator& operator+=(const Superoperator& o);
  friend Superoperator operator*(Complex c, const Superoperator& s);
};

struct CpVerdict {
  bool is_cp = false;
  double min_choi_eigenvalue = 0.0;
  double tolerance = 0.0;
};

/// Unnormalized Choi matrix C(S) = sum_ij e_ij otimes S(e_ij); equals
/// d * (id otimes S) P+ with P+ the normalized maximally entangled projector.
Matrix choi(const Superoperator& s);

/// CP test on the minimum Choi eigenvalue.  Negative tol means "use the
/// default 1e-9 * |tr C| scale".
CpVerdict is_completely_positive(const Superoperator& s, double tol = -1.0);

bool is_trace_preserving(const Superoperator& s, double tol = 1e-9);

/// Hilbert-Schmidt adjoint (Heisenberg picture).
Superoperator dual(const Superoperator& s);

/// (id otimes S) W on a d*d-dimensional W, acting on the second factor.
Matrix apply_extended(const Superoperator& s, const Matrix& w);

/// (S otimes id) W, acting on the first factor.
Matrix apply_extended_first(const Superoperator& s, const Matrix& w);

/// Normalized maximally entangled projector P+ on C^d otimes C^d.
Matrix max_entangled_projector(Eigen::Index d);

/// Partial transpose on the second factor of a d*d bipartite operator.
Matrix partial_transpose(const Matrix& w, Eigen::Index d);

/// Negativity (||W^Gamma||_1 - 1) / 2.
double negativity(const Matrix& w, Eigen::Index d);

}  // namespace qdyn
