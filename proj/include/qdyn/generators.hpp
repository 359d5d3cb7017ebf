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

#include <optional>
#include <vector>

#include "qdyn/superop.hpp"

namespace qdyn {

/// A time-dependent scalar coefficient.  The derivative falls back to a
/// central finite difference with step 1e-6 * max(1, t) when no analytic
/// derivative is supplied.
struct ScalarSignal {
  std::function<Complex(double)> f;
  std::function<Complex(double)> df;  // may be empty
  std::string description;

  Complex operator()(double t) const { return f(t); }
  Complex derivative(double t) const;

  static ScalarSignal constant(Complex value);
  static ScalarSignal zero() { return constant(0.0); }
};

using SignalMatrix = std::vector<std::vector<ScalarSignal>>;

/// Hermitian operator basis {F_0 = I/sqrt(d), F_1..F_{d^2-1}} with the
/// traceless part given by normalized generalized Gell-Mann matrices.
/// Orthonormal under the Hilbert-Schmidt inner product.
std::vector<Matrix> gell_mann_basis(Eigen::Index d);

struct GkslData {
  Matrix hamiltonian;            // d x d Hermitian
  Matrix rates;                  // (d^2-1) x (d^2-1) Hermitian
  std::vector<Matrix> basis;     // d^2-1 traceless orthonormal operators

  void validate() const;
};

/// L rho = -i[H, rho] + sum_kl a_kl (F_k rho F_l^dag - 1/2 {F_l^dag F_k, rho})
Superoperator gksl_build(const GkslData& data);

struct GkslDecomposition {
  Matrix hamiltonian;  // H_t
  Matrix damping;      // G_t
  Matrix rates;        // a_kl, k,l >= 1
};

/// Inverse of gksl_build: extract (H, G, a) of a trace-annihilating
/// Hermiticity-preserving L in the given traceless basis.
GkslDecomposition gksl_decompose(const Superoperator& l,
                                 const std::vector<Matrix>& basis);

/// True iff L decomposes into GKSL form with rate matrix >= -tol.
bool is_legitimate_gksl(const Superoperator& l, double tol = 1e-9);

enum class GeneratorClass { gksl, dephasing, weyl, from_map_family, custom };

struct TimeDependentGenerator {
  Eigen::Index d = 0;
  std::function<Superoperator(double)> rule;
  GeneratorClass declared_class = GeneratorClass::custom;

  Superoperator at(double t) const;
};

/// Qubit generator L_t rho = -(i w_t/2)[sz, rho] + (g_t/2)(sz rho sz - rho).
TimeDependentGenerator dephasing_generator(ScalarSignal omega,
                                           ScalarSignal gamma);

/// Commutative d-level class built on the phase operators
/// V_a = sum_b lambda^{ab} P_b, lambda = e^{2 pi i / d}:
///   L_t rho = -i[H_t, rho] + sum_kl c_kl(t) ([V_k, rho V_l^dag] + [V_k rho, V_l^dag])
/// with H_t = sum_k (h_k(t) V_k + conj(h_k(t)) V_k^dag).
/// c is the (d-1) x (d-1) Hermitian-valued coefficient matrix.
TimeDependentGenerator weyl_generator(Eigen::Index d, SignalMatrix c,
                                      std::vector<ScalarSignal> h);

/// Pure-decoherence generator from a completely positive diagonal family
/// N_t rho = sum_kl n_kl(t) e_kk rho e_ll, with theta_kk forced to
/// -dn_kk/dt and user-chosen off-diagonal theta (default zero):
///   L_t = (Theta_t + dN_t/dt) N_t^{-1}.
/// Evaluation validates n(t) positive definite and dn_kk/dt <= 0.
TimeDependentGenerator generator_from_map_family(
    SignalMatrix n, std::optional<SignalMatrix> theta_offdiag = std::nullopt);

/// Operator norm of the superoperator commutator [L_t, L_u].
double commutativity_defect(const TimeDependentGenerator& l, double t,
                            double u);

/// Complete dissipativity of L (equivalent to legitimate GKSL form); also
/// spot-checks the Kadison-derived inequality
/// L^#(a a^dag) - L^#(a) a^dag - a L^#(a^dag) >= -tol on sampled a.
bool dissipativity_check(const Superoperator& l, double tol = 1e-9);

}  // namespace qdyn
