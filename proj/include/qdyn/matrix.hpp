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

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace qdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative tolerance used when symmetrizing nearly-Hermitian matrices.
inline constexpr double kHermiticityTol = 1e-9;
/// Relative scale of the eigenvalue clipping window for sqrt/log/power.
inline constexpr double kPsdTolScale = 1e-10;

bool is_finite(const Matrix& a);

/// Sum of singular values.  Square input only.
double trace_norm(const Matrix& a);

/// Largest singular value.  Square input only.
double operator_norm(const Matrix& a);

/// Hermitian matrix: construction checks ||A - A^dag|| <= tol * ||A|| and
/// symmetrizes A <- (A + A^dag)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& a, double rel_tol = kHermiticityTol);
  const Matrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

/// Positive unit-trace Hermitian matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Matrix& rho, double trace_tol = 1e-9,
                         double psd_tol = 1e-9);
  const Matrix& mat() const { return herm_.mat(); }
  Eigen::Index dim() const { return herm_.dim(); }

 private:
  HermitianMatrix herm_;
};

/// f applied to the eigenvalues of a Hermitian A.  Eigenvalues within
/// kPsdTolScale * ||A|| of zero are clipped to zero before applying f; a
/// non-finite f value at an unclipped eigenvalue raises DomainError.
Matrix matrix_function(const HermitianMatrix& a,
                       const std::function<double(double)>& f);

/// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

enum class Keep { A, B };

/// Partial trace of a (d_a * d_b)-dimensional operator over the discarded
/// tensor factor.
Matrix partial_trace(const Matrix& w, Eigen::Index d_a, Eigen::Index d_b,
                     Keep keep);

Matrix kron(const Matrix& a, const Matrix& b);

// Pauli matrices and the qubit |+> / |-> projectors.
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
Matrix sigma_plus();
Matrix plus_projector();
Matrix minus_projector();

}  // namespace qdyn
