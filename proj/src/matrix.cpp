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

#include "qdyn/matrix.hpp"

#include <cmath>

namespace qdyn {

bool is_finite(const Matrix& a) {
  return a.allFinite();
}

static void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(who) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
}

double trace_norm(const Matrix& a) {
  require_square(a, "trace_norm");
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& a) {
  require_square(a, "operator_norm");
  if (a.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

HermitianMatrix::HermitianMatrix(const Matrix& a, double rel_tol) {
  require_square(a, "HermitianMatrix");
  if (!a.allFinite()) throw ValidationError("HermitianMatrix: non-finite entries");
  const double scale = a.norm();
  const double defect = (a - a.adjoint()).norm();
  if (defect > rel_tol * std::max(scale, 1e-300) && defect > 1e-14) {
    throw ValidationError("HermitianMatrix: hermiticity defect " +
                          std::to_string(defect) + " exceeds tolerance");
  }
  m_ = 0.5 * (a + a.adjoint().eval());
}

DensityMatrix::DensityMatrix(const Matrix& rho, double trace_tol,
                             double psd_tol)
    : herm_(rho) {
  const double tr_err = std::abs(herm_.mat().trace() - Complex(1.0, 0.0));
  if (tr_err > trace_tol) {
    throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                          std::to_string(tr_err));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm_.mat(),
                                           Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -psd_tol) {
    throw ValidationError("DensityMatrix: negative eigenvalue " +
                          std::to_string(min_eig));
  }
}

Matrix matrix_function(const HermitianMatrix& a,
                       const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat());
  const double clip = kPsdTolScale * std::max(a.mat().norm(), 1.0);
  RealVector vals = es.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    double lam = std::abs(vals(i)) < clip ? 0.0 : vals(i);
    const double flam = f(lam);
    if (!std::isfinite(flam)) {
      throw DomainError("matrix_function: f undefined at eigenvalue " +
                        std::to_string(lam));
    }
    vals(i) = flam;
  }
  return es.eigenvectors() * vals.asDiagonal() *
         es.eigenvectors().adjoint();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  const Matrix sqrt_rho =
      matrix_function(HermitianMatrix(rho.mat()),
                      [](double x) { return std::sqrt(std::max(x, 0.0)); });
  const Matrix inner = sqrt_rho * sigma.mat() * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<Matrix> es(inner, Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    sum += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  }
  const double val = sum * sum;
  return std::clamp(val, 0.0, 1.0);
}

Matrix partial_trace(const Matrix& w, Eigen::Index d_a, Eigen::Index d_b,
                     Keep keep) {
  require_square(w, "partial_trace");
  if (w.rows() != d_a * d_b) {
    throw DimensionError("partial_trace: dims product mismatch");
  }
  if (keep == Keep::A) {
    Matrix out = Matrix::Zero(d_a, d_a);
    for (Eigen::Index i = 0; i < d_a; ++i)
      for (Eigen::Index j = 0; j < d_a; ++j)
        for (Eigen::Index k = 0; k < d_b; ++k)
          out(i, j) += w(i * d_b + k, j * d_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(d_b, d_b);
  for (Eigen::Index i = 0; i < d_b; ++i)
    for (Eigen::Index j = 0; j < d_b; ++j)
      for (Eigen::Index k = 0; k < d_a; ++k)
        out(i, j) += w(k * d_b + i, k * d_b + j);
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1;
  return m;
}

Matrix plus_projector() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

Matrix minus_projector() {
  Matrix m(2, 2);
  m << 0.5, -0.5, -0.5, 0.5;
  return m;
}

}  // namespace qdyn
