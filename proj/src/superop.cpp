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

#include "qdyn/superop.hpp"

namespace qdyn {

Superoperator::Superoperator(Eigen::Index dim, Matrix mat)
    : d(dim), m(std::move(mat)) {
  if (d < 1) throw DimensionError("Superoperator: d must be >= 1");
  if (m.rows() != d * d || m.cols() != d * d) {
    throw DimensionError("Superoperator: matrix must be d^2 x d^2");
  }
}

Superoperator Superoperator::identity(Eigen::Index d) {
  return {d, Matrix::Identity(d * d, d * d)};
}

Superoperator Superoperator::zero(Eigen::Index d) {
  return {d, Matrix::Zero(d * d, d * d)};
}

Superoperator Superoperator::conjugation(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError("Superoperator::conjugation: square same-dim A, B");
  }
  return {a.rows(), kron(b.conjugate(), a)};
}

Superoperator Superoperator::left_mult(const Matrix& a) {
  return {a.rows(), kron(Matrix::Identity(a.rows(), a.rows()), a)};
}

Superoperator Superoperator::right_mult(const Matrix& a) {
  return {a.rows(), kron(a.transpose(), Matrix::Identity(a.rows(), a.rows()))};
}

Superoperator Superoperator::hamiltonian(const Matrix& h) {
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  return {d, Complex(0, -1) * (kron(id, h) - kron(h.transpose(), id))};
}

Matrix Superoperator::apply(const Matrix& a) const {
  if (a.rows() != d || a.cols() != d) {
    throw DimensionError("Superoperator::apply: dimension mismatch");
  }
  Vector v = Eigen::Map<const Vector>(a.data(), d * d);
  Vector out = m * v;
  return Eigen::Map<const Matrix>(out.data(), d, d);
}

Superoperator Superoperator::operator+(const Superoperator& o) const {
  return {d, m + o.m};
}
Superoperator Superoperator::operator-(const Superoperator& o) const {
  return {d, m - o.m};
}
Superoperator Superoperator::operator*(const Superoperator& o) const {
  return {d, m * o.m};
}
Superoperator& Superoperator::operator+=(const Superoperator& o) {
  m += o.m;
  return *this;
}
Superoperator operator*(Complex c, const Superoperator& s) {
  return {s.d, c * s.m};
}

Matrix choi(const Superoperator& s) {
  const Eigen::Index d = s.d;
  Matrix c = Matrix::Zero(d * d, d * d);
  Matrix e = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      e(i, j) = 1;
      c.block(i * d, j * d, d, d) = s.apply(e);
      e(i, j) = 0;
    }
  }
  return c;
}

CpVerdict is_completely_positive(const Superoperator& s, double tol) {
  Matrix c = choi(s);
  // Hermitize; for Hermiticity-preserving maps this is a no-op up to noise.
  c = 0.5 * (c + c.adjoint().eval());
  if (tol < 0) tol = 1e-9 * std::max(std::abs(c.trace()), 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig, tol};
}

bool is_trace_preserving(const Superoperator& s, double tol) {
  const Matrix id = Matrix::Identity(s.d, s.d);
  return (dual(s).apply(id) - id).norm() <= tol;
}

Superoperator dual(const Superoperator& s) {
  return {s.d, s.m.adjoint()};
}

Matrix apply_extended(const Superoperator& s, const Matrix& w) {
  const Eigen::Index d = s.d;
  if (w.rows() != d * d || w.cols() != d * d) {
    throw DimensionError("apply_extended: W must be d^2-dimensional");
  }
  Matrix out(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out.block(i * d, j * d, d, d) = s.apply(w.block(i * d, j * d, d, d));
  return out;
}

Matrix apply_extended_first(const Superoperator& s, const Matrix& w) {
  const Eigen::Index d = s.d;
  if (w.rows() != d * d || w.cols() != d * d) {
    throw DimensionError("apply_extended_first: W must be d^2-dimensional");
  }
  // W = sum_ij e_ij otimes W_ij; (S otimes id) W = sum_ij S(e_ij) otimes W_ij.
  Matrix out = Matrix::Zero(d * d, d * d);
  Matrix e = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      e(i, j) = 1;
      const Matrix se = s.apply(e);
      e(i, j) = 0;
      const Matrix& wij = w.block(i * d, j * d, d, d);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
          if (se(r, c) != Complex(0, 0))
            out.block(r * d, c * d, d, d) += se(r, c) * wij;
    }
  }
  return out;
}

Matrix max_entangled_projector(Eigen::Index d) {
  Vector psi = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(double(d));
  return psi * psi.adjoint();
}

Matrix partial_transpose(const Matrix& w, Eigen::Index d) {
  if (w.rows() != d * d || w.cols() != d * d) {
    throw DimensionError("partial_transpose: W must be d^2-dimensional");
  }
  Matrix out(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      out.block(i * d, j * d, d, d) =
          w.block(i * d, j * d, d, d).transpose();
  return out;
}

double negativity(const Matrix& w, Eigen::Index d) {
  return 0.5 * (trace_norm(partial_transpose(w, d)) - 1.0);
}

}  // namespace qdyn
