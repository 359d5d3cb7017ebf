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

#include "qdyn/generators.hpp"

#include <cmath>

#include "qdyn/rng.hpp"

namespace qdyn {

Complex ScalarSignal::derivative(double t) const {
  if (df) return df(t);
  const double h = 1e-6 * std::max(1.0, std::abs(t));
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

ScalarSignal ScalarSignal::constant(Complex value) {
  ScalarSignal s;
  s.f = [value](double) { return value; };
  s.df = [](double) { return Complex(0.0); };
  s.description = "const";
  return s;
}

std::vector<Matrix> gell_mann_basis(Eigen::Index d) {
  if (d < 2) throw DimensionError("gell_mann_basis: d must be >= 2");
  std::vector<Matrix> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      Matrix sym = Matrix::Zero(d, d);
      sym(j, k) = inv_sqrt2;
      sym(k, j) = inv_sqrt2;
      out.push_back(sym);
      Matrix asym = Matrix::Zero(d, d);
      asym(j, k) = Complex(0, -inv_sqrt2);
      asym(k, j) = Complex(0, inv_sqrt2);
      out.push_back(asym);
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    Matrix diag = Matrix::Zero(d, d);
    const double norm = 1.0 / std::sqrt(double(l) * double(l + 1));
    for (Eigen::Index k = 0; k < l; ++k) diag(k, k) = norm;
    diag(l, l) = -double(l) * norm;
    out.push_back(diag);
  }
  return out;
}

void GkslData::validate() const {
  const Eigen::Index d = hamiltonian.rows();
  const Eigen::Index n = Eigen::Index(basis.size());
  if (n != d * d - 1) {
    throw ValidationError("GkslData: basis must have d^2-1 operators");
  }
  if (rates.rows() != n || rates.cols() != n) {
    throw DimensionError("GkslData: rate matrix must be (d^2-1)^2");
  }
  if ((rates - rates.adjoint()).norm() > 1e-9 * std::max(rates.norm(), 1.0)) {
    throw ValidationError("GkslData: rate matrix is not Hermitian");
  }
  if ((hamiltonian - hamiltonian.adjoint()).norm() >
      1e-9 * std::max(hamiltonian.norm(), 1.0)) {
    throw ValidationError("GkslData: Hamiltonian is not Hermitian");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(basis[k].trace()) > 1e-10) {
      throw ValidationError("GkslData: basis operator not traceless");
    }
    for (Eigen::Index l = 0; l < n; ++l) {
      const Complex ip = (basis[k].adjoint() * basis[l]).trace();
      const double expect = (k == l) ? 1.0 : 0.0;
      if (std::abs(ip - expect) > 1e-12) {
        throw ValidationError("GkslData: basis not orthonormal");
      }
    }
  }
}

Superoperator gksl_build(const GkslData& data) {
  data.validate();
  const Eigen::Index d = data.hamiltonian.rows();
  const Eigen::Index n = Eigen::Index(data.basis.size());
  Superoperator l = Superoperator::hamiltonian(data.hamiltonian);
  const Matrix id = Matrix::Identity(d, d);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex a = data.rates(k, j);
      if (a == Complex(0, 0)) continue;
      const Matrix fl_fk = data.basis[j].adjoint() * data.basis[k];
      l.m += a * (kron(data.basis[j].conjugate(), data.basis[k]) -
                  0.5 * kron(id, fl_fk) -
                  0.5 * kron(fl_fk.transpose(), id));
    }
  }
  return l;
}

GkslDecomposition gksl_decompose(const Superoperator& l,
                                 const std::vector<Matrix>& basis) {
  const Eigen::Index d = l.d;
  const Eigen::Index n = Eigen::Index(basis.size());
  if (n != d * d - 1) {
    throw ValidationError("gksl_decompose: basis must have d^2-1 operators");
  }
  const Matrix id_op = Matrix::Identity(d, d);
  const Matrix trace_defect = dual(l).apply(id_op);
  if (trace_defect.norm() > 1e-8 * std::max(l.m.norm(), 1.0)) {
    throw ValidationError("gksl_decompose: L is not trace-annihilating, "
                          "||dual(L)(I)|| = " +
                          std::to_string(trace_defect.norm()));
  }

  // Full operator basis F_0 = I/sqrt(d), F_1..F_{d^2-1}.
  std::vector<Matrix> full;
  full.reserve(n + 1);
  full.push_back(id_op / std::sqrt(double(d)));
  for (const auto& f : basis) full.push_back(f);

  // Coefficients of L(rho) = sum b_ab F_a rho F_b^dag; the superoperators
  // conj(F_b) otimes F_a are HS-orthonormal, so b is a projection.
  Matrix b(n + 1, n + 1);
  for (Eigen::Index a = 0; a <= n; ++a) {
    for (Eigen::Index c = 0; c <= n; ++c) {
      const Matrix s_ac = kron(full[c].conjugate(), full[a]);
      b(a, c) = (s_ac.adjoint() * l.m).trace();
    }
  }
  if ((b - b.adjoint()).norm() > 1e-8 * std::max(b.norm(), 1.0)) {
    throw ValidationError(
        "gksl_decompose: L is not Hermiticity-preserving");
  }
  b = 0.5 * (b + b.adjoint().eval());

  Matrix a_op = Matrix::Zero(d, d);
  for (Eigen::Index k = 1; k <= n; ++k) {
    a_op += b(0, k) * full[k].adjoint();
  }
  a_op /= std::sqrt(double(d));

  GkslDecomposition out;
  out.damping = (b(0, 0) / (2.0 * double(d))) * id_op +
                0.5 * (a_op + a_op.adjoint());
  out.hamiltonian = (a_op - a_op.adjoint()) / Complex(0, 2);
  out.rates = b.block(1, 1, n, n);
  return out;
}

bool is_legitimate_gksl(const Superoperator& l, double tol) {
  GkslDecomposition dec;
  try {
    dec = gksl_decompose(l, gell_mann_basis(l.d));
  } catch (const ValidationError&) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(dec.rates, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Superoperator TimeDependentGenerator::at(double t) const {
  return rule(t);
}

TimeDependentGenerator dephasing_generator(ScalarSignal omega,
                                           ScalarSignal gamma) {
  const Matrix sz = sigma_z();
  const Matrix sz_conj = Superoperator::conjugation(sz, sz).m;
  TimeDependentGenerator gen;
  gen.d = 2;
  gen.declared_class = GeneratorClass::dephasing;
  gen.rule = [omega, gamma, sz, sz_conj](double t) {
    const double w = omega(t).real();
    const double g = gamma(t).real();
    Superoperator l = Superoperator::hamiltonian(0.5 * w * sz);
    l.m += 0.5 * g * (sz_conj - Matrix::Identity(4, 4));
    return l;
  };
  return gen;
}

TimeDependentGenerator weyl_generator(Eigen::Index d, SignalMatrix c,
                                      std::vector<ScalarSignal> h) {
  if (d < 2) throw DimensionError("weyl_generator: d must be >= 2");
  if (Eigen::Index(c.size()) != d - 1 ||
      Eigen::Index(h.size()) != d - 1) {
    throw DimensionError("weyl_generator: c must be (d-1)x(d-1), h length d-1");
  }
  for (const auto& row : c) {
    if (Eigen::Index(row.size()) != d - 1) {
      throw DimensionError("weyl_generator: c must be (d-1)x(d-1)");
    }
  }
  // Phase operators V_a = sum_b lambda^{ab} P_b, lambda = e^{2 pi i / d}.
  std::vector<Matrix> v(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    Matrix va = Matrix::Zero(d, d);
    for (Eigen::Index bidx = 0; bidx < d; ++bidx) {
      va(bidx, bidx) =
          std::exp(Complex(0, 2.0 * M_PI * double(a * bidx) / double(d)));
    }
    v[a] = va;
  }
  const Matrix id = Matrix::Identity(d, d);
  TimeDependentGenerator gen;
  gen.d = d;
  gen.declared_class = GeneratorClass::weyl;
  gen.rule = [d, c, h, v, id](double t) {
    Matrix ham = Matrix::Zero(d, d);
    for (Eigen::Index k = 1; k < d; ++k) {
      const Complex hk = h[k - 1](t);
      ham += hk * v[k] + std::conj(hk) * v[k].adjoint();
    }
    Superoperator l = Superoperator::hamiltonian(ham);
    for (Eigen::Index k = 1; k < d; ++k) {
      for (Eigen::Index j = 1; j < d; ++j) {
        const Complex ckl = c[k - 1][j - 1](t);
        const Complex clk = c[j - 1][k - 1](t);
        if (std::abs(ckl - std::conj(clk)) >
            1e-9 * std::max(std::abs(ckl), 1.0)) {
          throw ValidationError("weyl_generator: c(t) not Hermitian at t = " +
                                std::to_string(t));
        }
        if (ckl == Complex(0, 0)) continue;
        const Matrix vl_vk = v[j].adjoint() * v[k];
        // [V_k, rho V_l^dag] + [V_k rho, V_l^dag]
        //   = 2 (V_k rho V_l^dag - 1/2 {V_l^dag V_k, rho})
        l.m += 2.0 * ckl * (kron(v[j].conjugate(), v[k]) -
                            0.5 * kron(id, vl_vk) -
                            0.5 * kron(vl_vk.transpose(), id));
      }
    }
    return l;
  };
  return gen;
}

TimeDependentGenerator generator_from_map_family(
    SignalMatrix n, std::optional<SignalMatrix> theta_offdiag) {
  const Eigen::Index dim = Eigen::Index(n.size());
  if (dim < 2) throw DimensionError("generator_from_map_family: need N >= 2");
  for (const auto& row : n) {
    if (Eigen::Index(row.size()) != dim) {
      throw DimensionError("generator_from_map_family: n must be square");
    }
  }
  if (theta_offdiag) {
    if (Eigen::Index(theta_offdiag->size()) != dim) {
      throw DimensionError("generator_from_map_family: theta shape mismatch");
    }
    for (const auto& row : *theta_offdiag) {
      if (Eigen::Index(row.size()) != dim) {
        throw DimensionError("generator_from_map_family: theta shape mismatch");
      }
    }
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index l = 0; l < dim; ++l) {
      if (std::abs(n[k][l](0.0) - Complex(1.0)) > 1e-9) {
        throw ValidationError("generator_from_map_family: n_kl(0) must be 1");
      }
    }
  }
  TimeDependentGenerator gen;
  gen.d = dim;
  gen.declared_class = GeneratorClass::from_map_family;
  gen.rule = [dim, n, theta_offdiag](double t) {
    Matrix nt(dim, dim), ndot(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index l = 0; l < dim; ++l) {
        nt(k, l) = n[k][l](t);
        ndot(k, l) = n[k][l].derivative(t);
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (nt + nt.adjoint().eval()),
                                             Eigen::EigenvaluesOnly);
    // n(0) is the all-ones matrix (singular by construction); demand strict
    // positivity only away from the initial time.
    if (es.eigenvalues().minCoeff() <= (t == 0.0 ? -1e-12 : 0.0)) {
      throw ValidationError(
          "generator_from_map_family: n(t) not positive definite at t = " +
          std::to_string(t));
    }
    Matrix theta(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      if (ndot(k, k).real() > 1e-9) {
        throw ValidationError(
            "generator_from_map_family: dn_kk/dt > 0 at t = " +
            std::to_string(t));
      }
      for (Eigen::Index l = 0; l < dim; ++l) {
        if (k == l) {
          theta(k, k) = -ndot(k, k);
        } else {
          theta(k, l) =
              theta_offdiag ? Complex((*theta_offdiag)[k][l](t)) : Complex(0);
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> est(
        0.5 * (theta + theta.adjoint().eval()), Eigen::EigenvaluesOnly);
    if (est.eigenvalues().minCoeff() < -1e-9) {
      throw ValidationError(
          "generator_from_map_family: theta(t) not positive semidefinite "
          "at t = " + std::to_string(t));
    }
    // Diagonal in the e_kk rho e_ll basis: multiplier (theta + ndot) / n
    // acting entrywise on rho_kl.
    Matrix l_super = Matrix::Zero(dim * dim, dim * dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      for (Eigen::Index l = 0; l < dim; ++l) {
        const Complex mult = (theta(k, l) + ndot(k, l)) / nt(k, l);
        l_super(l * dim + k, l * dim + k) = mult;
      }
    }
    return Superoperator(dim, l_super);
  };
  return gen;
}

double commutativity_defect(const TimeDependentGenerator& l, double t,
                            double u) {
  const Superoperator lt = l.at(t);
  const Superoperator lu = l.at(u);
  return operator_norm(lt.m * lu.m - lu.m * lt.m);
}

bool dissipativity_check(const Superoperator& l, double tol) {
  if (!is_legitimate_gksl(l, tol)) return false;
  // Spot-check the Kadison-derived inequality on sampled operators.
  const Superoperator ldual = dual(l);
  Rng rng(0x9d1551047ULL);
  const double scale = std::max(operator_norm(l.m), 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = rng.ginibre(l.d, l.d);
    const Matrix lhs = ldual.apply(a * a.adjoint()) -
                       ldual.apply(a) * a.adjoint() -
                       a * ldual.apply(a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(
        0.5 * (lhs + lhs.adjoint().eval()), Eigen::EigenvaluesOnly);
    const double bound = tol * scale * std::max(a.squaredNorm(), 1.0);
    if (es.eigenvalues().minCoeff() < -std::max(bound, 1e-9)) return false;
  }
  return true;
}

}  // namespace qdyn
