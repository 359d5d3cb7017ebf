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

#include <cmath>
#include <cstdint>

#include "qdyn/matrix.hpp"

namespace qdyn {

/// SplitMix64: seedable, splittable 64-bit generator.  Fully specified here
/// so that alternate implementations reproduce identical streams:
/// state advances by 0x9E3779B97F4A7C15 and the output is the
/// murmur-style finalization of the new state.  split() derives an
/// independent stream by seeding a child with the next output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  Rng split() { return Rng(next_u64()); }

  /// Uniform in [0, 1).
  double uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (always consumes two uniforms).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * M_PI * u2);
  }

  Complex complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  Matrix ginibre(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  /// Random Hermitian matrix with Gaussian entries.
  Matrix hermitian(Eigen::Index d) {
    Matrix g = ginibre(d, d);
    return 0.5 * (g + g.adjoint().eval());
  }

  /// Random density matrix from the Hilbert-Schmidt ensemble.
  Matrix density_matrix(Eigen::Index d) {
    Matrix g = ginibre(d, d);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
  }

 private:
  std::uint64_t state_;
};

}  // namespace qdyn
