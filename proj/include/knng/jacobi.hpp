// Copyright 2026 The knng Authors
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

#ifndef KNNG_JACOBI_HPP_
#define KNNG_JACOBI_HPP_

// Dense symmetric eigensolver by cyclic Jacobi rotations.  Self-contained
// and accurate enough for the moderate matrix sizes used by the spectral
// estimator; not intended for large n.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace knng {

struct SymmetricEigen {
  std::vector<double> values;                // sorted descending
  std::vector<std::vector<double>> vectors;  // vectors[j] pairs with values[j]
};

inline double off_diagonal_norm(const std::vector<std::vector<double>>& a) {
  double s = 0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += a[i][j] * a[i][j];
  return std::sqrt(2 * s);
}

// Eigen-decomposition of a symmetric matrix.  Sweeps Givens rotations over
// all off-diagonal positions until the off-diagonal norm drops below tol.
inline SymmetricEigen jacobi_eigensystem(std::vector<std::vector<double>> a,
                                         double tol = 1e-10,
                                         int max_sweeps = 100) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("jacobi_eigensystem: empty matrix");
  for (const auto& row : a)
    if (row.size() != n)
      throw std::invalid_argument("jacobi_eigensystem: matrix not square");

  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * apq);
        const double t =
            (theta >= 0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double app = a[p][p] - t * apq;
        const double aqq = a[q][q] + t * apq;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = a[p][i] = c * aip - s * aiq;
          a[i][q] = a[q][i] = s * aip + c * aiq;
        }
        a[p][p] = app;
        a[q][q] = aqq;
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > tol)
    throw std::runtime_error("jacobi_eigensystem: did not converge");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  SymmetricEigen out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t j = idx[r];
    out.values.push_back(a[j][j]);
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v[i][j];
    out.vectors.push_back(std::move(col));
  }
  return out;
}

}  // namespace knng

#endif  // KNNG_JACOBI_HPP_
