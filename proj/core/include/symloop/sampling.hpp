#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "symloop/linalg.hpp"
#include "symloop/loops.hpp"

// Seeded generators for random test data: matrices, projectors, based
// polynomial loops and nested chains of subspaces.
namespace symloop::sampling {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

// Projector onto a random subspace of the given rank.
inline Matrix random_projector(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  const Matrix u = linalg::random_unitary(n, rng);
  return linalg::projector(u.leftCols(rank));
}

// Product of `factors` loops pi + lambda (I - pi): based, unitary, polynomial.
inline MatrixLoop random_based_loop(Eigen::Index n, int factors, std::mt19937_64& rng,
                                    int sample_count = kDefaultSampleCount) {
  std::uniform_int_distribution<Eigen::Index> rank(1, n - 1);
  MatrixLoop out = identity_loop(n, sample_count);
  for (int f = 0; f < factors; ++f) {
    const Matrix p = random_projector(n, rank(rng), rng);
    out = out * MatrixLoop(0, {p, Matrix(Matrix::Identity(n, n) - p)}, sample_count);
  }
  return out;
}

// c_0 = 3 I + noise, other coefficients small: invertible on the circle.
inline MatrixLoop random_invertible_loop(Eigen::Index n, int lo, int hi, std::mt19937_64& rng,
                                         int sample_count = kDefaultSampleCount) {
  std::vector<Matrix> c;
  for (int m = lo; m <= hi; ++m) {
    Matrix x = random_matrix(n, n, rng, m == 0 ? 0.3 : 0.2);
    if (m == 0) x += 3.0 * Matrix::Identity(n, n);
    c.push_back(x);
  }
  return MatrixLoop(lo, std::move(c), sample_count);
}

// Orthonormal bases of a strictly increasing chain of k - 1 subspaces of C^n.
inline std::vector<Matrix> random_nested(Eigen::Index n, int k, std::mt19937_64& rng) {
  std::vector<Eigen::Index> ranks;
  std::vector<Eigen::Index> pool;
  for (Eigen::Index r = 1; r < n; ++r) pool.push_back(r);
  std::shuffle(pool.begin(), pool.end(), rng);
  ranks.assign(pool.begin(), pool.begin() + (k - 1));
  std::sort(ranks.begin(), ranks.end());
  const Matrix u = linalg::random_unitary(n, rng);
  std::vector<Matrix> alpha;
  for (const auto r : ranks) alpha.push_back(u.leftCols(r));
  return alpha;
}

}  // namespace symloop::sampling
