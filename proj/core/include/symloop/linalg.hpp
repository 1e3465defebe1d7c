#pragma once

#include "symloop/types.hpp"

// Dense helpers shared by the loop, subspace and geometry modules.
namespace symloop::linalg {

Matrix identity(Eigen::Index n);

// Thin singular value decomposition m = u diag(s) v^*, s descending.
struct Svd {
  Matrix u;
  Eigen::VectorXd s;
  Matrix v;
};

Svd svd(const Matrix& m, bool vectors = true);
Eigen::VectorXd singular_values(const Matrix& m);
double spectral_norm(const Matrix& m);

// Hermitian projector onto the column span of an orthonormal frame.
Matrix projector(const Matrix& orthonormal_frame);

// Orthonormal basis (left singular vectors) of the column span of `m`,
// keeping singular values above `rel_tol * sigma_max`.
Matrix orthonormal_span(const Matrix& m, double rel_tol = kRankTol);

// As above with an absolute singular-value threshold.
Matrix orthonormal_span_abs(const Matrix& m, double abs_tol);

// Orthonormal basis of the image of a Hermitian projector.
Matrix projector_frame(const Matrix& p);

int numerical_rank(const Matrix& m, double rel_tol = kRankTol);

// Largest principal-angle sine between the spans of two orthonormal frames.
double subspace_sine(const Matrix& a, const Matrix& b);

// Frobenius norm of (I - P_b) a: how far the span of `a` sticks out of span(b).
double containment_residual(const Matrix& a_frame, const Matrix& b_frame);

// Hermitian-idempotent defect max(||P - P*||, ||P^2 - P||).
double projector_defect(const Matrix& p);

double unitarity_defect(const Matrix& u);

Matrix expm(const Matrix& a);

// Random unitary from the Haar measure (QR of a complex Gaussian matrix).
template <class Rng>
Matrix random_unitary(Eigen::Index n, Rng& rng);

}  // namespace symloop::linalg

#include <random>

namespace symloop::linalg {

template <class Rng>
Matrix random_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace symloop::linalg
