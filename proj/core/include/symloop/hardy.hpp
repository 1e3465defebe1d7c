#pragma once

#include <vector>

#include "symloop/loops.hpp"

namespace symloop {

// Finite model of a closed subspace of L^2(S^1, C^n). Vectors are stored in
// stacked Fourier coordinates: entry (m - lo) * n + i holds the i-th
// component of the degree-m coefficient, for m in [lo, hi].
//
// `basis` spans the truncated subspace. `core` spans a subspace of it whose
// elements stay clear of the truncation frontier (for span_image, the
// generators of depth at most depth/2). Comparisons and shift checks use the
// core on one side and the full basis on the other.
struct TruncatedSubspace {
  Eigen::Index n = 1;
  int lo = 0;
  int hi = 0;
  int depth = 0;
  int sample_count = kDefaultSampleCount;
  Matrix basis;
  Matrix core;
  bool shift_invariant = false;

  int rank() const { return static_cast<int>(basis.cols()); }
  int core_rank() const { return static_cast<int>(core.cols()); }
  Eigen::Index dim() const { return n * (hi - lo + 1); }
  VectorLoop column(Eigen::Index j) const;
};

// Stacked coordinates of `f` on [lo, hi]. Coefficients outside are dropped.
Vector stack(const VectorLoop& f, int lo, int hi);
VectorLoop unstack(const Eigen::Ref<const Vector>& v, Eigen::Index n, int lo, int hi,
                   int sample_count = kDefaultSampleCount);

// Re-express stacked columns given on [lo, hi] on a larger window.
Matrix pad_window(const Matrix& cols, Eigen::Index n, int lo, int hi, int new_lo, int new_hi);

// Subspace from explicit columns, orthonormalized with relative rank
// tolerance `rank_tol`. The first `core_cols` columns generate the core
// (all of them when negative).
TruncatedSubspace subspace_from_columns(const Matrix& cols, Eigen::Index n, int lo, int hi, int depth,
                                        int core_cols = -1, int sample_count = kDefaultSampleCount,
                                        double rank_tol = kRankTol);

// span{ g lambda^m e_i : 0 <= m <= depth }.
TruncatedSubspace span_image(const MatrixLoop& g, int depth);

// Largest distance of a unit vector of S * core from the span of the basis.
double shift_invariance_residual(const TruncatedSubspace& w);
bool check_shift_invariant(const TruncatedSubspace& w, double tol = 1e-8);

// Orthonormal basis of W minus SW, computed from the intersection of the
// truncated W with its shift. Returns exactly n vectors.
std::vector<VectorLoop> wandering_basis(const TruncatedSubspace& w, double tol = 1e-8);

// The based unitary symbol: wandering vectors as columns, normalized so
// that the value at lambda = 1 is the identity.
MatrixLoop blh_symbol(const TruncatedSubspace& w, double unitarity_tol = 1e-8);

struct FactorizationResult {
  MatrixLoop phi;
  MatrixLoop b;
  double residual = 0.0;
  double negative_mass = 0.0;
  double unitarity = 0.0;
  int depth = 0;
};

inline constexpr int kDefaultFactorDepth = 40;
// Start at kDefaultFactorDepth and double while the symbol misses
// kAutoUnitarityTol or the residual misses kAutoResidualTol, as long as the
// window fits the sample count.
inline constexpr int kAutoDepth = -1;
inline constexpr double kAutoUnitarityTol = 1e-11;
inline constexpr double kAutoResidualTol = 1e-10;

// g = phi * b with phi based unitary and b extending holomorphically into
// the unit disc.
FactorizationResult iwasawa_factor(const MatrixLoop& g, int depth = kAutoDepth, double fail_tol = 1e-6);

// Largest depth whose factorization products still fit the sample count.
int max_factor_depth(const MatrixLoop& g);

// Largest principal-angle sine between the spans, measured core-into-full
// in both directions after padding to a common window.
double subspace_distance(const TruncatedSubspace& a, const TruncatedSubspace& b);

// Spectral norm of (I - F F^*) C for orthonormal F.
double one_sided_sine(const Matrix& c, const Matrix& f);

}  // namespace symloop
