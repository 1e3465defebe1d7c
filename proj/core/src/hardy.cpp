#include "symloop/hardy.hpp"

#include <algorithm>
#include <limits>

#include "symloop/linalg.hpp"

namespace symloop {

namespace {

// Orthonormal basis [C R] where C spans the first `core_cols` columns and R
// completes it to the span of all columns.
std::pair<Matrix, Matrix> two_group_span(const Matrix& cols, Eigen::Index core_cols, double rel_tol) {
  if (cols.cols() == 0) return {Matrix(cols.rows(), 0), Matrix(cols.rows(), 0)};
  const double scale = linalg::spectral_norm(cols);
  const double abs_tol = std::max(rel_tol * scale, std::numeric_limits<double>::min());
  Matrix core = linalg::orthonormal_span_abs(cols.leftCols(core_cols), abs_tol);
  Matrix rest = cols.rightCols(cols.cols() - core_cols);
  rest -= core * (core.adjoint() * rest);
  rest -= core * (core.adjoint() * rest);
  Matrix extra = linalg::orthonormal_span_abs(rest, abs_tol);
  Matrix basis(cols.rows(), core.cols() + extra.cols());
  basis << core, extra;
  return {std::move(basis), std::move(core)};
}

Matrix shift_down(const Matrix& cols, Eigen::Index n) {
  Matrix out = Matrix::Zero(cols.rows() + n, cols.cols());
  out.bottomRows(cols.rows()) = cols;
  return out;
}

}  // namespace

VectorLoop TruncatedSubspace::column(Eigen::Index j) const {
  return unstack(basis.col(j), n, lo, hi, sample_count);
}

Vector stack(const VectorLoop& f, int lo, int hi) {
  const Eigen::Index n = f.rows();
  Vector v = Vector::Zero(n * (hi - lo + 1));
  for (int m = std::max(lo, f.min_degree()); m <= std::min(hi, f.max_degree()); ++m)
    v.segment((m - lo) * n, n) = f.coeff(m);
  return v;
}

VectorLoop unstack(const Eigen::Ref<const Vector>& v, Eigen::Index n, int lo, int hi, int sample_count) {
  std::vector<Vector> c;
  c.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int m = lo; m <= hi; ++m) c.push_back(v.segment((m - lo) * n, n));
  return VectorLoop(lo, std::move(c), std::max(sample_count, hi - lo + 1)).trimmed(kDropTol);
}

Matrix pad_window(const Matrix& cols, Eigen::Index n, int lo, int hi, int new_lo, int new_hi) {
  if (new_lo > lo || new_hi < hi) throw Error(ErrorCode::InvalidArgument, "window can only grow");
  Matrix out = Matrix::Zero(n * (new_hi - new_lo + 1), cols.cols());
  out.middleRows((lo - new_lo) * n, cols.rows()) = cols;
  return out;
}

TruncatedSubspace subspace_from_columns(const Matrix& cols, Eigen::Index n, int lo, int hi, int depth,
                                        int core_cols, int sample_count, double rank_tol) {
  if (cols.rows() != n * (hi - lo + 1))
    throw Error(ErrorCode::DimensionMismatch, "column height does not match the window");
  TruncatedSubspace w;
  w.n = n;
  w.lo = lo;
  w.hi = hi;
  w.depth = depth;
  w.sample_count = sample_count;
  const Eigen::Index cc = core_cols < 0 ? cols.cols() : std::min<Eigen::Index>(core_cols, cols.cols());
  auto [basis, core] = two_group_span(cols, cc, rank_tol);
  w.basis = std::move(basis);
  w.core = std::move(core);
  return w;
}

TruncatedSubspace span_image(const MatrixLoop& g, int depth) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "depth must be nonnegative");
  const auto [sigma, where] = min_singular_value(g);
  if (sigma < 1e-8)
    throw Error(ErrorCode::SingularLoop, "loop is singular at sample " + std::to_string(where), where);
  const Eigen::Index n = g.rows();
  if (g.cols() != n) throw Error(ErrorCode::DimensionMismatch, "span_image needs a square loop");
  const int lo = g.min_degree();
  const int hi = g.max_degree() + depth;
  if (hi - lo + 1 > g.sample_count())
    throw Error(ErrorCode::WindowOverflow, "depth does not fit the sample count", hi - lo + 1);
  Matrix cols = Matrix::Zero(n * (hi - lo + 1), n * (depth + 1));
  for (int m = 0; m <= depth; ++m)
    for (int d = g.min_degree(); d <= g.max_degree(); ++d)
      cols.block((d + m - lo) * n, m * n, n, n) = g.coeff(d);
  TruncatedSubspace w =
      subspace_from_columns(cols, n, lo, hi, depth, static_cast<int>(n * (depth / 2 + 1)), g.sample_count());
  w.shift_invariant = true;
  return w;
}

double one_sided_sine(const Matrix& c, const Matrix& f) {
  if (c.cols() == 0) return 0.0;
  return linalg::spectral_norm(c - f * (f.adjoint() * c));
}

double shift_invariance_residual(const TruncatedSubspace& w) {
  const Matrix shifted = shift_down(w.core, w.n);
  const Matrix basis = pad_window(w.basis, w.n, w.lo, w.hi, w.lo, w.hi + 1);
  return one_sided_sine(shifted, basis);
}

bool check_shift_invariant(const TruncatedSubspace& w, double tol) { return shift_invariance_residual(w) < tol; }

std::vector<VectorLoop> wandering_basis(const TruncatedSubspace& w, double tol) {
  if (!w.shift_invariant) throw Error(ErrorCode::InvalidArgument, "subspace is not flagged shift-invariant");
  const Eigen::Index n = w.n;
  const Matrix q = pad_window(w.basis, n, w.lo, w.hi, w.lo, w.hi + 1);
  const Matrix sq = shift_down(w.basis, n);
  const Matrix r = sq - q * (q.adjoint() * sq);
  const linalg::Svd svd = linalg::svd(r);
  const auto& sv = svd.s;
  std::vector<Eigen::Index> small;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < tol) small.push_back(i);
  const Eigen::Index wander_dim = w.rank() - static_cast<Eigen::Index>(small.size());
  if (wander_dim != n)
    throw Error(ErrorCode::WrongMultiplicity,
                "wandering subspace has dimension " + std::to_string(wander_dim) + ", expected " +
                    std::to_string(n),
                static_cast<double>(wander_dim));
  Matrix v_small(svd.v.rows(), static_cast<Eigen::Index>(small.size()));
  for (std::size_t i = 0; i < small.size(); ++i) v_small.col(static_cast<Eigen::Index>(i)) = svd.v.col(small[i]);
  const Matrix y = linalg::orthonormal_span_abs(sq * v_small, 0.5);
  const Matrix rest = q - y * (y.adjoint() * q);
  const linalg::Svd top = linalg::svd(rest);
  std::vector<VectorLoop> out;
  for (Eigen::Index i = 0; i < n; ++i)
    out.push_back(unstack(top.u.col(i), n, w.lo, w.hi + 1, w.sample_count));
  return out;
}

MatrixLoop blh_symbol(const TruncatedSubspace& w, double unitarity_tol) {
  const auto vecs = wandering_basis(w, 1e-8);
  const Eigen::Index n = w.n;
  int lo = vecs.front().min_degree(), hi = vecs.front().max_degree();
  for (const auto& v : vecs) {
    lo = std::min(lo, v.min_degree());
    hi = std::max(hi, v.max_degree());
  }
  std::vector<Matrix> c(static_cast<std::size_t>(hi - lo + 1), Matrix::Zero(n, n));
  for (int m = lo; m <= hi; ++m)
    for (Eigen::Index i = 0; i < n; ++i) c[static_cast<std::size_t>(m - lo)].col(i) = vecs[static_cast<std::size_t>(i)].coeff(m);
  const MatrixLoop raw(lo, std::move(c), w.sample_count);
  const Matrix at_one = raw.evaluate(1.0);
  const Matrix norm = at_one.partialPivLu().solve(Matrix::Identity(n, n));
  MatrixLoop phi = (raw * norm).trimmed(kDropTol);
  const double defect = unitarity_defect(phi);
  if (defect > unitarity_tol)
    throw Error(ErrorCode::NonUnitaryResult, "symbol is not unitary on the sample grid", defect);
  return phi;
}

int max_factor_depth(const MatrixLoop& g) { return g.sample_count() - 2 * g.span() - 2; }

namespace {

FactorizationResult factor_at_depth(const MatrixLoop& g, int depth) {
  FactorizationResult out;
  out.depth = depth;
  out.phi = blh_symbol(span_image(g, depth));
  out.b = star(out.phi) * g;
  out.residual = max_sample_distance(g, out.phi * out.b);
  out.negative_mass = out.b.mass(out.b.min_degree(), -1);
  out.unitarity = unitarity_defect(out.phi);
  return out;
}

FactorizationResult factor_auto(const MatrixLoop& g) {
  const int cap = max_factor_depth(g);
  int depth = std::min(kDefaultFactorDepth, std::max(cap, 0));
  for (;;) {
    const bool last = depth == 0 || 2 * depth > cap;
    try {
      FactorizationResult out = factor_at_depth(g, depth);
      if (last || (out.unitarity <= kAutoUnitarityTol && out.residual <= kAutoResidualTol)) return out;
    } catch (const Error& e) {
      if (last || (e.code() != ErrorCode::NonUnitaryResult && e.code() != ErrorCode::WrongMultiplicity)) throw;
    }
    depth *= 2;
  }
}

}  // namespace

FactorizationResult iwasawa_factor(const MatrixLoop& g, int depth, double fail_tol) {
  FactorizationResult out = depth == kAutoDepth ? factor_auto(g) : factor_at_depth(g, depth);
  if (out.residual > fail_tol)
    throw Error(ErrorCode::FactorizationFailed, "Iwasawa residual too large", out.residual);
  return out;
}

double subspace_distance(const TruncatedSubspace& a, const TruncatedSubspace& b) {
  if (a.n != b.n) throw Error(ErrorCode::DimensionMismatch, "subspaces live in different C^n");
  const int lo = std::min(a.lo, b.lo);
  const int hi = std::max(a.hi, b.hi);
  const Matrix ab = pad_window(a.basis, a.n, a.lo, a.hi, lo, hi);
  const Matrix ac = pad_window(a.core, a.n, a.lo, a.hi, lo, hi);
  const Matrix bb = pad_window(b.basis, b.n, b.lo, b.hi, lo, hi);
  const Matrix bc = pad_window(b.core, b.n, b.lo, b.hi, lo, hi);
  return std::max(one_sided_sine(ac, bb), one_sided_sine(bc, ab));
}

}  // namespace symloop
