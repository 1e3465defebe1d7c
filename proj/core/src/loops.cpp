#include "symloop/loops.hpp"

#include "symloop/linalg.hpp"

namespace symloop {

MatrixLoop identity_loop(Eigen::Index n, int sample_count) {
  return MatrixLoop::constant(Matrix::Identity(n, n), sample_count);
}

namespace {

template <class CoefB, class CoefOut>
LaurentLoop<CoefOut> convolve(const MatrixLoop& a, const LaurentLoop<CoefB>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "loop product shapes differ");
  const int lo = a.min_degree() + b.min_degree();
  const int hi = a.max_degree() + b.max_degree();
  std::vector<CoefOut> c(static_cast<std::size_t>(hi - lo + 1), CoefOut::Zero(a.rows(), b.cols()));
  for (int i = a.min_degree(); i <= a.max_degree(); ++i) {
    const Matrix& ai = a.coeffs()[static_cast<std::size_t>(i - a.min_degree())];
    if (ai.isZero(0.0)) continue;
    for (int j = b.min_degree(); j <= b.max_degree(); ++j)
      c[static_cast<std::size_t>(i + j - lo)].noalias() +=
          ai * b.coeffs()[static_cast<std::size_t>(j - b.min_degree())];
  }
  const int k = std::max(a.sample_count(), b.sample_count());
  // Build with a generous sample count, trim, then enforce alias-freeness.
  LaurentLoop<CoefOut> raw(lo, std::move(c), std::max(k, hi - lo + 1));
  LaurentLoop<CoefOut> out = raw.trimmed(kDropTol);
  return out.with_sample_count(k);
}

}  // namespace

MatrixLoop operator*(const MatrixLoop& a, const MatrixLoop& b) { return convolve<Matrix, Matrix>(a, b); }

VectorLoop operator*(const MatrixLoop& a, const VectorLoop& v) { return convolve<Vector, Vector>(a, v); }

MatrixLoop operator*(const Matrix& a, const MatrixLoop& b) {
  std::vector<Matrix> c;
  for (const auto& x : b.coeffs()) c.push_back(a * x);
  return MatrixLoop(b.min_degree(), std::move(c), b.sample_count());
}

MatrixLoop operator*(const MatrixLoop& a, const Matrix& b) {
  std::vector<Matrix> c;
  for (const auto& x : a.coeffs()) c.push_back(x * b);
  return MatrixLoop(a.min_degree(), std::move(c), a.sample_count());
}

MatrixLoop star(const MatrixLoop& g) {
  std::vector<Matrix> c;
  for (int m = -g.max_degree(); m <= -g.min_degree(); ++m) c.push_back(g.coeff(-m).adjoint());
  return MatrixLoop(-g.max_degree(), std::move(c), g.sample_count());
}

MatrixLoop loop_exp(const MatrixLoop& g, double drop_tol) {
  auto s = g.samples();
  for (auto& x : s) x = linalg::expm(x);
  return MatrixLoop::from_samples(s, drop_tol);
}

MatrixLoop loop_inverse(const MatrixLoop& g, double min_sigma) {
  const auto [sigma, where] = min_singular_value(g);
  if (sigma < min_sigma)
    throw Error(ErrorCode::SingularLoop, "loop is singular at sample " + std::to_string(where), where);
  auto s = g.samples();
  for (auto& x : s) x = x.inverse().eval();
  return MatrixLoop::from_samples(s);
}

double unitarity_defect(const MatrixLoop& g) {
  double worst = 0.0;
  for (const auto& x : g.samples()) worst = std::max(worst, linalg::unitarity_defect(x));
  return worst;
}

double basing_defect(const MatrixLoop& g) {
  return (g.evaluate(1.0) - Matrix::Identity(g.rows(), g.cols())).norm();
}

std::pair<double, int> min_singular_value(const MatrixLoop& g) {
  double best = std::numeric_limits<double>::infinity();
  int where = 0;
  const auto s = g.samples();
  for (int j = 0; j < static_cast<int>(s.size()); ++j) {
    const double v = linalg::singular_values(s[static_cast<std::size_t>(j)]).minCoeff();
    if (v < best) {
      best = v;
      where = j;
    }
  }
  return {best, where};
}

double max_sample_distance(const MatrixLoop& a, const MatrixLoop& b) {
  const int k = std::max(a.sample_count(), b.sample_count());
  const auto sa = a.with_sample_count(k).samples();
  const auto sb = b.with_sample_count(k).samples();
  double worst = 0.0;
  for (std::size_t j = 0; j < sa.size(); ++j) worst = std::max(worst, (sa[j] - sb[j]).norm());
  return worst;
}

}  // namespace symloop
