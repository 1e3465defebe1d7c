#include "symloop/linalg.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "symloop/error.hpp"

namespace symloop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitModulus: return "NonUnitModulus";
    case ErrorCode::WindowOverflow: return "WindowOverflow";
    case ErrorCode::IncompatibleSampling: return "IncompatibleSampling";
    case ErrorCode::NotPowerOfLambdaK: return "NotPowerOfLambdaK";
    case ErrorCode::SingularLoop: return "SingularLoop";
    case ErrorCode::WrongMultiplicity: return "WrongMultiplicity";
    case ErrorCode::NonUnitaryResult: return "NonUnitaryResult";
    case ErrorCode::FactorizationFailed: return "FactorizationFailed";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotKSymmetric: return "NotKSymmetric";
    case ErrorCode::NotRootOfIdentity: return "NotRootOfIdentity";
    case ErrorCode::TwistRemovalFailed: return "TwistRemovalFailed";
    case ErrorCode::NotKSymmetricSubspace: return "NotKSymmetricSubspace";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::NotTwisted: return "NotTwisted";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::LambdaMinusTwoLeak: return "LambdaMinusTwoLeak";
    case ErrorCode::RankUnstable: return "RankUnstable";
    case ErrorCode::NotNilconformal: return "NotNilconformal";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::NotFull: return "NotFull";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int RootOfUnity::order() const {
  const int p = ((power % k) + k) % k;
  return k / std::gcd(k, p == 0 ? k : p);
}

namespace linalg {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix projector(const Matrix& frame) { return frame * frame.adjoint(); }

Svd svd(const Matrix& m, bool vectors) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int r = std::min(rows, cols);
  Svd out;
  out.s.resize(r);
  if (r == 0) {
    out.u = Matrix(m.rows(), 0);
    out.v = Matrix(m.cols(), 0);
    return out;
  }
  Matrix a = m;
  Matrix vt;
  const char job = vectors ? 'S' : 'N';
  if (vectors) {
    out.u.resize(rows, r);
    vt.resize(r, cols);
  }
  cplx* u_ptr = vectors ? out.u.data() : nullptr;
  cplx* vt_ptr = vectors ? vt.data() : nullptr;
  Eigen::VectorXd superb(r);
  const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, rows, cols, a.data(), rows, out.s.data(), u_ptr,
                                         std::max<lapack_int>(1, rows), vt_ptr, std::max<lapack_int>(1, r),
                                         superb.data());
  if (info != 0) throw Error(ErrorCode::InvalidArgument, "singular value decomposition failed", info);
  if (vectors) out.v = vt.adjoint();
  return out;
}

Eigen::VectorXd singular_values(const Matrix& m) { return svd(m, false).s; }

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

namespace {

Matrix leading_left_vectors(const Matrix& m, double threshold) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  const Svd d = svd(m);
  Eigen::Index r = 0;
  while (r < d.s.size() && d.s(r) > threshold) ++r;
  return d.u.leftCols(r);
}

}  // namespace

Matrix orthonormal_span(const Matrix& m, double rel_tol) {
  if (m.cols() == 0 || m.rows() == 0) return Matrix(m.rows(), 0);
  const Svd d = svd(m);
  if (d.s.size() == 0 || d.s(0) == 0.0) return Matrix(m.rows(), 0);
  const double threshold = rel_tol * d.s(0);
  Eigen::Index r = 0;
  while (r < d.s.size() && d.s(r) > threshold) ++r;
  return d.u.leftCols(r);
}

Matrix orthonormal_span_abs(const Matrix& m, double abs_tol) {
  return leading_left_vectors(m, abs_tol);
}

Matrix projector_frame(const Matrix& p) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (p + p.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    if (eig.eigenvalues()(i) > 0.5) keep.push_back(i);
  Matrix frame(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c)
    frame.col(static_cast<Eigen::Index>(c)) = eig.eigenvectors().col(keep[c]);
  return frame;
}

int numerical_rank(const Matrix& m, double rel_tol) {
  return static_cast<int>(orthonormal_span(m, rel_tol).cols());
}

double containment_residual(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return a.norm();
  Matrix r = a - b * (b.adjoint() * a);
  return r.norm();
}

double subspace_sine(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) return 1.0;
  if (a.cols() == 0) return 0.0;
  auto one_sided = [](const Matrix& x, const Matrix& y) { return spectral_norm(x - y * (y.adjoint() * x)); };
  return std::max(one_sided(a, b), one_sided(b, a));
}

double projector_defect(const Matrix& p) {
  return std::max((p - p.adjoint()).norm(), (p * p - p).norm());
}

double unitarity_defect(const Matrix& u) {
  return (u * u.adjoint() - identity(u.rows())).norm();
}

Matrix expm(const Matrix& a) { return a.exp(); }

}  // namespace linalg
}  // namespace symloop
