#include "symloop/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "symloop/calculus.hpp"
#include "symloop/linalg.hpp"

namespace symloop {

int FlagType::n() const {
  int s = 0;
  for (int r : ranks) s += r;
  return s;
}

int projector_rank(const Matrix& p) { return static_cast<int>(std::lround(p.trace().real())); }

FlagPoint::FlagPoint(std::vector<Matrix> projectors, double tol) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw Error(ErrorCode::InvalidArgument, "flag needs at least one subspace");
  const Eigen::Index n = projectors_.front().rows();
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const Matrix& p = projectors_[i];
    if (p.rows() != n || p.cols() != n) throw Error(ErrorCode::DimensionMismatch, "projector sizes differ");
    const double d = linalg::projector_defect(p);
    if (d > tol) throw Error(ErrorCode::InvalidArgument, "flag entry is not an orthogonal projector", d);
    for (std::size_t j = 0; j < i; ++j) {
      const double o = (p * projectors_[j]).norm();
      if (o > tol) throw Error(ErrorCode::InvalidArgument, "flag subspaces are not orthogonal", o);
    }
    sum += p;
  }
  const double s = (sum - Matrix::Identity(n, n)).norm();
  if (s > tol) throw Error(ErrorCode::InvalidArgument, "flag projectors do not sum to the identity", s);
}

FlagPoint FlagPoint::coordinate(const std::vector<int>& ranks) {
  int n = 0;
  for (int r : ranks) {
    if (r < 0) throw Error(ErrorCode::InvalidArgument, "negative flag rank");
    n += r;
  }
  std::vector<Matrix> ps;
  int offset = 0;
  for (int r : ranks) {
    Matrix p = Matrix::Zero(n, n);
    p.block(offset, offset, r, r).setIdentity();
    ps.push_back(p);
    offset += r;
  }
  return FlagPoint(std::move(ps));
}

FlagType FlagPoint::type() const {
  FlagType t;
  for (const auto& p : projectors_) t.ranks.push_back(projector_rank(p));
  return t;
}

TwistedAutomorphism::TwistedAutomorphism(FlagPoint flag, int sample_count) : flag_(std::move(flag)) {
  std::vector<Matrix> c(flag_.projectors().begin(), flag_.projectors().end());
  s_ = MatrixLoop(0, std::move(c), sample_count);
  s_omega_ = s_.evaluate(omega().value());
}

Matrix TwistedAutomorphism::tau(const Matrix& x) const { return s_omega_.adjoint() * x * s_omega_; }

Matrix TwistedAutomorphism::block(const Matrix& x, int r, int c) const {
  return flag_.projector(r) * x * flag_.projector(c);
}

Matrix TwistedAutomorphism::grade_component(const Matrix& x, int i) const {
  const int kk = k();
  const int target = ((i % kk) + kk) % kk;
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (int r = 0; r < kk; ++r)
    for (int c = 0; c < kk; ++c)
      if ((((c - r) % kk) + kk) % kk == target) out += block(x, r, c);
  return out;
}

double TwistedAutomorphism::grade_residual(const Matrix& x, int i) const {
  return (x - grade_component(x, i)).norm();
}

double TwistedAutomorphism::order_defect() const {
  double worst = 0.0;
  const Eigen::Index nn = n();
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = 0; j < nn; ++j) {
      Matrix e = Matrix::Zero(nn, nn);
      e(i, j) = 1.0;
      Matrix x = e;
      for (int l = 0; l < k(); ++l) x = tau(x);
      worst = std::max(worst, (x - e).norm());
    }
  return worst;
}

Matrix check_k_symmetric(const MatrixLoop& phi, int k, double tol) {
  const int kk = phi.sample_count();
  if (kk % k != 0)
    throw Error(ErrorCode::IncompatibleSampling,
                "order " + std::to_string(k) + " does not divide sample count " + std::to_string(kk));
  const auto s = phi.samples();
  const int step = kk / k;
  std::vector<Matrix> c;
  c.reserve(s.size());
  Matrix mean = Matrix::Zero(phi.cols(), phi.cols());
  for (int j = 0; j < kk; ++j) {
    c.push_back(s[static_cast<std::size_t>(j)].adjoint() * s[static_cast<std::size_t>((j + step) % kk)]);
    mean += c.back();
  }
  mean /= static_cast<double>(kk);
  double dev = 0.0;
  for (const auto& x : c) dev = std::max(dev, (x - mean).norm());
  if (dev > tol) throw Error(ErrorCode::NotKSymmetric, "Phi(lambda)^* Phi(omega lambda) is not constant", dev);
  Matrix p = Matrix::Identity(mean.rows(), mean.cols());
  for (int l = 0; l < k; ++l) p = p * mean;
  const double root = (p - Matrix::Identity(mean.rows(), mean.cols())).norm();
  if (root > tol) throw Error(ErrorCode::NotKSymmetric, "phi_k^k differs from the identity", root);
  return mean;
}

std::vector<Matrix> spectral_projectors(const Matrix& phi, int k, double tol) {
  const Eigen::Index n = phi.rows();
  std::vector<Matrix> powers{Matrix::Identity(n, n)};
  for (int l = 1; l <= k; ++l) powers.push_back(powers.back() * phi);
  const double root = (powers.back() - Matrix::Identity(n, n)).norm();
  if (root > tol) throw Error(ErrorCode::NotRootOfIdentity, "matrix is not a k-th root of the identity", root);
  std::vector<Matrix> out;
  for (int j = 0; j < k; ++j) {
    Matrix p = Matrix::Zero(n, n);
    for (int l = 0; l < k; ++l) p += detail::unit_phase(-static_cast<long long>(l) * j, k) * powers[static_cast<std::size_t>(l)];
    out.push_back(p / static_cast<double>(k));
  }
  return out;
}

std::vector<Matrix> spectral_projectors_product(const Matrix& phi, int k) {
  const Eigen::Index n = phi.rows();
  std::vector<Matrix> out;
  for (int j = 0; j < k; ++j) {
    Matrix p = Matrix::Identity(n, n);
    for (int i = 0; i < k; ++i) {
      if (i == j) continue;
      const cplx wi = detail::unit_phase(i, k);
      p = p * (phi - wi * Matrix::Identity(n, n)) / (detail::unit_phase(j, k) - wi);
    }
    out.push_back(p);
  }
  return out;
}

namespace {

Matrix frame_of(const Matrix& p) { return linalg::projector_frame(p); }

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

}  // namespace

KSymmetricDecomposition detwist(const MatrixLoop& phi, int k, double tol) {
  KSymmetricDecomposition d;
  d.k = k;
  d.phi_k = check_k_symmetric(phi, k);
  d.pi = spectral_projectors(d.phi_k, k);
  const Eigen::Index n = phi.rows();
  std::vector<Matrix> inv(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    d.ranks.push_back(projector_rank(d.pi[static_cast<std::size_t>(j)]));
    inv[static_cast<std::size_t>(k - 1 - j)] = d.pi[static_cast<std::size_t>(j)];
  }
  const MatrixLoop untwist(-(k - 1), std::move(inv), phi.sample_count());
  d.twisted = (phi * untwist).trimmed(kDropTol);
  const double off = off_multiple_mass(d.twisted, k);
  if (off > tol) throw Error(ErrorCode::TwistRemovalFailed, "Phi_k is not a function of lambda^k", off);
  d.psi = root_substitute(d.twisted, k, tol);
  Matrix acc = Matrix::Zero(n, n);
  for (int j = 0; j + 1 < k; ++j) {
    acc += d.pi[static_cast<std::size_t>(j)];
    d.alpha.push_back(frame_of(acc));
  }
  return d;
}

Filtration filtration_from_W(const TruncatedSubspace& w, int k, double tol) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  const Eigen::Index n = w.n;
  auto degree_class = [k](int m) { return ((m % k) + k) % k; };
  auto mask = [&](const Matrix& cols, int j) {
    Matrix out = cols;
    for (int m = w.lo; m <= w.hi; ++m)
      if (degree_class(m) != j) out.middleRows((m - w.lo) * n, n).setZero();
    return out;
  };
  Filtration f;
  f.k = k;
  const Matrix rest = w.basis - w.core * (w.core.adjoint() * w.basis);
  const Matrix rest_span = linalg::orthonormal_span_abs(rest, 1e-6);
  for (int j = 0; j < k; ++j) {
    // Components are not normalized, so measure them against their own norm.
    const Matrix comp = mask(w.core, j);
    const Matrix frame = linalg::orthonormal_span(comp);
    f.symmetry_residual = std::max(f.symmetry_residual, one_sided_sine(frame, w.basis));
  }
  if (f.symmetry_residual > tol)
    throw Error(ErrorCode::NotKSymmetricSubspace, "eigen-components leave the subspace", f.symmetry_residual);
  for (int j = 0; j < k; ++j) {
    // Degrees m = j + k p of W_j become degree p of V_j.
    const int p_lo = ceil_div(w.lo - j, k);
    const int p_hi = floor_div(w.hi - j, k);
    Matrix core_cols = mask(w.core, j);
    Matrix rest_cols = mask(rest_span, j);
    Matrix all(w.basis.rows(), core_cols.cols() + rest_cols.cols());
    all << core_cols, rest_cols;
    Matrix dec = Matrix::Zero(n * (p_hi - p_lo + 1), all.cols());
    for (int p = p_lo; p <= p_hi; ++p) dec.middleRows((p - p_lo) * n, n) = all.middleRows((j + k * p - w.lo) * n, n);
    TruncatedSubspace v = subspace_from_columns(dec, n, p_lo, p_hi, w.depth / k, static_cast<int>(core_cols.cols()),
                                                w.sample_count, 1e-9);
    v.shift_invariant = check_shift_invariant(v, tol);
    f.v.push_back(std::move(v));
  }
  auto contained = [](const TruncatedSubspace& a, const TruncatedSubspace& b) {
    const int lo = std::min(a.lo, b.lo), hi = std::max(a.hi, b.hi);
    return one_sided_sine(pad_window(a.core, a.n, a.lo, a.hi, lo, hi), pad_window(b.basis, b.n, b.lo, b.hi, lo, hi));
  };
  for (int j = 0; j + 1 < k; ++j)
    f.nesting_residual = std::max(f.nesting_residual, contained(f.v[static_cast<std::size_t>(j)], f.v[static_cast<std::size_t>(j + 1)]));
  TruncatedSubspace shifted = f.v.back();
  shifted.lo += 1;
  shifted.hi += 1;
  f.cyclic_residual = contained(shifted, f.v.front());
  return f;
}

MatrixLoop build_W(const MatrixLoop& psi, const std::vector<Matrix>& alpha, int k, double tol) {
  const Eigen::Index n = psi.rows();
  if (static_cast<int>(alpha.size()) != k - 1)
    throw Error(ErrorCode::InvalidArgument, "need k-1 subspaces alpha_0..alpha_{k-2}");
  std::vector<Matrix> p{Matrix::Zero(n, n)};
  for (const auto& a : alpha) {
    if (a.rows() != n) throw Error(ErrorCode::DimensionMismatch, "alpha basis has the wrong height");
    p.push_back(linalg::projector(linalg::orthonormal_span(a)));
  }
  p.push_back(Matrix::Identity(n, n));
  for (std::size_t j = 1; j + 1 < p.size(); ++j) {
    const double leak = ((Matrix::Identity(n, n) - p[j + 1]) * p[j]).norm();
    if (leak > tol) throw Error(ErrorCode::NotNested, "alpha_" + std::to_string(j - 1) + " is not inside the next", leak);
  }
  std::vector<Matrix> beta;
  for (std::size_t j = 1; j < p.size(); ++j) beta.push_back(p[j] - p[j - 1]);
  const MatrixLoop sum(0, std::move(beta), psi.sample_count());
  return (power_substitute(psi, k) * sum).trimmed(kDropTol);
}

Matrix cartan_embed(const Matrix& g, const TwistedAutomorphism& t) { return g * t.s_omega() * g.adjoint(); }

PrimitiveMap primitive_extract(const MatrixLoop& phi, int k, int l, double tol) {
  if (l <= 0 || k % l != 0) throw Error(ErrorCode::InvalidArgument, "l must divide k");
  PrimitiveMap out;
  out.l = l;
  out.phi_l = phi.evaluate(RootOfUnity{l, 1}.value());
  out.projectors = spectral_projectors(out.phi_l, l, tol);
  for (const auto& p : out.projectors) out.ranks.push_back(projector_rank(p));
  return out;
}

namespace {

double primitive_defect(const Matrix& psi, const Matrix& psi_z, const TwistedAutomorphism& t) {
  const Matrix a = psi.adjoint() * psi_z;
  return (a - t.grade_component(a, 0) - t.grade_component(a, -1)).norm();
}

}  // namespace

double check_primitive(const std::function<Matrix(cplx)>& lift, const TwistedAutomorphism& t,
                       const std::vector<cplx>& zs, double h, double tol) {
  double worst = 0.0;
  for (cplx z : zs) {
    const auto d = wirtinger(lift, z, h);
    if (d.error > tol) throw Error(ErrorCode::GridTooCoarse, "finite-difference error above tolerance", d.error);
    worst = std::max(worst, primitive_defect(lift(z), d.dz, t));
  }
  return worst;
}

double check_primitive(const std::function<Matrix(cplx)>& lift, const std::function<Matrix(cplx)>& lift_z,
                       const TwistedAutomorphism& t, const std::vector<cplx>& zs) {
  double worst = 0.0;
  for (cplx z : zs) worst = std::max(worst, primitive_defect(lift(z), lift_z(z), t));
  return worst;
}

double twist_residual(const MatrixLoop& gamma, const TwistedAutomorphism& t) {
  const int kk = gamma.sample_count();
  if (kk % t.k() != 0) throw Error(ErrorCode::IncompatibleSampling, "order does not divide the sample count");
  const auto s = gamma.samples();
  const int step = kk / t.k();
  double worst = 0.0;
  for (int j = 0; j < kk; ++j)
    worst = std::max(worst, (t.tau(s[static_cast<std::size_t>(j)]) - s[static_cast<std::size_t>((j + step) % kk)]).norm());
  return worst;
}

MatrixLoop gamma_tau(const MatrixLoop& gamma, const TwistedAutomorphism& t) {
  const MatrixLoop s = t.s().with_sample_count(gamma.sample_count());
  return (star(s) * power_substitute(gamma, t.k()) * s).trimmed(kDropTol);
}

MatrixLoop gamma_tau_inv(const MatrixLoop& gamma, const TwistedAutomorphism& t, double tol) {
  const double tw = twist_residual(gamma, t);
  if (tw > tol) throw Error(ErrorCode::NotTwisted, "loop does not satisfy tau(gamma(lambda)) = gamma(omega lambda)", tw);
  const MatrixLoop s = t.s().with_sample_count(gamma.sample_count());
  const MatrixLoop conj = s * gamma * star(s);
  try {
    return root_substitute(conj.trimmed(kDropTol), t.k(), tol);
  } catch (const Error& e) {
    throw Error(ErrorCode::NotTwisted, "conjugated loop is not a function of lambda^k", e.measure());
  }
}

MatrixLoop theta(const MatrixLoop& framing, const TwistedAutomorphism& t, double tol) {
  const double tw = twist_residual(framing, t);
  if (tw > tol) throw Error(ErrorCode::NotTwisted, "framing is not twisted", tw);
  const MatrixLoop s = t.s().with_sample_count(framing.sample_count());
  const Matrix at_one = framing.evaluate(1.0);
  const Matrix inv = at_one.partialPivLu().solve(Matrix::Identity(at_one.rows(), at_one.cols()));
  return (s * framing * inv).trimmed(kDropTol);
}

Matrix flag_lift(const std::vector<Matrix>& beta, const TwistedAutomorphism& t) {
  if (static_cast<int>(beta.size()) != t.k()) throw Error(ErrorCode::DimensionMismatch, "need one projector per flag entry");
  const Eigen::Index n = t.n();
  Matrix g = Matrix::Zero(n, n);
  for (int j = 0; j < t.k(); ++j) {
    const Matrix a = frame_of(t.flag().projector(j));
    const Matrix b = frame_of(beta[static_cast<std::size_t>(j)]);
    if (a.cols() != b.cols())
      throw Error(ErrorCode::DimensionMismatch, "rank of beta_" + std::to_string(j) + " differs from the flag type");
    g += b * a.adjoint();
  }
  return g;
}

MatrixLoop extended_framing(const MatrixLoop& phi, const TwistedAutomorphism& t) {
  const Matrix at_omega = phi.evaluate(t.omega().value());
  const auto beta = spectral_projectors(at_omega, t.k());
  const Matrix g = flag_lift(beta, t);
  const MatrixLoop s = t.s().with_sample_count(phi.sample_count());
  return (star(s) * phi * g).trimmed(kDropTol);
}

}  // namespace symloop
