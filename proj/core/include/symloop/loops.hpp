#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "symloop/error.hpp"
#include "symloop/types.hpp"

namespace symloop {

namespace detail {

// exp(2 pi i * index / count) with the index reduced first, so that sample
// phases are reproduced exactly for every degree.
inline cplx unit_phase(long long index, int count) {
  long long r = index % count;
  if (r < 0) r += count;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / count);
}

}  // namespace detail

// A truncated Laurent series sum_m c_m lambda^m on the unit circle with
// matrix (or vector) coefficients. The coefficient window is contiguous and
// never empty; the zero loop is a single zero coefficient at degree 0.
//
// The sample view at lambda_j = exp(2 pi i j / K) is derived on demand.
// Products and substitutions act on coefficients; pointwise nonlinear maps
// (exponentials, inverses) go through `samples()` and `from_samples()`.
template <class Coef>
class LaurentLoop {
 public:
  LaurentLoop() : LaurentLoop(1, 1) {}

  LaurentLoop(Eigen::Index rows, Eigen::Index cols, int sample_count = kDefaultSampleCount)
      : rows_(rows), cols_(cols), coeffs_{Coef::Zero(rows, cols)}, sample_count_(sample_count) {}

  LaurentLoop(int min_degree, std::vector<Coef> coeffs, int sample_count = kDefaultSampleCount)
      : min_degree_(min_degree), coeffs_(std::move(coeffs)), sample_count_(sample_count) {
    if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "loop needs at least one coefficient");
    rows_ = coeffs_.front().rows();
    cols_ = coeffs_.front().cols();
    for (const auto& c : coeffs_) {
      if (c.rows() != rows_ || c.cols() != cols_)
        throw Error(ErrorCode::DimensionMismatch, "coefficient shapes differ");
      if (!c.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
    check_alias_free();
  }

  static LaurentLoop monomial(const Coef& c, int degree, int sample_count = kDefaultSampleCount) {
    return LaurentLoop(degree, std::vector<Coef>{c}, sample_count);
  }

  static LaurentLoop constant(const Coef& c, int sample_count = kDefaultSampleCount) {
    return monomial(c, 0, sample_count);
  }

  // Discrete Fourier analysis of samples at the K-th roots of unity, keeping
  // degrees in [-K/2, K/2 - 1] and dropping coefficients below `drop_tol`.
  static LaurentLoop from_samples(const std::vector<Coef>& samples, double drop_tol = kDropTol) {
    const int k = static_cast<int>(samples.size());
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "no samples");
    const int lo = -k / 2;
    std::vector<Coef> coeffs;
    coeffs.reserve(static_cast<std::size_t>(k));
    for (int m = lo; m < lo + k; ++m) {
      Coef c = Coef::Zero(samples[0].rows(), samples[0].cols());
      for (int j = 0; j < k; ++j) c += detail::unit_phase(-static_cast<long long>(j) * m, k) * samples[j];
      coeffs.push_back(c / static_cast<double>(k));
    }
    return LaurentLoop(lo, std::move(coeffs), k).trimmed(drop_tol);
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  int min_degree() const { return min_degree_; }
  int max_degree() const { return min_degree_ + static_cast<int>(coeffs_.size()) - 1; }
  int span() const { return static_cast<int>(coeffs_.size()); }
  int sample_count() const { return sample_count_; }
  double dropped_mass() const { return dropped_mass_; }
  const std::vector<Coef>& coeffs() const { return coeffs_; }

  Coef coeff(int degree) const {
    if (degree < min_degree() || degree > max_degree()) return Coef::Zero(rows_, cols_);
    return coeffs_[static_cast<std::size_t>(degree - min_degree_)];
  }

  // loop_eval: sum_m c_m lambda^m for |lambda| = 1.
  Coef operator()(cplx lambda) const {
    if (std::abs(std::abs(lambda) - 1.0) > kUnitModulusTol)
      throw Error(ErrorCode::NonUnitModulus, "evaluation point off the unit circle",
                  std::abs(lambda));
    return evaluate(lambda);
  }

  // Evaluation without the unit-circle check (used for analytic continuation
  // in tests and for lambda computed from roots of unity).
  Coef evaluate(cplx lambda) const {
    Coef out = Coef::Zero(rows_, cols_);
    cplx p = std::pow(lambda, max_degree());
    const cplx inv = 1.0 / lambda;
    for (int m = max_degree(); m >= min_degree(); --m) {
      out += p * coeff(m);
      p *= inv;
    }
    return out;
  }

  Coef sample(int j) const {
    Coef out = Coef::Zero(rows_, cols_);
    for (int m = min_degree(); m <= max_degree(); ++m)
      out += detail::unit_phase(static_cast<long long>(j) * m, sample_count_) * coeff(m);
    return out;
  }

  std::vector<Coef> samples() const {
    std::vector<Coef> out;
    out.reserve(static_cast<std::size_t>(sample_count_));
    for (int j = 0; j < sample_count_; ++j) out.push_back(sample(j));
    return out;
  }

  // Zero coefficients with norm below `tol`, shrink the window to the
  // remaining support and accumulate the dropped norm in dropped_mass().
  LaurentLoop trimmed(double tol = kDropTol) const {
    LaurentLoop out = *this;
    int first = -1, last = -1;
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
      const double nrm = out.coeffs_[i].norm();
      if (nrm < tol) {
        out.dropped_mass_ += nrm;
        out.coeffs_[i].setZero();
      } else {
        if (first < 0) first = static_cast<int>(i);
        last = static_cast<int>(i);
      }
    }
    if (first < 0) {
      out.coeffs_.assign(1, Coef::Zero(rows_, cols_));
      out.min_degree_ = 0;
      return out;
    }
    out.coeffs_ = std::vector<Coef>(out.coeffs_.begin() + first, out.coeffs_.begin() + last + 1);
    out.min_degree_ = min_degree_ + first;
    return out;
  }

  LaurentLoop with_sample_count(int sample_count) const {
    LaurentLoop out = *this;
    out.sample_count_ = sample_count;
    out.check_alias_free();
    return out;
  }

  // Restrict or zero-pad to [lo, hi]. Coefficients outside are discarded and
  // their norm is added to dropped_mass().
  LaurentLoop with_window(int lo, int hi) const {
    std::vector<Coef> c;
    for (int m = lo; m <= hi; ++m) c.push_back(coeff(m));
    LaurentLoop out(lo, std::move(c), sample_count_);
    out.dropped_mass_ = dropped_mass_ + mass(min_degree(), lo - 1) + mass(hi + 1, max_degree());
    return out;
  }

  // Sum of coefficient Frobenius norms over degrees in [lo, hi].
  double mass(int lo, int hi) const {
    double s = 0.0;
    for (int m = std::max(lo, min_degree()); m <= std::min(hi, max_degree()); ++m) s += coeff(m).norm();
    return s;
  }

  // Largest coefficient-wise Frobenius distance over the union of windows.
  double coefficient_distance(const LaurentLoop& other) const {
    double d = 0.0;
    const int lo = std::min(min_degree(), other.min_degree());
    const int hi = std::max(max_degree(), other.max_degree());
    for (int m = lo; m <= hi; ++m) d = std::max(d, (coeff(m) - other.coeff(m)).norm());
    return d;
  }

  LaurentLoop operator+(const LaurentLoop& o) const { return combine(o, 1.0); }
  LaurentLoop operator-(const LaurentLoop& o) const { return combine(o, -1.0); }

  LaurentLoop operator*(cplx a) const {
    LaurentLoop out = *this;
    for (auto& c : out.coeffs_) c *= a;
    return out;
  }

 private:
  LaurentLoop combine(const LaurentLoop& o, double sign) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "loop shapes differ");
    const int lo = std::min(min_degree(), o.min_degree());
    const int hi = std::max(max_degree(), o.max_degree());
    std::vector<Coef> c;
    for (int m = lo; m <= hi; ++m) c.push_back(coeff(m) + sign * o.coeff(m));
    return LaurentLoop(lo, std::move(c), std::max(sample_count_, o.sample_count_));
  }

  void check_alias_free() const {
    if (sample_count_ <= 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
    if (span() > sample_count_)
      throw Error(ErrorCode::WindowOverflow,
                  "coefficient window [" + std::to_string(min_degree()) + ", " +
                      std::to_string(max_degree()) + "] aliases on " + std::to_string(sample_count_) +
                      " samples",
                  span());
  }

  Eigen::Index rows_ = 1;
  Eigen::Index cols_ = 1;
  int min_degree_ = 0;
  std::vector<Coef> coeffs_;
  int sample_count_ = kDefaultSampleCount;
  double dropped_mass_ = 0.0;
};

using MatrixLoop = LaurentLoop<Matrix>;
using VectorLoop = LaurentLoop<Vector>;

MatrixLoop identity_loop(Eigen::Index n, int sample_count = kDefaultSampleCount);

// loop_mul. Coefficient convolution followed by the drop policy; throws
// WindowOverflow when the product support does not fit the sample count.
MatrixLoop operator*(const MatrixLoop& a, const MatrixLoop& b);
VectorLoop operator*(const MatrixLoop& a, const VectorLoop& v);
MatrixLoop operator*(const Matrix& a, const MatrixLoop& b);
MatrixLoop operator*(const MatrixLoop& a, const Matrix& b);

// Pointwise adjoint on the circle: c'_m = c_{-m}^*.
MatrixLoop star(const MatrixLoop& g);

// Pointwise matrix exponential, computed on samples.
MatrixLoop loop_exp(const MatrixLoop& g, double drop_tol = kDropTol);

// Pointwise inverse, computed on samples. Throws SingularLoop.
MatrixLoop loop_inverse(const MatrixLoop& g, double min_sigma = 1e-8);

double unitarity_defect(const MatrixLoop& g);
double basing_defect(const MatrixLoop& g);
// Smallest singular value over all samples, and the sample index attaining it.
std::pair<double, int> min_singular_value(const MatrixLoop& g);
double max_sample_distance(const MatrixLoop& a, const MatrixLoop& b);

// f(lambda) -> f(omega lambda): c'_m = omega^m c_m. Requires k | K.
template <class Coef>
LaurentLoop<Coef> rotate(const LaurentLoop<Coef>& f, RootOfUnity omega) {
  if (f.sample_count() % omega.k != 0)
    throw Error(ErrorCode::IncompatibleSampling,
                "rotation order " + std::to_string(omega.k) + " does not divide sample count " +
                    std::to_string(f.sample_count()));
  std::vector<Coef> c;
  c.reserve(f.coeffs().size());
  for (int m = f.min_degree(); m <= f.max_degree(); ++m)
    c.push_back(detail::unit_phase(static_cast<long long>(omega.power) * m, omega.k) * f.coeff(m));
  return LaurentLoop<Coef>(f.min_degree(), std::move(c), f.sample_count());
}

// f(lambda) -> f(lambda^k).
template <class Coef>
LaurentLoop<Coef> power_substitute(const LaurentLoop<Coef>& f, int k) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "power must be positive");
  const int lo = f.min_degree() * k;
  const int hi = f.max_degree() * k;
  if (hi - lo + 1 > f.sample_count())
    throw Error(ErrorCode::WindowOverflow, "substituted window exceeds the sample count", hi - lo + 1);
  std::vector<Coef> c(static_cast<std::size_t>(hi - lo + 1), Coef::Zero(f.rows(), f.cols()));
  for (int m = f.min_degree(); m <= f.max_degree(); ++m) c[static_cast<std::size_t>(m * k - lo)] = f.coeff(m);
  return LaurentLoop<Coef>(lo, std::move(c), f.sample_count());
}

// Largest coefficient norm at degrees not divisible by k.
template <class Coef>
double off_multiple_mass(const LaurentLoop<Coef>& f, int k) {
  double worst = 0.0;
  for (int m = f.min_degree(); m <= f.max_degree(); ++m)
    if (m % k != 0) worst = std::max(worst, f.coeff(m).norm());
  return worst;
}

// f(lambda^{1/k}) for f a function of lambda^k, by coefficient decimation
// (no branch of the k-th root is ever chosen).
template <class Coef>
LaurentLoop<Coef> root_substitute(const LaurentLoop<Coef>& f, int k, double tol = kStructuralTol) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "root order must be positive");
  const double off = off_multiple_mass(f, k);
  if (off > tol)
    throw Error(ErrorCode::NotPowerOfLambdaK,
                "loop has coefficients at degrees not divisible by " + std::to_string(k), off);
  auto floor_div = [k](int m) { return m >= 0 ? m / k : -((-m + k - 1) / k); };
  const int lo = -floor_div(-f.min_degree());  // ceil(min/k)
  const int hi = floor_div(f.max_degree());
  if (hi < lo) return LaurentLoop<Coef>(f.rows(), f.cols(), f.sample_count());
  std::vector<Coef> c;
  for (int m = lo; m <= hi; ++m) c.push_back(f.coeff(m * k));
  return LaurentLoop<Coef>(lo, std::move(c), f.sample_count());
}

// Hardy projection: zero all negative-degree coefficients.
template <class Coef>
LaurentLoop<Coef> project_plus(const LaurentLoop<Coef>& f) {
  if (f.max_degree() < 0) return LaurentLoop<Coef>(f.rows(), f.cols(), f.sample_count());
  const int lo = std::max(0, f.min_degree());
  std::vector<Coef> c;
  for (int m = lo; m <= f.max_degree(); ++m) c.push_back(f.coeff(m));
  return LaurentLoop<Coef>(lo, std::move(c), f.sample_count());
}

// Multiply by lambda^shift.
template <class Coef>
LaurentLoop<Coef> shift(const LaurentLoop<Coef>& f, int shift_by) {
  return LaurentLoop<Coef>(f.min_degree() + shift_by, f.coeffs(), f.sample_count());
}

}  // namespace symloop
