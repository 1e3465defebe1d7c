#include "symloop/jet.hpp"

#include <algorithm>

#include "symloop/error.hpp"

namespace symloop {

MatrixJet::MatrixJet(Eigen::Index rows, Eigen::Index cols, int order) : rows_(rows), cols_(cols), order_(order) {
  if (order < 0) throw Error(ErrorCode::InvalidArgument, "jet order must be nonnegative");
  c_.assign(static_cast<std::size_t>((order + 1) * (order + 2) / 2), Matrix::Zero(rows, cols));
}

MatrixJet MatrixJet::constant(const Matrix& m, int order) {
  MatrixJet j(m.rows(), m.cols(), order);
  j.at(0, 0) = m;
  return j;
}

MatrixJet MatrixJet::dz() const {
  if (order_ < 1) throw Error(ErrorCode::GridTooCoarse, "jet has no derivative data left");
  MatrixJet out(rows_, cols_, order_ - 1);
  for (int s = 0; s <= order_ - 1; ++s)
    for (int b = 0; b <= s; ++b) out.at(s - b, b) = at(s - b + 1, b) * cplx(s - b + 1);
  return out;
}

MatrixJet MatrixJet::dzbar() const {
  if (order_ < 1) throw Error(ErrorCode::GridTooCoarse, "jet has no derivative data left");
  MatrixJet out(rows_, cols_, order_ - 1);
  for (int s = 0; s <= order_ - 1; ++s)
    for (int b = 0; b <= s; ++b) out.at(s - b, b) = at(s - b, b + 1) * cplx(b + 1);
  return out;
}

MatrixJet MatrixJet::adjoint() const {
  MatrixJet out(cols_, rows_, order_);
  for (int s = 0; s <= order_; ++s)
    for (int b = 0; b <= s; ++b) out.at(b, s - b) = at(s - b, b).adjoint();
  return out;
}

MatrixJet MatrixJet::truncated(int order) const {
  if (order >= order_) return *this;
  MatrixJet out(rows_, cols_, order);
  for (int s = 0; s <= order; ++s)
    for (int b = 0; b <= s; ++b) out.at(s - b, b) = at(s - b, b);
  return out;
}

MatrixJet MatrixJet::inverse() const {
  if (rows_ != cols_) throw Error(ErrorCode::DimensionMismatch, "only square jets can be inverted");
  Eigen::PartialPivLU<Matrix> lu(value());
  if (std::abs(lu.determinant()) < 1e-300) throw Error(ErrorCode::SingularLoop, "jet value is singular");
  MatrixJet g(rows_, cols_, order_);
  g.at(0, 0) = lu.inverse();
  for (int s = 1; s <= order_; ++s) {
    for (int b = 0; b <= s; ++b) {
      const int a = s - b;
      Matrix acc = Matrix::Zero(rows_, cols_);
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1) {
          if (a1 == 0 && b1 == 0) continue;
          acc += at(a1, b1) * g.at(a - a1, b - b1);
        }
      g.at(a, b) = -(g.at(0, 0) * acc);
    }
  }
  return g;
}

MatrixJet& MatrixJet::operator+=(const MatrixJet& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "jet shapes differ");
  const int ord = std::min(order_, o.order_);
  if (ord < order_) *this = truncated(ord);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

MatrixJet& MatrixJet::operator-=(const MatrixJet& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw Error(ErrorCode::DimensionMismatch, "jet shapes differ");
  const int ord = std::min(order_, o.order_);
  if (ord < order_) *this = truncated(ord);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

MatrixJet& MatrixJet::operator*=(cplx s) {
  for (auto& m : c_) m *= s;
  return *this;
}

MatrixJet operator*(const MatrixJet& x, const MatrixJet& y) {
  if (x.cols_ != y.rows_) throw Error(ErrorCode::DimensionMismatch, "jet product shapes differ");
  const int ord = std::min(x.order_, y.order_);
  MatrixJet out(x.rows_, y.cols_, ord);
  for (int s = 0; s <= ord; ++s)
    for (int b = 0; b <= s; ++b) {
      const int a = s - b;
      Matrix& dst = out.at(a, b);
      for (int a1 = 0; a1 <= a; ++a1)
        for (int b1 = 0; b1 <= b; ++b1) dst.noalias() += x.at(a1, b1) * y.at(a - a1, b - b1);
    }
  return out;
}

MatrixJet operator*(const Matrix& m, const MatrixJet& x) {
  MatrixJet out(m.rows(), x.cols_, x.order_);
  for (std::size_t i = 0; i < x.c_.size(); ++i) out.c_[i] = m * x.c_[i];
  return out;
}

MatrixJet operator*(const MatrixJet& x, const Matrix& m) {
  MatrixJet out(x.rows_, m.cols(), x.order_);
  for (std::size_t i = 0; i < x.c_.size(); ++i) out.c_[i] = x.c_[i] * m;
  return out;
}

MatrixJet projector_jet(const MatrixJet& frame) {
  if (frame.cols() == 0) return MatrixJet(frame.rows(), frame.rows(), frame.order());
  const MatrixJet fa = frame.adjoint();
  return frame * (fa * frame).inverse() * fa;
}

}  // namespace symloop
