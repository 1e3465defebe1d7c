#pragma once

#include <vector>

#include "symloop/types.hpp"

namespace symloop {

// Truncated Taylor expansion of a matrix function of (z, zbar) around a point:
// f(z0 + dz) = sum_{a + b <= order} c_{ab} dz^a conj(dz)^b.
class MatrixJet {
 public:
  MatrixJet() = default;
  MatrixJet(Eigen::Index rows, Eigen::Index cols, int order);

  static MatrixJet constant(const Matrix& m, int order);

  int order() const { return order_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

  Matrix& at(int a, int b) { return c_[index(a, b)]; }
  const Matrix& at(int a, int b) const { return c_[index(a, b)]; }
  const Matrix& value() const { return c_.front(); }

  // d/dz and d/dzbar; the result has order one less.
  MatrixJet dz() const;
  MatrixJet dzbar() const;
  // Pointwise adjoint; swaps the roles of dz and dzbar.
  MatrixJet adjoint() const;
  MatrixJet truncated(int order) const;
  MatrixJet inverse() const;

  MatrixJet& operator+=(const MatrixJet& o);
  MatrixJet& operator-=(const MatrixJet& o);
  MatrixJet& operator*=(cplx s);

  friend MatrixJet operator+(MatrixJet a, const MatrixJet& b) { return a += b; }
  friend MatrixJet operator-(MatrixJet a, const MatrixJet& b) { return a -= b; }
  friend MatrixJet operator*(MatrixJet a, cplx s) { return a *= s; }
  friend MatrixJet operator*(cplx s, MatrixJet a) { return a *= s; }
  friend MatrixJet operator*(const MatrixJet& a, const MatrixJet& b);
  friend MatrixJet operator*(const Matrix& m, const MatrixJet& a);
  friend MatrixJet operator*(const MatrixJet& a, const Matrix& m);

 private:
  static int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  int order_ = -1;
  std::vector<Matrix> c_;
};

// Orthogonal projector F (F^* F)^{-1} F^* of a frame with independent columns.
MatrixJet projector_jet(const MatrixJet& frame);

}  // namespace symloop
