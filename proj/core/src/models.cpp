#include "symloop/models.hpp"

#include <cmath>

#include "symloop/linalg.hpp"

namespace symloop::models {

namespace {

Matrix cyclic(cplx top_right, cplx mid_left, cplx bottom_mid) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 2) = top_right;
  m(1, 0) = mid_left;
  m(2, 1) = bottom_mid;
  return m;
}

Matrix unit(int i, int j) {
  Matrix m = Matrix::Zero(3, 3);
  m(i, j) = 1.0;
  return m;
}

MatrixLoop loop_of(const Potential& p, int sample_count) { return p.loop(0.0, sample_count); }

}  // namespace

Matrix f111_a() { return cyclic(0.5, 0.5, 0.5); }

FlagPoint f111_flag() { return FlagPoint::coordinate({1, 1, 1}); }

TwistedAutomorphism f111_automorphism(int sample_count) { return TwistedAutomorphism(f111_flag(), sample_count); }

Potential f111_potential() { return Potential(3, {{-1, 0, f111_a()}}); }

MatrixLoop vacuum(cplx z, int sample_count) {
  const Matrix a = f111_a();
  const MatrixLoop x(-1, {z * a, -z * a + std::conj(z) * a.adjoint(), -std::conj(z) * a.adjoint()}, sample_count);
  return loop_exp(x);
}

MatrixLoop vacuum_dz(cplx z, int sample_count) {
  const Matrix a = f111_a();
  return vacuum(z, sample_count) * MatrixLoop(-1, {a, -a}, sample_count);
}

MatrixLoop vacuum_dzbar(cplx z, int sample_count) {
  const Matrix a = f111_a();
  return vacuum(z, sample_count) * MatrixLoop(0, {a.adjoint(), Matrix(-a.adjoint())}, sample_count);
}

MatrixLoop vacuum_b(cplx z, int sample_count) {
  const Matrix a = f111_a();
  const MatrixLoop x(0, {z * a - std::conj(z) * a.adjoint(), std::conj(z) * a.adjoint()}, sample_count);
  return loop_exp(x);
}

Potential f111_xi(int j) {
  switch (j) {
    case 0: return Potential(3, {{0, 0, cyclic(0.5, 0.0, 0.5)}, {-1, 0, cyclic(0.0, 0.5, 0.0)}});
    case 1: return Potential(3, {{0, 0, cyclic(0.5, 0.5, 0.0)}, {-1, 0, cyclic(0.0, 0.0, 0.5)}});
    case 2: return Potential(3, {{0, 0, cyclic(0.0, 0.5, 0.5)}, {-1, 0, cyclic(0.5, 0.0, 0.0)}});
    default: throw Error(ErrorCode::InvalidArgument, "xi index must be 0, 1 or 2");
  }
}

Potential f111_xi_tilde() { return Potential(3, {{0, 0, cyclic(0.0, 0.0, 0.5)}, {-1, 0, cyclic(0.5, 0.5, 0.0)}}); }

MatrixLoop f111_psi(cplx z, int sample_count) {
  const MatrixLoop xi = loop_of(f111_xi(2), sample_count);
  const MatrixLoop e1 = loop_exp(xi * z - star(xi) * std::conj(z));
  return e1 * f111_rotation(z).adjoint();
}

MatrixLoop f111_psi_dz(cplx z, int sample_count) {
  // xi_2 is normal on the circle, so exp(z xi - conj(z) xi^*) has derivative
  // E xi; the constant factor has derivative -A times itself.
  const MatrixLoop xi = loop_of(f111_xi(2), sample_count);
  const MatrixLoop e1 = loop_exp(xi * z - star(xi) * std::conj(z));
  const Matrix e2 = f111_rotation(z).adjoint();
  return e1 * xi * e2 - e1 * Matrix(f111_a() * e2);
}

MatrixLoop f111_psi_dzbar(cplx z, int sample_count) {
  const MatrixLoop xi = loop_of(f111_xi(2), sample_count);
  const MatrixLoop e1 = loop_exp(xi * z - star(xi) * std::conj(z));
  const Matrix e2 = f111_rotation(z).adjoint();
  return (e1 * star(xi) * e2) * cplx(-1.0) + e1 * Matrix(f111_a().adjoint() * e2);
}

Matrix f111_rotation(cplx z) {
  const Matrix a = f111_a();
  return linalg::expm(z * a - std::conj(z) * a.adjoint());
}

Matrix f111_apsi_displayed(cplx z) {
  const Matrix r = f111_rotation(z);
  return r * unit(0, 2) * r.adjoint();
}

Matrix f111_lift(cplx z) {
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i) {
    const cplx w = RootOfUnity{3, i}.value();
    const cplx f = std::exp(w * z - std::conj(w) * std::conj(z)) / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j) g(i, j) = RootOfUnity{3, i * j}.value() * f;
  }
  return g;
}

Matrix f111_lift_dz(cplx z) {
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i) {
    const cplx w = RootOfUnity{3, i}.value();
    const cplx f = std::exp(w * z - std::conj(w) * std::conj(z)) / std::sqrt(3.0);
    for (int j = 0; j < 3; ++j) g(i, j) = RootOfUnity{3, i * (j + 1)}.value() * f;
  }
  return g;
}

Matrix f111_partial_flag(int j) {
  Matrix p = Matrix::Zero(3, 3);
  for (int i = 0; i <= j && i < 3; ++i) p(i, i) = 1.0;
  return p;
}

AnalyticFrame f111_alpha_frame(int j) {
  if (j < 0 || j > 2) throw Error(ErrorCode::InvalidArgument, "alpha index must be 0, 1 or 2");
  // A is normal, so exp(zA - conj(z)A^*) splits into commuting factors around any base point.
  return AnalyticFrame(
      3, j + 1,
      [j](cplx z, int order) {
        const Matrix a = f111_a();
        const Matrix cols = Matrix::Identity(3, 3).leftCols(j + 1);
        std::vector<Matrix> pa{cols}, pb{Matrix::Identity(3, 3)};
        for (int i = 1; i <= order; ++i) {
          pa.push_back(a * pa.back() / static_cast<double>(i));
          pb.push_back(-a.adjoint() * pb.back() / static_cast<double>(i));
        }
        const Matrix e = f111_rotation(z);
        MatrixJet out(3, j + 1, order);
        for (int s = 0; s <= order; ++s)
          for (int b = 0; b <= s; ++b) out.at(s - b, b) = e * pb[static_cast<std::size_t>(b)] * pa[static_cast<std::size_t>(s - b)];
        return out;
      },
      "f111_alpha_" + std::to_string(j));
}

}  // namespace symloop::models
