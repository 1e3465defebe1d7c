#include <gtest/gtest.h>

#include <random>

#include "random_data.hpp"
#include "symloop/models.hpp"
#include "symloop/symmetry.hpp"

namespace {

using namespace symloop;
namespace st = symloop::testing;
namespace sm = symloop::models;

const cplx w3 = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);

MatrixLoop blaschke(const Matrix& p) { return MatrixLoop(0, {p, Matrix(Matrix::Identity(p.rows(), p.cols()) - p)}); }

Matrix block_diagonal_unitary(const FlagPoint& flag, std::mt19937_64& rng) {
  Matrix u = Matrix::Zero(flag.n(), flag.n());
  Eigen::Index at = 0;
  for (const int r : flag.type().ranks) {
    u.block(at, at, r, r) = linalg::random_unitary(r, rng);
    at += r;
  }
  return u;
}

TEST(FlagPoint, RejectsNonProjectors) {
  Matrix p = Matrix::Identity(2, 2);
  p(0, 1) = 0.5;
  EXPECT_THROW(FlagPoint({p, Matrix(Matrix::Zero(2, 2))}), Error);
}

TEST(FlagPoint, CoordinateFlag) {
  const FlagPoint f = FlagPoint::coordinate({1, 2, 1});
  EXPECT_EQ(f.k(), 3);
  EXPECT_EQ(f.n(), 4);
  EXPECT_EQ(f.type().ranks, (std::vector<int>{1, 2, 1}));
}

TEST(TwistedAutomorphism, Invariants) {
  const TwistedAutomorphism t(FlagPoint::coordinate({2, 1, 1, 2}));
  EXPECT_LT(unitarity_defect(t.s()), 1e-14);
  EXPECT_LT(basing_defect(t.s()), 1e-14);
  EXPECT_LT(t.order_defect(), 1e-10);
}

TEST(CheckKSymmetric, BlaschkeOrderTwo) {
  std::mt19937_64 rng(31);
  const Matrix p = st::random_projector(4, 2, rng);
  const Matrix phi2 = check_k_symmetric(blaschke(p), 2);
  EXPECT_LT((phi2 - (2.0 * p - Matrix::Identity(4, 4))).norm(), 1e-12);
}

TEST(CheckKSymmetric, IdentityEveryOrder) {
  for (int k = 2; k <= 4; ++k)
    EXPECT_LT((check_k_symmetric(identity_loop(3), k) - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(CheckKSymmetric, TwistedVacuum) {
  const auto t = sm::f111_automorphism();
  const cplx z(0.2, 0.5);
  const Matrix phi3 = check_k_symmetric(t.s() * sm::vacuum(z), 3);
  const Matrix e = sm::f111_rotation(z);
  EXPECT_LT((phi3 - e * t.s_omega() * e.adjoint()).norm(), 1e-10);
}

TEST(CheckKSymmetric, RejectsNonSymmetric) {
  std::mt19937_64 rng(32);
  const MatrixLoop g = st::random_based_loop(3, 2, rng);
  try {
    check_k_symmetric(g * g, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotKSymmetric);
  }
}

TEST(SpectralProjectors, Examples) {
  auto pi = spectral_projectors(Matrix::Identity(3, 3), 3);
  EXPECT_LT((pi[0] - Matrix::Identity(3, 3)).norm(), 1e-14);
  EXPECT_LT(pi[1].norm() + pi[2].norm(), 1e-14);

  std::mt19937_64 rng(33);
  const Matrix p = st::random_projector(4, 1, rng);
  pi = spectral_projectors(Matrix(2.0 * p - Matrix::Identity(4, 4)), 2);
  EXPECT_LT((pi[0] - p).norm(), 1e-14);

  const auto t = sm::f111_automorphism();
  pi = spectral_projectors(t.s_omega(), 3);
  for (int j = 0; j < 3; ++j) EXPECT_LT((pi[static_cast<std::size_t>(j)] - t.flag().projector(j)).norm(), 1e-14);
}

TEST(SpectralProjectors, NotRootOfIdentity) {
  try {
    spectral_projectors(Matrix(2.0 * Matrix::Identity(2, 2)), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotRootOfIdentity);
  }
}

TEST(SpectralProjectors, ProductFormulaAgrees) {
  std::mt19937_64 rng(34);
  for (int k = 2; k <= 4; ++k) {
    const Matrix u = linalg::random_unitary(5, rng);
    Matrix d = Matrix::Zero(5, 5);
    for (int i = 0; i < 5; ++i) d(i, i) = RootOfUnity{k, i % k}.value();
    const Matrix phi = u * d * u.adjoint();
    const auto a = spectral_projectors(phi, k);
    const auto b = spectral_projectors_product(phi, k);
    for (int j = 0; j < k; ++j) {
      const auto& pj = a[static_cast<std::size_t>(j)];
      EXPECT_LT((pj - b[static_cast<std::size_t>(j)]).norm(), 1e-12);
      EXPECT_LT(linalg::projector_defect(pj), 1e-12);
      // Simultaneously diagonal in the eigenbasis of phi.
      const Matrix in_basis = u.adjoint() * pj * u;
      EXPECT_LT((in_basis - Matrix(in_basis.diagonal().asDiagonal())).norm(), 1e-10);
    }
  }
}

TEST(Detwist, Examples) {
  std::mt19937_64 rng(35);
  const Matrix p = st::random_projector(3, 1, rng);
  auto d = detwist(blaschke(p), 2);
  EXPECT_LT(d.psi.coefficient_distance(identity_loop(3)), 1e-12);
  ASSERT_EQ(d.alpha.size(), 1u);
  EXPECT_LT((linalg::projector(d.alpha[0]) - p).norm(), 1e-12);

  d = detwist(identity_loop(3), 3);
  EXPECT_LT(d.psi.coefficient_distance(identity_loop(3)), 1e-14);
  for (const auto& a : d.alpha) EXPECT_EQ(a.cols(), 3);
}

TEST(EigenspaceProject, Monomials) {
  const Vector e = Vector::Ones(2);
  for (int m = -3; m <= 4; ++m) {
    const VectorLoop f = VectorLoop::monomial(e, m);
    for (int j = 0; j < 3; ++j) {
      const VectorLoop g = eigenspace_project(f, j, 3);
      const bool keep = ((m - j) % 3 + 3) % 3 == 0;
      EXPECT_LT(g.coefficient_distance(keep ? f : f * cplx(0.0)), 1e-14);
    }
  }
}

TEST(EigenspaceProject, CompletenessAndIdempotence) {
  std::mt19937_64 rng(36);
  for (int k = 2; k <= 4; ++k) {
    std::vector<Vector> c;
    for (int m = -4; m <= 6; ++m) c.push_back(st::random_matrix(3, 1, rng));
    const VectorLoop f(-4, c);
    VectorLoop sum = f * cplx(0.0);
    for (int j = 0; j < k; ++j) {
      const VectorLoop g = eigenspace_project(f, j, k);
      EXPECT_LT(eigenspace_project(g, j, k).coefficient_distance(g), 1e-14);
      sum = sum + g;
    }
    EXPECT_LT(sum.coefficient_distance(f), 1e-14);
  }
}

TEST(EigenspaceProject, F111Components) {
  const auto t = sm::f111_automorphism();
  const cplx z(0.3, 0.1);
  const MatrixLoop sg = t.s() * loop_exp(MatrixLoop::monomial(z * sm::f111_a(), -1));
  for (int m = 0; m < 3; ++m) {
    const VectorLoop col = sg * VectorLoop::monomial(Vector::Unit(3, m), m);
    for (int j = 0; j < 3; ++j) {
      const VectorLoop c = eigenspace_project(col, j, 3);
      const VectorLoop rotated = rotate(c, RootOfUnity{3, 1});
      EXPECT_LT(rotated.coefficient_distance(c * RootOfUnity{3, j}.value()), 1e-12);
    }
  }
}

TEST(FiltrationFromW, HardySpace) {
  const Filtration f = filtration_from_W(span_image(identity_loop(2), 12), 3);
  const TruncatedSubspace h = span_image(identity_loop(2), 4);
  for (const auto& v : f.v) EXPECT_LT(subspace_distance(v, h), 1e-10);
}

TEST(FiltrationFromW, BlaschkeOrderTwo) {
  std::mt19937_64 rng(37);
  const Matrix p = st::random_projector(3, 1, rng);
  const Filtration f = filtration_from_W(span_image(blaschke(p), 12), 2);
  EXPECT_LT(subspace_distance(f.v[0], span_image(blaschke(p), 5)), 1e-10);
  EXPECT_LT(subspace_distance(f.v[1], span_image(identity_loop(3), 5)), 1e-10);
  EXPECT_LT(f.nesting_residual, 1e-8);
  EXPECT_LT(f.cyclic_residual, 1e-8);
}

TEST(FiltrationFromW, RejectsNonSymmetricSubspace) {
  std::mt19937_64 rng(38);
  const MatrixLoop g = st::random_based_loop(3, 2, rng);
  try {
    filtration_from_W(span_image(g * g, 12), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotKSymmetricSubspace);
  }
}

TEST(BuildW, Examples) {
  std::mt19937_64 rng(39);
  const Matrix p = st::random_projector(3, 2, rng);
  const Matrix a = linalg::projector_frame(p);
  EXPECT_LT(build_W(identity_loop(3), {a}, 2).coefficient_distance(blaschke(p)), 1e-12);
}

TEST(BuildW, NotNested) {
  const Matrix a0 = Matrix::Identity(3, 3).leftCols(2);
  const Matrix a1 = Matrix::Identity(3, 3).rightCols(1);
  try {
    build_W(identity_loop(3), {a0, a1}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNested);
  }
}

TEST(BuildW, RoundTrip) {
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<int> kd(2, 4);
  for (int trial = 0; trial < 15; ++trial) {
    const int k = kd(rng);
    const Eigen::Index n = std::max(3, k + 1);
    const MatrixLoop psi = st::random_based_loop(n, 2, rng);
    const auto alpha = st::random_nested(n, k, rng);
    const MatrixLoop phi = build_W(psi, alpha, k);
    EXPECT_LT(unitarity_defect(phi), 1e-12);
    const auto d = detwist(phi, k);
    EXPECT_LT(d.psi.coefficient_distance(psi), 1e-8);
    for (int j = 0; j + 1 < k; ++j)
      EXPECT_LT(linalg::subspace_sine(d.alpha[static_cast<std::size_t>(j)], alpha[static_cast<std::size_t>(j)]), 1e-8);
    EXPECT_LT(build_W(d.psi, d.alpha, k).coefficient_distance(phi), 1e-8);
  }
}

TEST(CartanEmbed, Examples) {
  const auto t = sm::f111_automorphism();
  EXPECT_LT((cartan_embed(Matrix::Identity(3, 3), t) - t.s_omega()).norm(), 1e-14);
  std::mt19937_64 rng(41);
  const Matrix p = st::random_projector(3, 1, rng);
  const TwistedAutomorphism t2(FlagPoint({p, Matrix(Matrix::Identity(3, 3) - p)}));
  EXPECT_LT((cartan_embed(Matrix::Identity(3, 3), t2) - (2.0 * p - Matrix::Identity(3, 3))).norm(), 1e-12);
}

TEST(CartanEmbed, VacuumAtOmega) {
  const auto t = sm::f111_automorphism();
  const cplx z(-0.4, 0.6);
  const Matrix lhs = cartan_embed(sm::f111_rotation(z), t);
  const Matrix rhs = (t.s() * sm::vacuum(z)).evaluate(w3);
  EXPECT_LT((lhs - rhs).norm(), 1e-8);
}

TEST(CartanEmbed, KthPower) {
  std::mt19937_64 rng(42);
  const TwistedAutomorphism t(FlagPoint::coordinate({1, 2, 2, 1}));
  const Matrix g = linalg::random_unitary(6, rng);
  Matrix x = cartan_embed(g, t);
  Matrix acc = Matrix::Identity(6, 6);
  for (int i = 0; i < 4; ++i) acc = acc * x;
  EXPECT_LT((acc - Matrix::Identity(6, 6)).norm(), 1e-9);
}

TEST(PrimitiveExtract, FullFlagAtLEqualsK) {
  std::mt19937_64 rng(43);
  const auto alpha = st::random_nested(4, 3, rng);
  const MatrixLoop phi = build_W(identity_loop(4), alpha, 3);
  const auto d = detwist(phi, 3);
  const PrimitiveMap p = primitive_extract(phi, 3, 3);
  for (int j = 0; j < 3; ++j) EXPECT_LT((p.projectors[static_cast<std::size_t>(j)] - d.pi[static_cast<std::size_t>(j)]).norm(), 1e-10);
  EXPECT_EQ(p.ranks, d.ranks);
}

TEST(PrimitiveExtract, F111Flag) {
  const auto t = sm::f111_automorphism();
  const cplx z(0.25, -0.35);
  const PrimitiveMap p = primitive_extract(t.s() * sm::vacuum(z), 3, 3);
  const Matrix e = sm::f111_rotation(z);
  for (int j = 0; j < 3; ++j) {
    const Matrix expected = e * t.flag().projector(j) * e.adjoint();
    EXPECT_LT((p.projectors[static_cast<std::size_t>(j)] - expected).norm(), 1e-9);
  }
}

TEST(CheckPrimitive, ConstantLift) {
  const auto t = sm::f111_automorphism();
  const std::vector<cplx> zs{0.0, cplx(0.3, 0.2)};
  EXPECT_LT(check_primitive([](cplx) { return Matrix(Matrix::Identity(3, 3)); }, t, zs), 1e-14);
}

TEST(CheckPrimitive, F111Lift) {
  const auto t = sm::f111_automorphism();
  const std::vector<cplx> zs{0.0, cplx(0.3, 0.2), cplx(-0.5, 0.1)};
  EXPECT_LT(check_primitive(sm::f111_lift, t, zs), 1e-6);
  EXPECT_LT(check_primitive(sm::f111_lift, sm::f111_lift_dz, t, zs), 1e-10);
}

TEST(CheckPrimitive, InjectedPositiveGrade) {
  const auto t = sm::f111_automorphism();
  // At z = 0 the lift exp(z B) is the identity and psi^* psi_z = B.
  const Matrix b = t.grade_component(sm::f111_a().adjoint(), 1);
  ASSERT_GT(b.norm(), 0.1);
  const auto lift = [b](cplx z) { return Matrix(linalg::expm(z * b)); };
  const auto lift_z = [b](cplx z) { return Matrix(b * linalg::expm(z * b)); };
  const double r = check_primitive(lift, lift_z, t, {cplx(0.0)});
  EXPECT_NEAR(r, b.norm(), 1e-12);
}

TEST(GammaTau, RoundTrip) {
  std::mt19937_64 rng(44);
  const auto t = sm::f111_automorphism();
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixLoop g = st::random_based_loop(3, 2, rng);
    EXPECT_LT(gamma_tau_inv(gamma_tau(g, t), t).coefficient_distance(g), 1e-10);
    EXPECT_LT(twist_residual(gamma_tau(g, t), t), 1e-9);
  }
}

TEST(GammaTau, BlockDiagonalConstantFixed) {
  std::mt19937_64 rng(45);
  const TwistedAutomorphism t(FlagPoint::coordinate({2, 1, 2}));
  const Matrix u = block_diagonal_unitary(t.flag(), rng);
  EXPECT_LT(gamma_tau(MatrixLoop::constant(u), t).coefficient_distance(MatrixLoop::constant(u)), 1e-12);
}

TEST(GammaTau, Homomorphism) {
  std::mt19937_64 rng(46);
  const TwistedAutomorphism t(FlagPoint::coordinate({1, 1, 2}));
  const MatrixLoop a = st::random_based_loop(4, 2, rng);
  const MatrixLoop b = st::random_based_loop(4, 1, rng);
  EXPECT_LT(gamma_tau(a * b, t).coefficient_distance(gamma_tau(a, t) * gamma_tau(b, t)), 1e-12);
}

TEST(GammaTau, InverseRejectsUntwisted) {
  std::mt19937_64 rng(47);
  const auto t = sm::f111_automorphism();
  try {
    gamma_tau_inv(st::random_based_loop(3, 2, rng), t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotTwisted);
  }
}

TEST(Theta, IdentityGivesS) {
  const auto t = sm::f111_automorphism();
  EXPECT_LT(theta(identity_loop(3), t).coefficient_distance(t.s()), 1e-14);
}

TEST(Theta, GaugeInvariance) {
  std::mt19937_64 rng(48);
  const auto t = sm::f111_automorphism();
  const MatrixLoop framing = gamma_tau(st::random_based_loop(3, 2, rng), t);
  const MatrixLoop base = theta(framing, t);
  EXPECT_LT(basing_defect(base), 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix u = block_diagonal_unitary(t.flag(), rng);
    EXPECT_LT(theta(framing * u, t).coefficient_distance(base), 1e-10);
  }
}

TEST(Theta, F111FramingRecoversExtendedSolution) {
  const auto t = sm::f111_automorphism();
  const cplx z(0.3, 0.4);
  const MatrixLoop phi = t.s() * sm::vacuum(z);
  const MatrixLoop framing = extended_framing(phi, t);
  EXPECT_LT(twist_residual(framing, t), 1e-9);
  const MatrixLoop back = theta(framing, t);
  EXPECT_LT(back.coefficient_distance(phi), 1e-9);
}

}  // namespace
