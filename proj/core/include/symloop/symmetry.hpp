#pragma once

#include <functional>
#include <vector>

#include "symloop/hardy.hpp"
#include "symloop/loops.hpp"

namespace symloop {

struct FlagType {
  std::vector<int> ranks;

  int k() const { return static_cast<int>(ranks.size()); }
  int n() const;
};

// Mutually orthogonal Hermitian projectors P_0..P_{k-1} summing to I.
class FlagPoint {
 public:
  FlagPoint() = default;
  explicit FlagPoint(std::vector<Matrix> projectors, double tol = kStructuralTol);

  // The coordinate flag: A_i spanned by consecutive canonical basis vectors.
  static FlagPoint coordinate(const std::vector<int>& ranks);

  int k() const { return static_cast<int>(projectors_.size()); }
  Eigen::Index n() const { return projectors_.empty() ? 0 : projectors_.front().rows(); }
  const std::vector<Matrix>& projectors() const { return projectors_; }
  const Matrix& projector(int i) const { return projectors_[static_cast<std::size_t>(i)]; }
  FlagType type() const;

 private:
  std::vector<Matrix> projectors_;
};

int projector_rank(const Matrix& p);

// The loop s(lambda) = sum_i lambda^i P_i of a flag and the order-k inner
// automorphism tau(X) = s(omega)^{-1} X s(omega).
class TwistedAutomorphism {
 public:
  explicit TwistedAutomorphism(FlagPoint flag, int sample_count = kDefaultSampleCount);

  int k() const { return flag_.k(); }
  Eigen::Index n() const { return flag_.n(); }
  const FlagPoint& flag() const { return flag_; }
  const MatrixLoop& s() const { return s_; }
  RootOfUnity omega() const { return {k(), 1}; }
  Matrix s_at(cplx lambda) const { return s_.evaluate(lambda); }
  Matrix s_omega() const { return s_omega_; }

  Matrix tau(const Matrix& x) const;
  // P_r X P_c, an element of Hom(A_c, A_r), which has tau-eigenvalue omega^(c - r).
  Matrix block(const Matrix& x, int r, int c) const;
  // Component of x in the omega^i eigenspace of tau.
  Matrix grade_component(const Matrix& x, int i) const;
  // Norm of the part of x outside the omega^i eigenspace.
  double grade_residual(const Matrix& x, int i) const;
  // max(||tau^k(X) - X||) over the canonical basis matrices.
  double order_defect() const;

 private:
  FlagPoint flag_;
  MatrixLoop s_;
  Matrix s_omega_;
};

// Constant phi_k with Phi(omega lambda) = Phi(lambda) phi_k.
Matrix check_k_symmetric(const MatrixLoop& phi, int k, double tol = 1e-8);

// pi_j = (1/k) sum_l omega^(-lj) phi^l.
std::vector<Matrix> spectral_projectors(const Matrix& phi, int k, double tol = 1e-9);
// pi_j = prod_{i != j} (phi - omega^i) / (omega^j - omega^i).
std::vector<Matrix> spectral_projectors_product(const Matrix& phi, int k);

struct KSymmetricDecomposition {
  int k = 1;
  Matrix phi_k;
  std::vector<Matrix> pi;
  std::vector<int> ranks;
  // Orthonormal bases of alpha_0 .. alpha_{k-2}.
  std::vector<Matrix> alpha;
  MatrixLoop twisted;  // Phi_k, a function of lambda^k
  MatrixLoop psi;
};

KSymmetricDecomposition detwist(const MatrixLoop& phi, int k, double tol = 1e-9);

// (1/k) sum_l omega^(-lj) f(omega^l lambda).
template <class Coef>
LaurentLoop<Coef> eigenspace_project(const LaurentLoop<Coef>& f, int j, int k) {
  if (k <= 0) throw Error(ErrorCode::InvalidArgument, "order must be positive");
  LaurentLoop<Coef> acc = rotate(f, RootOfUnity{k, 0}) * cplx(0.0);
  for (int l = 0; l < k; ++l)
    acc = acc + rotate(f, RootOfUnity{k, l}) * detail::unit_phase(-static_cast<long long>(l) * j, k);
  return acc * cplx(1.0 / k);
}

struct Filtration {
  int k = 1;
  std::vector<TruncatedSubspace> v;
  double nesting_residual = 0.0;  // worst V_j core outside V_{j+1}
  double cyclic_residual = 0.0;   // S V_{k-1} core outside V_0
  double symmetry_residual = 0.0; // eigen-components of the core of W outside W
};

Filtration filtration_from_W(const TruncatedSubspace& w, int k, double tol = 1e-8);

// Phi(lambda) = Psi(lambda^k) sum_j pi_{beta_j} lambda^j with
// beta_j = alpha_j minus alpha_{j-1}.
MatrixLoop build_W(const MatrixLoop& psi, const std::vector<Matrix>& alpha, int k, double tol = 1e-8);

Matrix cartan_embed(const Matrix& g, const TwistedAutomorphism& t);

struct PrimitiveMap {
  int l = 1;
  Matrix phi_l;
  std::vector<Matrix> projectors;
  std::vector<int> ranks;
};

PrimitiveMap primitive_extract(const MatrixLoop& phi, int k, int l, double tol = 1e-9);

// Largest norm of the part of psi^{-1} psi_z outside g^0 + g^{-1}, with the
// derivative from central differences and one Richardson step.
double check_primitive(const std::function<Matrix(cplx)>& lift, const TwistedAutomorphism& t,
                       const std::vector<cplx>& zs, double h = 1e-3, double tol = 1e-5);
// As above with the derivative supplied.
double check_primitive(const std::function<Matrix(cplx)>& lift, const std::function<Matrix(cplx)>& lift_z,
                       const TwistedAutomorphism& t, const std::vector<cplx>& zs);

// max_j ||tau(gamma(lambda_j)) - gamma(omega lambda_j)||.
double twist_residual(const MatrixLoop& gamma, const TwistedAutomorphism& t);

MatrixLoop gamma_tau(const MatrixLoop& gamma, const TwistedAutomorphism& t);
MatrixLoop gamma_tau_inv(const MatrixLoop& gamma, const TwistedAutomorphism& t, double tol = 1e-8);

MatrixLoop theta(const MatrixLoop& framing, const TwistedAutomorphism& t, double tol = 1e-8);

// A unitary g with g P_j g^{-1} = beta_j for the given projectors.
Matrix flag_lift(const std::vector<Matrix>& beta, const TwistedAutomorphism& t);

// The framing s^{-1} Phi g of a based k-symmetric loop with Phi(omega)
// conjugate to s(omega).
MatrixLoop extended_framing(const MatrixLoop& phi, const TwistedAutomorphism& t);

}  // namespace symloop
