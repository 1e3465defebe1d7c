#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symloop/hardy.hpp"
#include "symloop/symmetry.hpp"

namespace symloop {

// One term coeff * z^zdegree * lambda^power of a holomorphic potential.
struct PotentialTerm {
  int power = 0;
  int zdegree = 0;
  Matrix coeff;
};

// mu = xi dz with xi = sum_terms coeff z^d lambda^p and p >= -1.
class Potential {
 public:
  explicit Potential(Eigen::Index n = 1) : n_(n) {}
  Potential(Eigen::Index n, std::vector<PotentialTerm> terms);

  // The constant potential xi dz for a loop xi with min degree >= -1.
  static Potential from_loop(const MatrixLoop& xi);

  Eigen::Index n() const { return n_; }
  const std::vector<PotentialTerm>& terms() const { return terms_; }
  bool is_constant() const;
  bool is_zero(double tol = 0.0) const;
  int min_power() const;
  int max_power() const;

  // Coefficient of z^zdegree lambda^power (zero if absent).
  Matrix coefficient(int power, int zdegree = 0) const;
  // xi(lambda, z) as a loop.
  MatrixLoop loop(cplx z, int sample_count = kDefaultSampleCount) const;
  // xi(lambda, z) at one lambda.
  Matrix value(cplx lambda, cplx z) const;

  // Merge equal (power, zdegree) pairs and drop terms with norm <= tol.
  Potential normalized(double tol = 0.0) const;

 private:
  Eigen::Index n_;
  std::vector<PotentialTerm> terms_;
};

// Largest coefficient difference over all (power, zdegree) pairs.
double potential_distance(const Potential& a, const Potential& b);

// Rectangle [x0, x1] x [y0, y1] sampled with nx x ny nodes; 0 must be a node.
struct ZGrid {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  int nx = 21, ny = 21;

  static ZGrid square(double half_width, int points);
  void validate() const;
  double hx() const { return nx > 1 ? (x1 - x0) / (nx - 1) : 0.0; }
  double hy() const { return ny > 1 ? (y1 - y0) / (ny - 1) : 0.0; }
  cplx point(int ix, int iy) const { return {x0 + ix * hx(), y0 + iy * hy()}; }
  int size() const { return nx * ny; }
  std::pair<int, int> base_index() const;
};

enum class FieldKind { Raw, Unitary, Framing };

std::string_view to_string(FieldKind kind);

struct LoopField {
  ZGrid grid;
  FieldKind kind = FieldKind::Raw;
  std::vector<MatrixLoop> values;  // row-major: index iy * nx + ix
  std::vector<double> residuals;   // per point, meaning depends on the producer

  const MatrixLoop& at(int ix, int iy) const { return values[static_cast<std::size_t>(iy * grid.nx + ix)]; }
  double max_residual() const;
};

enum class IntegrationPath { Straight, LShaped };

struct IntegrationOptions {
  double step = 0.1;             // grid step h; RK4 uses at most h/4
  double tol = 1e-8;             // StepTooLarge threshold on the Richardson estimate
  IntegrationPath path = IntegrationPath::Straight;
  int sample_count = kDefaultSampleCount;
};

// g^mu(z) with (g^mu)^{-1} dg^mu = mu, g^mu(0) = I. `error` receives the
// Richardson estimate (zero for constant potentials).
MatrixLoop integrate_at(const Potential& mu, cplx z, const IntegrationOptions& opt = {}, double* error = nullptr);
LoopField integrate_potential(const Potential& mu, const ZGrid& grid, IntegrationOptions opt = {});

// Phi^mu(z) from the Iwasawa splitting of g^mu(z).
FactorizationResult extended_at(const Potential& mu, cplx z, int depth = kAutoDepth,
                                const IntegrationOptions& opt = {});
LoopField extended_solution(const Potential& mu, const ZGrid& grid, int depth = kAutoDepth,
                            IntegrationOptions opt = {});

struct ExtendedCheck {
  std::vector<cplx> zs;
  std::vector<Matrix> a_z;
  std::vector<Matrix> a_zbar;
  double residual = 0.0;          // deviation from the two-term lambda form
  double adjoint_residual = 0.0;  // || A_zbar + A_z^* ||
  double fd_error = 0.0;          // finite-difference estimate, zero when analytic
};

using LoopEvaluator = std::function<MatrixLoop(cplx)>;

// Phi^{-1} dPhi = (1 - lambda^{-1}) A_z dz + (1 - lambda) A_zbar dzbar.
ExtendedCheck verify_extended(const LoopEvaluator& phi, const std::vector<cplx>& zs, double h = 1e-3,
                              double tol = 1e-5);
ExtendedCheck verify_extended(const LoopEvaluator& phi, const LoopEvaluator& phi_z, const LoopEvaluator& phi_zbar,
                              const std::vector<cplx>& zs);

// Largest norm of the part of xi_i outside g^(i mod k).
double check_tau_twisted(const Potential& mu, const TwistedAutomorphism& t);

// mu(lambda^{1/k}) conjugated by s(lambda^{1/k}), by regrading blocks.
Potential bar_mu(const Potential& mu, const TwistedAutomorphism& t, double tol = 1e-8);

// gamma^{-1} mu gamma with gamma = P + lambda (I - P).
Potential gamma_j_potential(const Potential& mu, const Matrix& projector, double tol = 1e-10);

// gamma^{-1} mu(lambda^l) gamma with gamma = P + lambda (I - P).
Potential reverse_bar(const Potential& mu, const Matrix& projector, int l, double tol = 1e-10);

// gamma(lambda) = P + lambda (I - P).
MatrixLoop blaschke_loop(const Matrix& projector, int sample_count = kDefaultSampleCount);

struct UnitonWindow {
  int lo = 0;
  int hi = 0;
  bool polynomial = true;
  double tail = 0.0;  // largest coefficient norm outside [lo, hi]
};

UnitonWindow uniton_degree(const MatrixLoop& phi, double tol = 1e-9, double tail_tol = 1e-11);

}  // namespace symloop
