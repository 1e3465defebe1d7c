#pragma once

#include <functional>
#include <string>
#include <vector>

#include "symloop/dpw.hpp"
#include "symloop/jet.hpp"

namespace symloop {

inline constexpr double kGaussRankTol = 1e-8;
inline constexpr double kArrowTol = 1e-7;
inline constexpr double kDiffConditionTol = 1e-6;

// A map z -> subbundle of C^n, given by its orthogonal projector. Analytic
// maps provide Taylor jets of any order; sampled maps differentiate their
// values by central differences.
class BundleMap {
 public:
  using JetFn = std::function<MatrixJet(cplx, int)>;
  using ValueFn = std::function<Matrix(cplx)>;

  BundleMap() = default;
  static BundleMap analytic(Eigen::Index n, JetFn projector, std::string label = "custom");
  static BundleMap sampled(Eigen::Index n, ValueFn projector, std::string label = "custom", double h = 1e-3,
                           double tol = 1e-5);
  static BundleMap zero(Eigen::Index n);
  static BundleMap constant(const Matrix& projector);

  Eigen::Index n() const { return n_; }
  bool is_analytic() const { return static_cast<bool>(jet_); }
  const std::string& label() const { return label_; }
  double step() const { return h_; }
  double fd_tol() const { return tol_; }

  Matrix value(cplx z) const;
  // Taylor jet of the projector; sampled maps support order <= 1 only.
  MatrixJet jet(cplx z, int order) const;
  int rank(cplx z) const;

 private:
  Eigen::Index n_ = 0;
  JetFn jet_;
  ValueFn value_;
  std::string label_;
  double h_ = 1e-3;
  double tol_ = 1e-5;
};

// A map z -> n x m frame F(z) whose columns span a subbundle.
class AnalyticFrame {
 public:
  using JetFn = std::function<MatrixJet(cplx, int)>;

  AnalyticFrame(Eigen::Index n, Eigen::Index m, JetFn jet, std::string label = "custom");

  // F_i = exp(w^i z - conj(w^i z)) / sqrt(n), w = exp(2 pi i / n).
  static AnalyticFrame clifford(int n);
  // F_i = sqrt(binom(n - 1, i)) z^i, a full holomorphic curve in CP^{n-1}.
  static AnalyticFrame veronese(int n);
  // Columns are polynomials in z: column j has coefficients coeffs[j][0..].
  static AnalyticFrame polynomial(Eigen::Index n, const std::vector<std::vector<Vector>>& coeffs,
                                  std::string label = "polynomial");

  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  const std::string& label() const { return label_; }

  MatrixJet jet(cplx z, int order) const { return jet_(z, order); }
  Matrix value(cplx z) const { return jet_(z, 0).value(); }
  // d^j F / dz^j.
  Matrix derivative(cplx z, int j) const;

  // The frame d^j F / dz^j.
  AnalyticFrame derivative_frame(int j) const;
  // [F, F', ..., F^(j)].
  AnalyticFrame osculating(int j) const;
  // m F for a constant matrix m.
  AnalyticFrame transformed(const Matrix& m) const;

  BundleMap span() const;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  JetFn jet_;
  std::string label_;
};

// Projector field sampled on a grid.
struct ProjectorField {
  ZGrid grid;
  int rank = 0;
  std::vector<Matrix> values;  // row-major: index iy * nx + ix
  std::vector<int> ranks;      // rank measured at each point
  std::vector<int> singular;   // indices whose rank fell below the generic rank

  const Matrix& at(int ix, int iy) const { return values[static_cast<std::size_t>(iy * grid.nx + ix)]; }
  double max_projector_defect() const;
};

ProjectorField sample_field(const BundleMap& psi, const ZGrid& grid);

// A'_psi = (I - P) dP/dz P.
Matrix second_fundamental_form(const BundleMap& psi, cplx z);
// A'_{psi_i, psi_j} = P_j A'_{psi_i}.
Matrix second_fundamental_form(const BundleMap& psi_i, const BundleMap& psi_j, cplx z);

// G'(psi): the image of A'_psi, pointwise.
BundleMap gauss_bundle(const BundleMap& psi, double rank_tol = kGaussRankTol);
// G^(j)(psi).
BundleMap gauss_bundle(const BundleMap& psi, int j, double rank_tol = kGaussRankTol);
// Grid version: generic rank is the modal rank, lower-rank points take the value of
// the nearest generic point. RankUnstable when more than 10% of points are singular.
ProjectorField gauss_bundle(const BundleMap& psi, const ZGrid& grid, double rank_tol = kGaussRankTol);

struct IsotropyOrder {
  int order = 0;
  bool exceeded = false;  // psi is orthogonal to every G^(i), i <= t_max
};

IsotropyOrder isotropy_order(const BundleMap& psi, const std::vector<cplx>& zs, int t_max, double tol = kArrowTol);

// A_z^psi for psi = pi_psi - pi_psi^perp: the map equal to -A'_psi on psi and -A'_{psi^perp} on psi^perp.
Matrix a_z_psi(const BundleMap& psi, cplx z);

// Largest norm of (A_z^psi)^2 over the samples.
double nilconformal_check(const BundleMap& psi, const std::vector<cplx>& zs);

// Sum of projectors of mutually orthogonal bundles.
BundleMap direct_sum(const std::vector<BundleMap>& parts, std::string label = "sum");

struct Diagram {
  std::vector<BundleMap> psi;
  std::vector<std::vector<bool>> arrows;  // arrows[i][j]: psi_i -> psi_j
  bool closing = false;                    // arrow psi_t -> psi_0

  int t() const { return static_cast<int>(psi.size()) - 1; }
};

struct DiagramCheck {
  double orthogonality = 0.0;  // max ||P_i P_j||, i != j
  double completeness = 0.0;   // max ||sum P_i - I||
  double absent_arrows = 0.0;  // max ||A'_{psi_i, psi_j}|| over absent arrows
  Eigen::MatrixXd arrow_norms;  // max over samples of ||A'_{psi_i, psi_j}||
};

// Arrows are measured: present where ||A'_{psi_i, psi_j}|| exceeds `arrow_tol` at some sample.
Diagram make_diagram(std::vector<BundleMap> psi, const std::vector<cplx>& zs, double arrow_tol = kArrowTol);
// psi_i = G^(i)(psi_0) for 0 <= i <= t.
Diagram harmonic_sequence(const BundleMap& psi0, int t, const std::vector<cplx>& zs, double arrow_tol = kArrowTol);
DiagramCheck check_diagram(const Diagram& d, const std::vector<cplx>& zs);

struct NilpropSplit {
  BundleMap psi0;  // kernel of A'_{psi} inside psi
  BundleMap psi1;  // its orthogonal complement inside psi
  double closing_residual = 0.0;  // max ||(P - P_0) A'_{closing}||
};

// Splits a 2-nilconformal psi = psi_0 + psi_1 with psi_0 = ker A'_psi. `closing` is
// the last vertex of the diagram; its image must lie in psi_0 (NotNilconformal).
NilpropSplit nilprop_split(const BundleMap& psi, const BundleMap& closing, const std::vector<cplx>& zs,
                           double tol = kDiffConditionTol);

// psi_0 + ... + psi_d.
BundleMap diagram_sum(const Diagram& d, int first, int last);

// alpha_j = sum_{i <= j} psi_i + psi_{d+i+1}, 0 <= j <= k - 2.
std::vector<BundleMap> alpha_builder_gen(const Diagram& d, int dd, int k);

// alpha_j = G^(1) + ... + G^(j+1) of a full holomorphic curve psi in CP^{n-1}.
// NotFull when one of G^(1..n-1) has rank zero at a sample.
std::vector<BundleMap> alpha_builder_holo(const BundleMap& psi, int k, const std::vector<cplx>& zs);

// psi(z) with its Wirtinger derivatives.
struct UnitaryJet {
  Matrix value;
  Matrix dz;
  Matrix dzbar;
};
using UnitaryField = std::function<UnitaryJet(cplx)>;

// psi = pi_psi - pi_psi^perp.
UnitaryField grassmannian_field(const BundleMap& psi);
// Psi(lambda, z) at fixed lambda from a loop-valued map and its derivatives.
UnitaryField loop_field(LoopEvaluator phi, LoopEvaluator phi_z, LoopEvaluator phi_zbar, cplx lambda);
// Derivatives by central differences with Richardson extrapolation.
UnitaryField sampled_field(std::function<Matrix(cplx)> psi, double h = 1e-3, double tol = 1e-5);
UnitaryField constant_field(const Matrix& psi);

struct DiffConditionResidual {
  double r_i = 0.0;    // d alpha_j / dz inside alpha_{j+1}
  double r_ii = 0.0;   // alpha_{k-2} in ker A_z^psi, image A_z^psi in alpha_0
  double r_iii = 0.0;  // alpha_j closed under d/dzbar + A_zbar^psi

  double max() const { return std::max({r_i, r_ii, r_iii}); }
  bool pass(double tol = kDiffConditionTol) const { return max() < tol; }
};

DiffConditionResidual diff_condition_check(const UnitaryField& psi, const std::vector<BundleMap>& alpha,
                                           const std::vector<cplx>& zs);

}  // namespace symloop
