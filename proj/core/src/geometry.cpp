#include "symloop/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "symloop/calculus.hpp"
#include "symloop/linalg.hpp"

namespace symloop {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

MatrixJet identity_jet(Eigen::Index n, int order) { return MatrixJet::constant(Matrix::Identity(n, n), order); }

// Columns of `m` spanning its image: m V_r with V_r the right singular vectors
// above the threshold.
Matrix image_directions(const Matrix& m, double tol) {
  const linalg::Svd d = linalg::svd(m);
  Eigen::Index r = 0;
  while (r < d.s.size() && d.s(r) > tol) ++r;
  return d.v.leftCols(r);
}

// Operator-valued jet built from the projector jet of `psi`; `op` consumes one
// order (it differentiates once).
using JetOperator = std::function<MatrixJet(const MatrixJet&)>;

// Pointwise image of op(P) as a new bundle map.
BundleMap image_map(const BundleMap& psi, JetOperator op, double tol, std::string label) {
  const Eigen::Index n = psi.n();
  if (psi.is_analytic()) {
    return BundleMap::analytic(
        n,
        [psi, op, tol, n](cplx z, int order) {
          const MatrixJet a = op(psi.jet(z, order + 1));
          const Matrix dirs = image_directions(a.value(), tol);
          if (dirs.cols() == 0) return MatrixJet(n, n, order);
          return projector_jet(a * dirs);
        },
        std::move(label));
  }
  return BundleMap::sampled(
      n,
      [psi, op, tol](cplx z) {
        const MatrixJet a = op(psi.jet(z, 1));
        return linalg::projector(linalg::orthonormal_span_abs(a.value(), tol));
      },
      std::move(label), psi.step(), psi.fd_tol());
}

MatrixJet second_fundamental_jet(const MatrixJet& p) {
  const MatrixJet pt = p.truncated(p.order() - 1);
  return (identity_jet(p.rows(), pt.order()) - pt) * p.dz() * pt;
}

MatrixJet adjoint_second_fundamental_jet(const MatrixJet& p) {
  const MatrixJet pt = p.truncated(p.order() - 1);
  return pt * p.dzbar() * (identity_jet(p.rows(), pt.order()) - pt);
}

double max_over(const std::vector<cplx>& zs, const std::function<double(cplx)>& f) {
  double m = 0.0;
  for (const cplx z : zs) m = std::max(m, f(z));
  return m;
}

}  // namespace

BundleMap BundleMap::analytic(Eigen::Index n, JetFn projector, std::string label) {
  BundleMap b;
  b.n_ = n;
  b.jet_ = std::move(projector);
  b.label_ = std::move(label);
  return b;
}

BundleMap BundleMap::sampled(Eigen::Index n, ValueFn projector, std::string label, double h, double tol) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  BundleMap b;
  b.n_ = n;
  b.value_ = std::move(projector);
  b.label_ = std::move(label);
  b.h_ = h;
  b.tol_ = tol;
  return b;
}

BundleMap BundleMap::zero(Eigen::Index n) {
  return analytic(n, [n](cplx, int order) { return MatrixJet(n, n, order); }, "zero");
}

BundleMap BundleMap::constant(const Matrix& projector) {
  return analytic(
      projector.rows(), [projector](cplx, int order) { return MatrixJet::constant(projector, order); }, "constant");
}

Matrix BundleMap::value(cplx z) const {
  if (jet_) return jet_(z, 0).value();
  return value_(z);
}

MatrixJet BundleMap::jet(cplx z, int order) const {
  if (jet_) return jet_(z, order);
  if (order == 0) return MatrixJet::constant(value_(z), 0);
  if (order > 1) throw Error(ErrorCode::GridTooCoarse, "sampled bundle maps carry first derivatives only", order);
  const auto w = wirtinger(value_, z, h_);
  if (w.error > tol_) throw Error(ErrorCode::GridTooCoarse, "finite-difference error above tolerance", w.error);
  MatrixJet j = MatrixJet::constant(value_(z), 1);
  j.at(1, 0) = w.dz;
  j.at(0, 1) = w.dzbar;
  return j;
}

int BundleMap::rank(cplx z) const { return static_cast<int>(std::lround(value(z).trace().real())); }

AnalyticFrame::AnalyticFrame(Eigen::Index n, Eigen::Index m, JetFn jet, std::string label)
    : n_(n), m_(m), jet_(std::move(jet)), label_(std::move(label)) {}

AnalyticFrame AnalyticFrame::clifford(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Clifford frame needs n >= 2");
  return AnalyticFrame(
      n, 1,
      [n](cplx z, int order) {
        MatrixJet j(n, 1, order);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int i = 0; i < n; ++i) {
          const cplx w = RootOfUnity{n, i}.value();
          const cplx f = scale * std::exp(w * z - std::conj(w * z));
          for (int s = 0; s <= order; ++s)
            for (int b = 0; b <= s; ++b) {
              const int a = s - b;
              j.at(a, b)(i, 0) = f * std::pow(w, a) * std::pow(-std::conj(w), b) / (factorial(a) * factorial(b));
            }
        }
        return j;
      },
      "clifford(" + std::to_string(n) + ")");
}

AnalyticFrame AnalyticFrame::veronese(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "Veronese curve needs n >= 2");
  std::vector<Vector> c;
  for (int i = 0; i < n; ++i) {
    Vector v = Vector::Zero(n);
    v(i) = std::sqrt(binomial(n - 1, i));
    c.push_back(v);
  }
  return polynomial(n, {c}, "veronese(" + std::to_string(n) + ")");
}

AnalyticFrame AnalyticFrame::polynomial(Eigen::Index n, const std::vector<std::vector<Vector>>& coeffs,
                                        std::string label) {
  for (const auto& col : coeffs)
    for (const auto& v : col)
      if (v.size() != n) throw Error(ErrorCode::DimensionMismatch, "polynomial frame coefficient has wrong length");
  const auto m = static_cast<Eigen::Index>(coeffs.size());
  return AnalyticFrame(
      n, m,
      [n, m, coeffs](cplx z, int order) {
        MatrixJet j(n, m, order);
        for (Eigen::Index c = 0; c < m; ++c) {
          const auto& col = coeffs[static_cast<std::size_t>(c)];
          const int deg = static_cast<int>(col.size()) - 1;
          for (int a = 0; a <= std::min(order, deg); ++a)
            for (int p = a; p <= deg; ++p)
              j.at(a, 0).col(c) += binomial(p, a) * std::pow(z, p - a) * col[static_cast<std::size_t>(p)];
        }
        return j;
      },
      std::move(label));
}

Matrix AnalyticFrame::derivative(cplx z, int j) const { return jet_(z, j).at(j, 0) * factorial(j); }

AnalyticFrame AnalyticFrame::derivative_frame(int j) const {
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "derivative order must be nonnegative");
  if (j == 0) return *this;
  const Eigen::Index n = n_, m = m_;
  return AnalyticFrame(
      n, m,
      [base = jet_, j, n, m](cplx z, int order) {
        const MatrixJet full = base(z, order + j);
        MatrixJet out(n, m, order);
        for (int s = 0; s <= order; ++s)
          for (int b = 0; b <= s; ++b) {
            const int a = s - b;
            out.at(a, b) = full.at(a + j, b) * (factorial(a + j) / factorial(a));
          }
        return out;
      },
      label_ + "^(" + std::to_string(j) + ")");
}

AnalyticFrame AnalyticFrame::osculating(int j) const {
  std::vector<AnalyticFrame> parts;
  for (int i = 0; i <= j; ++i) parts.push_back(derivative_frame(i));
  const Eigen::Index n = n_, m = m_;
  return AnalyticFrame(
      n, m * (j + 1),
      [parts, n, m](cplx z, int order) {
        MatrixJet out(n, m * static_cast<Eigen::Index>(parts.size()), order);
        for (std::size_t p = 0; p < parts.size(); ++p) {
          const MatrixJet part = parts[p].jet(z, order);
          for (int s = 0; s <= order; ++s)
            for (int b = 0; b <= s; ++b)
              out.at(s - b, b).middleCols(static_cast<Eigen::Index>(p) * m, m) = part.at(s - b, b);
        }
        return out;
      },
      label_ + "[0.." + std::to_string(j) + "]");
}

AnalyticFrame AnalyticFrame::transformed(const Matrix& t) const {
  if (t.cols() != n_) throw Error(ErrorCode::DimensionMismatch, "transform does not act on the frame");
  return AnalyticFrame(
      t.rows(), m_, [base = jet_, t](cplx z, int order) { return t * base(z, order); }, label_);
}

BundleMap AnalyticFrame::span() const {
  return BundleMap::analytic(
      n_, [base = jet_](cplx z, int order) { return projector_jet(base(z, order)); }, label_);
}

double ProjectorField::max_projector_defect() const {
  double m = 0.0;
  for (const auto& p : values) m = std::max(m, linalg::projector_defect(p));
  return m;
}

ProjectorField sample_field(const BundleMap& psi, const ZGrid& grid) {
  grid.validate();
  ProjectorField f;
  f.grid = grid;
  std::map<int, int> counts;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      f.values.push_back(psi.value(grid.point(ix, iy)));
      f.ranks.push_back(static_cast<int>(std::lround(f.values.back().trace().real())));
      ++counts[f.ranks.back()];
    }
  f.rank = std::max_element(counts.begin(), counts.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;
  for (int i = 0; i < grid.size(); ++i)
    if (f.ranks[static_cast<std::size_t>(i)] != f.rank) f.singular.push_back(i);
  return f;
}

Matrix second_fundamental_form(const BundleMap& psi, cplx z) {
  const MatrixJet j = psi.jet(z, 1);
  const Matrix& p = j.value();
  return (Matrix::Identity(psi.n(), psi.n()) - p) * j.at(1, 0) * p;
}

Matrix second_fundamental_form(const BundleMap& psi_i, const BundleMap& psi_j, cplx z) {
  return psi_j.value(z) * second_fundamental_form(psi_i, z);
}

BundleMap gauss_bundle(const BundleMap& psi, double rank_tol) {
  return image_map(psi, second_fundamental_jet, rank_tol, "G'(" + psi.label() + ")");
}

BundleMap gauss_bundle(const BundleMap& psi, int j, double rank_tol) {
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "Gauss bundle index must be nonnegative");
  BundleMap g = psi;
  for (int i = 0; i < j; ++i) g = gauss_bundle(g, rank_tol);
  return g;
}

ProjectorField gauss_bundle(const BundleMap& psi, const ZGrid& grid, double rank_tol) {
  grid.validate();
  ProjectorField f;
  f.grid = grid;
  std::map<int, int> counts;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Matrix a = second_fundamental_form(psi, grid.point(ix, iy));
      const Matrix frame = linalg::orthonormal_span_abs(a, rank_tol);
      f.values.push_back(linalg::projector(frame));
      f.ranks.push_back(static_cast<int>(frame.cols()));
      ++counts[f.ranks.back()];
    }
  // Ties go to the larger rank: a rank drop is the exceptional event.
  int best = -1;
  for (const auto& [r, c] : counts)
    if (best < 0 || c >= counts[best]) best = r;
  f.rank = best;
  std::vector<int> generic;
  for (int i = 0; i < grid.size(); ++i) {
    if (f.ranks[static_cast<std::size_t>(i)] == f.rank)
      generic.push_back(i);
    else
      f.singular.push_back(i);
  }
  if (static_cast<double>(f.singular.size()) > 0.1 * grid.size())
    throw Error(ErrorCode::RankUnstable,
                std::to_string(f.singular.size()) + " of " + std::to_string(grid.size()) + " points are singular",
                static_cast<double>(f.singular.size()));
  for (const int s : f.singular) {
    const int sx = s % grid.nx, sy = s / grid.nx;
    int nearest = generic.front();
    long best_d = -1;
    for (const int g : generic) {
      const long dx = g % grid.nx - sx, dy = g / grid.nx - sy;
      const long d = dx * dx + dy * dy;
      if (best_d < 0 || d < best_d) {
        best_d = d;
        nearest = g;
      }
    }
    f.values[static_cast<std::size_t>(s)] = f.values[static_cast<std::size_t>(nearest)];
  }
  return f;
}

IsotropyOrder isotropy_order(const BundleMap& psi, const std::vector<cplx>& zs, int t_max, double tol) {
  if (t_max < 1) throw Error(ErrorCode::InvalidArgument, "t_max must be positive");
  BundleMap g = psi;
  for (int i = 1; i <= t_max; ++i) {
    g = gauss_bundle(g);
    const double overlap = max_over(zs, [&](cplx z) { return (psi.value(z) * g.value(z)).norm(); });
    if (overlap >= tol) return {i - 1, false};
  }
  return {t_max, true};
}

Matrix a_z_psi(const BundleMap& psi, cplx z) {
  const MatrixJet j = psi.jet(z, 1);
  const Matrix& p = j.value();
  const Matrix q = Matrix::Identity(psi.n(), psi.n()) - p;
  const Matrix& dp = j.at(1, 0);
  return p * dp * q - q * dp * p;
}

double nilconformal_check(const BundleMap& psi, const std::vector<cplx>& zs) {
  return max_over(zs, [&](cplx z) {
    const Matrix a = a_z_psi(psi, z);
    return (a * a).norm();
  });
}

BundleMap direct_sum(const std::vector<BundleMap>& parts, std::string label) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "direct sum of no bundles");
  const Eigen::Index n = parts.front().n();
  bool analytic = true;
  for (const auto& p : parts) {
    if (p.n() != n) throw Error(ErrorCode::DimensionMismatch, "bundles live in different C^n");
    analytic = analytic && p.is_analytic();
  }
  if (analytic)
    return BundleMap::analytic(
        n,
        [parts](cplx z, int order) {
          MatrixJet s = parts.front().jet(z, order);
          for (std::size_t i = 1; i < parts.size(); ++i) s += parts[i].jet(z, order);
          return s;
        },
        std::move(label));
  const auto sampled =
      std::find_if(parts.begin(), parts.end(), [](const BundleMap& p) { return !p.is_analytic(); });
  return BundleMap::sampled(
      n,
      [parts](cplx z) {
        Matrix s = parts.front().value(z);
        for (std::size_t i = 1; i < parts.size(); ++i) s += parts[i].value(z);
        return s;
      },
      std::move(label), sampled->step(), sampled->fd_tol());
}

DiagramCheck check_diagram(const Diagram& d, const std::vector<cplx>& zs) {
  const auto v = d.psi.size();
  DiagramCheck c;
  c.arrow_norms = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(v));
  for (const cplx z : zs) {
    std::vector<Matrix> p, a;
    for (const auto& b : d.psi) {
      p.push_back(b.value(z));
      a.push_back(second_fundamental_form(b, z));
    }
    Matrix sum = -Matrix::Identity(d.psi.front().n(), d.psi.front().n());
    for (std::size_t i = 0; i < v; ++i) {
      sum += p[i];
      for (std::size_t j = 0; j < v; ++j) {
        if (i == j) continue;
        c.orthogonality = std::max(c.orthogonality, (p[i] * p[j]).norm());
        const double an = (p[j] * a[i]).norm();
        auto& slot = c.arrow_norms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        slot = std::max(slot, an);
        if (!d.arrows.empty() && !d.arrows[i][j]) c.absent_arrows = std::max(c.absent_arrows, an);
      }
    }
    c.completeness = std::max(c.completeness, sum.norm());
  }
  return c;
}

Diagram make_diagram(std::vector<BundleMap> psi, const std::vector<cplx>& zs, double arrow_tol) {
  if (psi.empty()) throw Error(ErrorCode::InvalidArgument, "a diagram needs at least one vertex");
  Diagram d;
  d.psi = std::move(psi);
  const DiagramCheck c = check_diagram(d, zs);
  const auto v = d.psi.size();
  d.arrows.assign(v, std::vector<bool>(v, false));
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = 0; j < v; ++j)
      d.arrows[i][j] = i != j && c.arrow_norms(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > arrow_tol;
  d.closing = v > 1 && d.arrows[v - 1][0];
  return d;
}

Diagram harmonic_sequence(const BundleMap& psi0, int t, const std::vector<cplx>& zs, double arrow_tol) {
  if (t < 0) throw Error(ErrorCode::InvalidArgument, "sequence length must be nonnegative");
  std::vector<BundleMap> psi{psi0};
  for (int i = 1; i <= t; ++i) psi.push_back(gauss_bundle(psi.back()));
  return make_diagram(std::move(psi), zs, arrow_tol);
}

NilpropSplit nilprop_split(const BundleMap& psi, const BundleMap& closing, const std::vector<cplx>& zs, double tol) {
  NilpropSplit out;
  out.psi1 = image_map(psi, adjoint_second_fundamental_jet, kGaussRankTol, "psi_1");
  const BundleMap psi1 = out.psi1;
  const Eigen::Index n = psi.n();
  if (psi.is_analytic())
    out.psi0 = BundleMap::analytic(
        n, [psi, psi1](cplx z, int order) { return psi.jet(z, order) - psi1.jet(z, order); }, "psi_0");
  else
    out.psi0 = BundleMap::sampled(
        n, [psi, psi1](cplx z) -> Matrix { return psi.value(z) - psi1.value(z); }, "psi_0", psi.step(),
        psi.fd_tol());
  out.closing_residual =
      max_over(zs, [&](cplx z) { return (psi1.value(z) * second_fundamental_form(closing, z)).norm(); });
  if (out.closing_residual > tol)
    throw Error(ErrorCode::NotNilconformal, "closing arrow does not land in ker A'", out.closing_residual);
  return out;
}

BundleMap diagram_sum(const Diagram& d, int first, int last) {
  if (first < 0 || last > d.t() || first > last)
    throw Error(ErrorCode::ParameterOutOfRange, "vertex range outside the diagram");
  std::vector<BundleMap> parts(d.psi.begin() + first, d.psi.begin() + last + 1);
  return direct_sum(parts, "psi_" + std::to_string(first) + ".." + std::to_string(last));
}

std::vector<BundleMap> alpha_builder_gen(const Diagram& d, int dd, int k) {
  const int t = d.t();
  if (dd < 1 || dd > t - 2)
    throw Error(ErrorCode::ParameterOutOfRange, "d must satisfy 1 <= d <= t - 2 (t = " + std::to_string(t) + ")", dd);
  if (k < 2 || k > std::min(dd + 1, t - dd))
    throw Error(ErrorCode::ParameterOutOfRange, "k must satisfy 2 <= k <= min(d + 1, t - d)", k);
  std::vector<BundleMap> alpha;
  for (int j = 0; j <= k - 2; ++j) {
    std::vector<BundleMap> parts;
    for (int i = 0; i <= j; ++i) {
      parts.push_back(d.psi[static_cast<std::size_t>(i)]);
      parts.push_back(d.psi[static_cast<std::size_t>(dd + i + 1)]);
    }
    alpha.push_back(direct_sum(parts, "alpha_" + std::to_string(j)));
  }
  return alpha;
}

std::vector<BundleMap> alpha_builder_holo(const BundleMap& psi, int k, const std::vector<cplx>& zs) {
  const auto n = static_cast<int>(psi.n());
  if (k < 2 || k > n) throw Error(ErrorCode::ParameterOutOfRange, "k must satisfy 2 <= k <= n", k);
  std::vector<BundleMap> g{psi};
  for (int i = 1; i <= n - 1; ++i) {
    g.push_back(gauss_bundle(g.back()));
    for (const cplx z : zs)
      if (g.back().rank(z) == 0)
        throw Error(ErrorCode::NotFull, "Gauss bundle G^(" + std::to_string(i) + ") vanishes", i);
  }
  std::vector<BundleMap> alpha;
  for (int j = 0; j <= k - 2; ++j) {
    std::vector<BundleMap> parts(g.begin() + 1, g.begin() + j + 2);
    alpha.push_back(direct_sum(parts, "alpha_" + std::to_string(j)));
  }
  return alpha;
}

UnitaryField grassmannian_field(const BundleMap& psi) {
  return [psi](cplx z) {
    const MatrixJet j = psi.jet(z, 1);
    const Eigen::Index n = psi.n();
    return UnitaryJet{2.0 * j.value() - Matrix::Identity(n, n), 2.0 * j.at(1, 0), 2.0 * j.at(0, 1)};
  };
}

UnitaryField loop_field(LoopEvaluator phi, LoopEvaluator phi_z, LoopEvaluator phi_zbar, cplx lambda) {
  return [phi = std::move(phi), phi_z = std::move(phi_z), phi_zbar = std::move(phi_zbar), lambda](cplx z) {
    return UnitaryJet{phi(z).evaluate(lambda), phi_z(z).evaluate(lambda), phi_zbar(z).evaluate(lambda)};
  };
}

UnitaryField sampled_field(std::function<Matrix(cplx)> psi, double h, double tol) {
  return [psi = std::move(psi), h, tol](cplx z) {
    const auto w = wirtinger(psi, z, h);
    if (w.error > tol) throw Error(ErrorCode::GridTooCoarse, "finite-difference error above tolerance", w.error);
    return UnitaryJet{psi(z), w.dz, w.dzbar};
  };
}

UnitaryField constant_field(const Matrix& psi) {
  return [psi](cplx) {
    const Matrix zero = Matrix::Zero(psi.rows(), psi.cols());
    return UnitaryJet{psi, zero, zero};
  };
}

DiffConditionResidual diff_condition_check(const UnitaryField& psi, const std::vector<BundleMap>& alpha,
                                           const std::vector<cplx>& zs) {
  if (alpha.empty()) throw Error(ErrorCode::InvalidArgument, "need alpha_0 .. alpha_{k-2} with k >= 2");
  DiffConditionResidual r;
  for (const cplx z : zs) {
    const UnitaryJet u = psi(z);
    const Eigen::Index n = u.value.rows();
    const Eigen::PartialPivLU<Matrix> lu(u.value);
    const Matrix a_z = 0.5 * lu.solve(u.dz);
    const Matrix a_zbar = 0.5 * lu.solve(u.dzbar);
    const Matrix id = Matrix::Identity(n, n);
    std::vector<MatrixJet> p;
    for (const auto& a : alpha) p.push_back(a.jet(z, 1));
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
      const Matrix out = id - p[j + 1].value();
      r.r_i = std::max({r.r_i, (out * p[j].at(1, 0) * p[j].value()).norm(), (out * p[j].value()).norm()});
    }
    r.r_ii = std::max({r.r_ii, (a_z * p.back().value()).norm(), ((id - p.front().value()) * a_z).norm()});
    for (const auto& pj : p)
      r.r_iii = std::max(r.r_iii, ((id - pj.value()) * (pj.at(0, 1) + a_zbar) * pj.value()).norm());
  }
  return r;
}

}  // namespace symloop
