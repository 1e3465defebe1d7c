#include "symloop/dpw.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "symloop/calculus.hpp"
#include "symloop/linalg.hpp"

namespace symloop {

Potential::Potential(Eigen::Index n, std::vector<PotentialTerm> terms) : n_(n), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.power < -1)
      throw Error(ErrorCode::InvalidArgument, "potential term at lambda^" + std::to_string(t.power) + " below -1");
    if (t.zdegree < 0) throw Error(ErrorCode::InvalidArgument, "negative z-degree");
    if (t.coeff.rows() != n_ || t.coeff.cols() != n_)
      throw Error(ErrorCode::DimensionMismatch, "potential coefficient has the wrong shape");
    if (!t.coeff.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite potential coefficient");
  }
}

Potential Potential::from_loop(const MatrixLoop& xi) {
  std::vector<PotentialTerm> terms;
  for (int m = xi.min_degree(); m <= xi.max_degree(); ++m) {
    const Matrix c = xi.coeff(m);
    if (c.isZero(0.0)) continue;
    terms.push_back({m, 0, c});
  }
  return Potential(xi.rows(), std::move(terms));
}

bool Potential::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const PotentialTerm& t) { return t.zdegree == 0; });
}

bool Potential::is_zero(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const PotentialTerm& t) { return t.coeff.norm() <= tol; });
}

int Potential::min_power() const {
  int m = 0;
  bool first = true;
  for (const auto& t : terms_) {
    m = first ? t.power : std::min(m, t.power);
    first = false;
  }
  return m;
}

int Potential::max_power() const {
  int m = 0;
  bool first = true;
  for (const auto& t : terms_) {
    m = first ? t.power : std::max(m, t.power);
    first = false;
  }
  return m;
}

Matrix Potential::coefficient(int power, int zdegree) const {
  Matrix c = Matrix::Zero(n_, n_);
  for (const auto& t : terms_)
    if (t.power == power && t.zdegree == zdegree) c += t.coeff;
  return c;
}

MatrixLoop Potential::loop(cplx z, int sample_count) const {
  if (terms_.empty()) return MatrixLoop(n_, n_, sample_count);
  const int lo = min_power();
  std::vector<Matrix> c(static_cast<std::size_t>(max_power() - lo + 1), Matrix::Zero(n_, n_));
  for (const auto& t : terms_) c[static_cast<std::size_t>(t.power - lo)] += std::pow(z, t.zdegree) * t.coeff;
  return MatrixLoop(lo, std::move(c), sample_count);
}

Matrix Potential::value(cplx lambda, cplx z) const {
  Matrix out = Matrix::Zero(n_, n_);
  for (const auto& t : terms_) out += std::pow(lambda, t.power) * std::pow(z, t.zdegree) * t.coeff;
  return out;
}

Potential Potential::normalized(double tol) const {
  std::map<std::pair<int, int>, Matrix> acc;
  for (const auto& t : terms_) {
    auto [it, fresh] = acc.try_emplace({t.power, t.zdegree}, t.coeff);
    if (!fresh) it->second += t.coeff;
  }
  std::vector<PotentialTerm> out;
  for (auto& [key, c] : acc)
    if (c.norm() > tol) out.push_back({key.first, key.second, c});
  return Potential(n_, std::move(out));
}

double potential_distance(const Potential& a, const Potential& b) {
  if (a.n() != b.n()) throw Error(ErrorCode::DimensionMismatch, "potentials of different size");
  std::vector<PotentialTerm> diff = a.terms();
  for (const auto& t : b.terms()) diff.push_back({t.power, t.zdegree, -t.coeff});
  const Potential delta = Potential(a.n(), std::move(diff)).normalized();
  double d = 0.0;
  for (const auto& t : delta.terms()) d = std::max(d, t.coeff.norm());
  return d;
}

ZGrid ZGrid::square(double half_width, int points) {
  ZGrid g{-half_width, half_width, -half_width, half_width, points, points};
  g.validate();
  return g;
}

void ZGrid::validate() const {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::ConfigError, "grid needs at least one node per axis");
  if (x1 < x0 || y1 < y0) throw Error(ErrorCode::ConfigError, "grid bounds are reversed");
  base_index();
}

std::pair<int, int> ZGrid::base_index() const {
  auto index_of_zero = [](double a, double h, int count) {
    if (count == 1) return std::abs(a) < 1e-12 ? 0 : -1;
    const double r = -a / h;
    const long i = std::lround(r);
    if (i < 0 || i >= count || std::abs(r - static_cast<double>(i)) > 1e-9) return -1;
    return static_cast<int>(i);
  };
  const int ix = index_of_zero(x0, hx(), nx);
  const int iy = index_of_zero(y0, hy(), ny);
  if (ix < 0 || iy < 0) throw Error(ErrorCode::ConfigError, "z = 0 is not a grid node");
  return {ix, iy};
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Raw: return "raw";
    case FieldKind::Unitary: return "unitary";
    case FieldKind::Framing: return "framing";
  }
  return "raw";
}

double LoopField::max_residual() const {
  double r = 0.0;
  for (double x : residuals) r = std::max(r, x);
  return r;
}

namespace {

struct Segment {
  cplx start;
  cplx delta;
};

std::vector<Segment> path_segments(cplx z, IntegrationPath path) {
  if (path == IntegrationPath::Straight) return {{0.0, z}};
  return {{0.0, cplx(z.real(), 0.0)}, {cplx(z.real(), 0.0), cplx(0.0, z.imag())}};
}

// g' = g xi(lambda, z(t)) z'(t) by classical RK4 with `steps` steps per segment.
Matrix rk4(const Potential& mu, cplx lambda, const std::vector<Segment>& segs, const std::vector<int>& steps) {
  Matrix g = Matrix::Identity(mu.n(), mu.n());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& seg = segs[s];
    const double dt = 1.0 / steps[s];
    auto rhs = [&](const Matrix& x, double t) -> Matrix {
      return x * mu.value(lambda, seg.start + t * seg.delta) * seg.delta;
    };
    for (int i = 0; i < steps[s]; ++i) {
      const double t = i * dt;
      const Matrix k1 = rhs(g, t);
      const Matrix k2 = rhs(g + 0.5 * dt * k1, t + 0.5 * dt);
      const Matrix k3 = rhs(g + 0.5 * dt * k2, t + 0.5 * dt);
      const Matrix k4 = rhs(g + dt * k3, t + dt);
      g += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return g;
}

}  // namespace

MatrixLoop integrate_at(const Potential& mu, cplx z, const IntegrationOptions& opt, double* error) {
  if (error) *error = 0.0;
  if (mu.is_constant()) return loop_exp(mu.loop(0.0, opt.sample_count) * z);
  const auto segs = path_segments(z, opt.path);
  std::vector<int> coarse, fine;
  const double max_step = opt.step / 4.0;
  for (const auto& s : segs) {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(s.delta) / max_step)));
    coarse.push_back(n);
    fine.push_back(2 * n);
  }
  std::vector<Matrix> samples;
  double err = 0.0;
  for (int j = 0; j < opt.sample_count; ++j) {
    const cplx lambda = detail::unit_phase(j, opt.sample_count);
    const Matrix a = rk4(mu, lambda, segs, coarse);
    const Matrix b = rk4(mu, lambda, segs, fine);
    err = std::max(err, (a - b).norm());
    samples.push_back(b);
  }
  if (error) *error = err;
  if (err > opt.tol) throw Error(ErrorCode::StepTooLarge, "RK4 error estimate above tolerance", err);
  return MatrixLoop::from_samples(samples);
}

LoopField integrate_potential(const Potential& mu, const ZGrid& grid, IntegrationOptions opt) {
  grid.validate();
  if (grid.nx > 1 || grid.ny > 1) opt.step = std::min(opt.step, std::max(grid.hx(), grid.hy()));
  LoopField f;
  f.grid = grid;
  f.kind = FieldKind::Raw;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      double err = 0.0;
      f.values.push_back(integrate_at(mu, grid.point(ix, iy), opt, &err));
      f.residuals.push_back(err);
    }
  return f;
}

FactorizationResult extended_at(const Potential& mu, cplx z, int depth, const IntegrationOptions& opt) {
  return iwasawa_factor(integrate_at(mu, z, opt), depth);
}

LoopField extended_solution(const Potential& mu, const ZGrid& grid, int depth, IntegrationOptions opt) {
  grid.validate();
  if (grid.nx > 1 || grid.ny > 1) opt.step = std::min(opt.step, std::max(grid.hx(), grid.hy()));
  LoopField f;
  f.grid = grid;
  f.kind = FieldKind::Unitary;
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const cplx z = grid.point(ix, iy);
      try {
        auto r = extended_at(mu, z, depth, opt);
        f.values.push_back(std::move(r.phi));
        f.residuals.push_back(r.residual);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::FactorizationFailed) throw;
        throw Error(e.code(),
                    std::string(e.what()) + " at z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")",
                    e.measure());
      }
    }
  return f;
}

namespace {

void accumulate_check(ExtendedCheck& out, cplx z, const MatrixLoop& phi, const MatrixLoop& dz, const MatrixLoop& dzbar) {
  const MatrixLoop phi_inv = star(phi);
  const MatrixLoop lz = phi_inv * dz;
  const MatrixLoop lzbar = phi_inv * dzbar;
  const Matrix a_z = -lz.coeff(-1);
  const Matrix a_zbar = -lzbar.coeff(1);
  const MatrixLoop ez(-1, {-a_z, a_z}, phi.sample_count());
  const MatrixLoop ezbar(0, {a_zbar, -a_zbar}, phi.sample_count());
  out.zs.push_back(z);
  out.a_z.push_back(a_z);
  out.a_zbar.push_back(a_zbar);
  out.residual = std::max({out.residual, value_norm(lz - ez), value_norm(lzbar - ezbar)});
  out.adjoint_residual = std::max(out.adjoint_residual, (a_zbar + a_z.adjoint()).norm());
}

}  // namespace

ExtendedCheck verify_extended(const LoopEvaluator& phi, const std::vector<cplx>& zs, double h, double tol) {
  ExtendedCheck out;
  for (cplx z : zs) {
    const auto d = wirtinger(phi, z, h);
    out.fd_error = std::max(out.fd_error, d.error);
    if (d.error > tol) throw Error(ErrorCode::GridTooCoarse, "finite-difference error above tolerance", d.error);
    accumulate_check(out, z, phi(z), d.dz, d.dzbar);
  }
  return out;
}

ExtendedCheck verify_extended(const LoopEvaluator& phi, const LoopEvaluator& phi_z, const LoopEvaluator& phi_zbar,
                              const std::vector<cplx>& zs) {
  ExtendedCheck out;
  for (cplx z : zs) accumulate_check(out, z, phi(z), phi_z(z), phi_zbar(z));
  return out;
}

double check_tau_twisted(const Potential& mu, const TwistedAutomorphism& t) {
  double worst = 0.0;
  for (const auto& term : mu.terms()) worst = std::max(worst, t.grade_residual(term.coeff, term.power));
  return worst;
}

Potential bar_mu(const Potential& mu, const TwistedAutomorphism& t, double tol) {
  const double tw = check_tau_twisted(mu, t);
  if (tw > tol) throw Error(ErrorCode::NotTwisted, "potential is not tau-twisted", tw);
  const int k = t.k();
  std::vector<PotentialTerm> out;
  for (const auto& term : mu.terms())
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) {
        const int shifted = term.power + r - c;
        if (((shifted % k) + k) % k != 0) continue;
        const Matrix b = t.block(term.coeff, r, c);
        if (b.isZero(0.0)) continue;
        out.push_back({shifted / k, term.zdegree, b});
      }
  return Potential(mu.n(), std::move(out)).normalized();
}

namespace {

// gamma^{-1} X lambda^p gamma for gamma = P + lambda Q: PXP and QXQ keep p,
// PXQ moves to p + 1 and QXP to p - 1.
void conjugate_term(const PotentialTerm& term, const Matrix& p, const Matrix& q, double tol,
                    std::vector<PotentialTerm>& out) {
  const std::pair<int, Matrix> parts[] = {{term.power, p * term.coeff * p + q * term.coeff * q},
                                          {term.power + 1, p * term.coeff * q},
                                          {term.power - 1, q * term.coeff * p}};
  for (const auto& [power, m] : parts) {
    if (power < -1) {
      const double leak = m.norm();
      if (leak > tol)
        throw Error(ErrorCode::LambdaMinusTwoLeak,
                    "conjugated potential has a lambda^" + std::to_string(power) + " coefficient", leak);
      continue;
    }
    if (!m.isZero(0.0)) out.push_back({power, term.zdegree, m});
  }
}

}  // namespace

Potential gamma_j_potential(const Potential& mu, const Matrix& projector, double tol) {
  const Matrix q = Matrix::Identity(mu.n(), mu.n()) - projector;
  std::vector<PotentialTerm> out;
  for (const auto& term : mu.terms()) conjugate_term(term, projector, q, tol, out);
  return Potential(mu.n(), std::move(out)).normalized();
}

Potential reverse_bar(const Potential& mu, const Matrix& projector, int l, double tol) {
  if (l <= 0) throw Error(ErrorCode::InvalidArgument, "substitution power must be positive");
  const Matrix q = Matrix::Identity(mu.n(), mu.n()) - projector;
  std::vector<PotentialTerm> out;
  for (const auto& term : mu.terms()) {
    const PotentialTerm sub{term.power * l, term.zdegree, term.coeff};
    conjugate_term(sub, projector, q, tol, out);
  }
  return Potential(mu.n(), std::move(out)).normalized();
}

MatrixLoop blaschke_loop(const Matrix& projector, int sample_count) {
  const Matrix q = Matrix::Identity(projector.rows(), projector.cols()) - projector;
  return MatrixLoop(0, {projector, q}, sample_count);
}

UnitonWindow uniton_degree(const MatrixLoop& phi, double tol, double tail_tol) {
  UnitonWindow w;
  bool found = false;
  for (int m = phi.min_degree(); m <= phi.max_degree(); ++m)
    if (phi.coeff(m).norm() > tol) {
      if (!found) w.lo = m;
      w.hi = m;
      found = true;
    }
  for (int m = phi.min_degree(); m <= phi.max_degree(); ++m)
    if (!found || m < w.lo || m > w.hi) w.tail = std::max(w.tail, phi.coeff(m).norm());
  w.polynomial = w.tail < tail_tol;
  return w;
}

}  // namespace symloop
