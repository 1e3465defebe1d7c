#pragma once

#include <algorithm>
#include <utility>

#include "symloop/loops.hpp"

namespace symloop {

template <class V>
struct Wirtinger {
  V dz;
  V dzbar;
  double error = 0.0;  // Richardson estimate of the remaining discretization error
};

inline double value_norm(const Matrix& m) { return m.norm(); }

template <class Coef>
double value_norm(const LaurentLoop<Coef>& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs()) s = std::max(s, c.norm());
  return s;
}

// d/dz = (d/dx - i d/dy) / 2 and d/dzbar = (d/dx + i d/dy) / 2 from central
// differences at steps h and h/2, combined by one Richardson step.
template <class F>
auto wirtinger(F&& f, cplx z, double h) -> Wirtinger<decltype(f(z))> {
  using V = decltype(f(z));
  auto central = [&](double step) {
    const V dx = (f(z + step) - f(z - step)) * cplx(1.0 / (2.0 * step));
    const V dy = (f(z + kI * step) - f(z - kI * step)) * cplx(1.0 / (2.0 * step));
    return std::pair<V, V>{(dx - dy * kI) * cplx(0.5), (dx + dy * kI) * cplx(0.5)};
  };
  const auto coarse = central(h);
  const auto fine = central(h / 2.0);
  Wirtinger<V> out;
  out.dz = (fine.first * cplx(4.0) - coarse.first) * cplx(1.0 / 3.0);
  out.dzbar = (fine.second * cplx(4.0) - coarse.second) * cplx(1.0 / 3.0);
  out.error = std::max(value_norm(out.dz - fine.first), value_norm(out.dzbar - fine.second));
  return out;
}

}  // namespace symloop
