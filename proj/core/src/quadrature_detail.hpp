#pragma once
// Internal: double-exponential (tanh-sinh) quadrature on a finite interval,
// shared by the hyperterminant and geometry oracles.  The endpoint distances
// are computed without cancellation so algebraic endpoint singularities
// x^(M-1) are resolved to full depth.

#include "hyperasym/arith.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace hyperasym::detail {

// Integrates f over (a, b) to relative tolerance tol.  weight_cut truncates
// the node rows: against an endpoint singularity d^s the node contribution
// behaves like w^(1+s), so callers with s < -1/2 must pass a cut deeper than
// the default tol^2 (tol^omega covers s = -(omega-1)/omega).  If err_out is
// non-null it receives the last inter-level difference (absolute).
template <typename F>
Complex de_integrate(const F& f, const Real& a, const Real& b, const Real& tol,
                     Real weight_cut = Real(0), Real* err_out = nullptr) {
  namespace mp = boost::multiprecision;
  Real half = (b - a) / 2, mid = (a + b) / 2;
  Real piq = pi() / 2;
  Real wcut = weight_cut > 0 ? weight_cut : tol * tol;

  auto eval_row = [&](const Real& h, long start, long step, Complex& acc) {
    for (long idx = start;; idx += step) {
      Real u = Real(idx) * h;
      Real sh = piq * mp::sinh(u);
      Real ch = mp::cosh(sh);
      Real w = piq * mp::cosh(u) / (ch * ch);
      if (w < wcut && idx > 2) break;
      // distance from the upper endpoint: half*(1 - tanh(sh)) = half*2/(e^{2 sh}+1)
      Real d = 2 * half / (mp::exp(2 * sh) + 1);
      acc += w * (f(b - d) + f(a + d));  // the +u and -u nodes
    }
  };

  Real h(1);
  Complex acc = piq * f(mid);  // u = 0
  eval_row(h, 1, 1, acc);      // u = +-1, +-2, ...
  Complex prev = acc * (half * h);
  for (int level = 1; level <= 12; ++level) {
    h /= 2;
    eval_row(h, 1, 2, acc);  // new odd nodes
    Complex cur = acc * (half * h);
    Real diff = abs(cur - prev);
    if (diff < tol * (abs(cur) + tol) && level >= 3) {
      if (err_out) *err_out = diff;
      return cur;
    }
    prev = cur;
  }
  throw AccuracyError("tanh-sinh quadrature did not converge");
}

}  // namespace hyperasym::detail
