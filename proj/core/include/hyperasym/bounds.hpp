#pragma once
// Rigorous error bounds: the three-case bound factor for first-level
// hyperterminants, the Level-0 remainder bound assembled from absolute
// contour integrals over the adjacent contours, and the sharper variant for
// doubly-infinite contours through a simple saddle.

#include "hyperasym/problem.hpp"

#include <vector>

namespace hyperasym {

// Which case of the three-case factor applied: inner (factor 1), stokes
// (the csc/root minimum across a Stokes angle), outer (the |cos|^-M growth
// in the half-sector continued past the Stokes angle).
enum class BoundRegime { inner, stokes, outer };

// The three-case bound on |z^{1/omega} F^(1)(z; M, omega, 1) / Gamma(M)|
// at theta = arg z:
//   1                                          if |theta| <= pi omega / 2,
//   min(|csc(theta/omega)|, root)              if ... <= pi omega,
//   omega sqrt(2 pi M)/|cos theta|^M + root    if ... <  pi omega + pi/2,
// with root = omega sqrt(e (M + 1/2)); for omega = 1 root is replaced by
// the sharper sqrt(pi) Gamma(M/2 + 1)/Gamma(M/2 + 1/2) + 1.
// Throws std::domain_error when |theta| >= pi omega + pi/2.
Real hyperterminant_bound_factor(const Real& M, unsigned omega,
                                 const Real& theta);

// One adjacent-contour contribution: bound_value is exactly
// prefactor * integral_part * factor.
struct BoundReport {
  int saddle_id = 0;    // n
  int adjacent_id = 0;  // m
  long N = 0;
  Real theta{0};  // arg z
  BoundRegime regime = BoundRegime::inner;
  Real prefactor{0};
  Real integral_part{0};
  Real factor{0};
  Real bound_value{0};
};

struct RemainderBoundResult {
  std::vector<BoundReport> contributions;  // one per adjacent saddle of n
  Real total{0};           // sum of the contributions
  Real neglected_term{0};  // |T_N(alpha) z^{-N/omega}| for comparison
  Real neglected_ratio{0};  // total / neglected_term, 0 if the term vanishes
};

// Bound on |R_N^(n)(z; alpha)|, the remainder of the truncated Poincare
// expansion: Gamma((N+1)/omega_n) / (2 pi |z|^{N/omega_n}) times, for each
// adjacent saddle m, the absolute contour integral with exponent
// (N+1)/omega_n times the three-case factor at theta - theta+ + pi omega_n.
// The family representative theta+ is the smallest Stokes angle exceeding
// theta - pi/2, so every theta within pi/2 of the labelled sector is
// covered and the outer regime is reached by continuing up to pi/2 past a
// Stokes angle.  Throws std::domain_error when theta - pi/2 lies on a
// Stokes angle and AccuracyError when the contour integral diverges.
RemainderBoundResult remainder_bound(const ProblemSpec& spec, int n,
                                     long alpha, const PhasedComplex& z,
                                     long N);

// Bound on |bold-R_N^(n)(z, 0)|, the remainder of the doubly-infinite
// contour expansion sum_{r<N} bold-T_2r(0) z^-r through a simple saddle
// (bold-R_N = R_2N(z; 0) - R_2N(z; 1)): Gamma(N + 1/2) / (pi |z|^N) times
// the absolute contour integrals with exponent N + 1/2 times the omega = 1
// factor at theta - theta+ + pi.  Requires omega_n = 2
// (std::invalid_argument otherwise); neglected_term is
// |bold-T_2N(0) z^-N|.
RemainderBoundResult simple_saddle_bound(const ProblemSpec& spec, int n,
                                         const PhasedComplex& z, long N);

}  // namespace hyperasym
