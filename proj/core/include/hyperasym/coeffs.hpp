#pragma once
// Asymptotic-expansion coefficients T_r^(n)(alpha) by two independent routes
// (Perron differentiation via truncated power series, and a trapezoidal loop
// rule), plus the differenced coefficients bold-T.

#include "hyperasym/problem.hpp"

namespace hyperasym {

enum class CoeffRoute { perron, trapezoidal, closed_form };

struct CoefficientTable {
  int saddle_id = 0;
  long alpha = 0;
  std::vector<Complex> values;  // T_0 ... T_{N-1}
  CoeffRoute route = CoeffRoute::perron;
};

// T_r = e^{2 pi i alpha (r+1)/omega} (omega!/f^(omega))^{(r+1)/omega}
//       * Gamma((r+1)/omega) * [r-th Taylor coefficient of g h^{-(r+1)/omega}],
// where h = (f - f_n)/(c (t - t^(n))^omega) is the unit-normalized series.
// The scalar power uses the phase -arg f^(omega)(t^(n)), arg in (-pi, pi].
CoefficientTable perron_coefficients(const ProblemSpec& spec, int n, long alpha,
                                     std::size_t count);

// Trapezoidal loop rule with 2M samples on |t - t^(n)| = rho; the branch of
// ((t-t^(n))^omega/(f-f_n))^{(r+1)/omega} is fixed by phase continuity from
// the value -arg f^(omega) at the first sample.  rho <= 0 selects half the
// distance to the nearest other saddle.
CoefficientTable trapezoidal_coefficients(const ProblemSpec& spec, int n,
                                          long alpha, std::size_t count,
                                          Real rho, unsigned M);

// bold-T_r(alpha) = T_r(alpha) - T_r(alpha + 1), elementwise.
CoefficientTable bold_T_coefficients(const CoefficientTable& table0,
                                     const CoefficientTable& table1);

}  // namespace hyperasym
