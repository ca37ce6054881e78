#pragma once
// Generalised hyperterminants **F**^(k+1) for k <= 2: reduction to simple
// (unit-omega) hyperterminants, evaluation of those through a convergent
// A-coefficient / Kummer-U series, an epsilon-limit for collinear phase
// configurations, and an independent nested-quadrature oracle.

#include "hyperasym/arith.hpp"

#include <vector>

namespace hyperasym {

struct HyperterminantColumn {
  Real M;               // real order parameter, M > 1/omega
  unsigned omega = 1;   // positive integer
  PhasedComplex sigma;  // nonzero; the (unreduced) phase is data
};

// Argument pack of **F**^(k+1); columns.size() == k+1 <= 3.  An empty pack
// denotes **F**^(0) == 1.
struct HyperterminantArgs {
  std::vector<HyperterminantColumn> columns;
};

void validate_args(const HyperterminantArgs& args);

// Two successive sigma phases coincide modulo 2*pi: the integration path
// through the poles is ambiguous; route to hyperterminant_collinear.
struct CollinearPhaseError : std::domain_error {
  using std::domain_error::domain_error;
};

struct GammaSelection {
  std::vector<long> gammas;  // gamma_0 .. gamma_k
};

// The unique integers with |arg z + arg sigma_0 + 2 pi gamma_0| < pi and
// 0 < arg sigma_j - arg sigma_{j-1} + 2 pi gamma_j < 2 pi (j >= 1).
GammaSelection choose_gammas(const PhasedComplex& z,
                             const HyperterminantArgs& args);

// One column of a simple hyperterminant (omega == 1), with the phase of
// sigma already inside the windows above.
struct ReducedColumn {
  Real M;
  PhasedComplex sigma;
};

// A^(k+1)(n) of the convergent expansion
//   F^(k+1)(z; cols) = sum_n A^(k+1)(n) U(n+1, 2-M_0, z sigma_0).
// Requires Re(M_1) > 2 and Re(M_j) > 1 for j != 1.  For three columns the
// inner m-sum is truncated at series_terms terms; *truncation (if non-null)
// receives the magnitude of the last inner term.
Complex a_coefficient(const std::vector<ReducedColumn>& cols, unsigned n,
                      unsigned series_terms, Real* truncation = nullptr);

struct HyperterminantResult {
  Complex value;
  Real truncation_estimate;  // relative to |value|
};

// **F**^(k+1)(z; args), requiring |arg z + arg sigma_0| < pi omega_0.
// series_terms == 0 selects 40 terms with automatic escalation to 80 when
// the truncation estimate exceeds target_accuracy (default: a few orders
// above the working epsilon).
HyperterminantResult hyperterminant(const PhasedComplex& z,
                                    const HyperterminantArgs& args,
                                    unsigned series_terms = 0,
                                    Real target_accuracy = Real(0));

// Collinear case via the limit sigma_j -> sigma_j e^{-(k-j) eps i},
// eps -> 0+, Richardson-extrapolated over the given descending eps list.
// Non-collinear input is forwarded to hyperterminant unchanged.
HyperterminantResult hyperterminant_collinear(const PhasedComplex& z,
                                              const HyperterminantArgs& args,
                                              const std::vector<Real>& epsilons,
                                              unsigned series_terms = 0,
                                              Real tolerance = Real(0));

// Direct nested quadrature of the defining contour integrals (k <= 1 only;
// oracle-grade).  Target accuracy 10^(-target_digits); target_digits == 0
// selects half the working precision.
Complex hyperterminant_quadrature(const PhasedComplex& z,
                                  const HyperterminantArgs& args,
                                  unsigned target_digits = 0);

}  // namespace hyperasym
