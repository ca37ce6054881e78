#pragma once
// Special functions: Gegenbauer (ultraspherical) polynomials, generalized
// binomials, Kummer U, and Gauss 2F1 with analytic continuation.

#include "hyperasym/arith.hpp"

namespace hyperasym {

struct HypergeoParams {
  Complex a, b, c;
  Complex z;
};

// C_r^(p)(w) by the three-term recurrence.
Complex gegenbauer(unsigned r, const Complex& p, const Complex& w);

// Falling-factorial binomial a(a-1)...(a-r+1)/r!.
Complex binomial_general(const Complex& a, unsigned r);

// Kummer U(a, b, z), principal branch with the phase of z taken from the
// PhasedComplex argument (callers normalize into |arg| < pi first).
// Supported region: any complex a off the nonpositive integers, any b
// (integer b handled by an epsilon-limit), z != 0 with |phase| < pi.
Complex kummer_u(const Complex& a, const Complex& b, const PhasedComplex& z);

// Principal-branch 2F1.  Argument region: any z whose image under the best
// of the six Kummer fractional-linear transformations has modulus <= 0.85;
// this covers the arguments 1 + sigma1/sigma0 produced by the built-in
// problems (clustering near 0 and 2).  Real z > 1 evaluates the limit from
// below the cut (Im z -> 0^-).  Degenerate integer parameter differences are
// resolved by an imaginary epsilon-shift with symmetric averaging.
Complex gauss_2f1(const HypergeoParams& p);

}  // namespace hyperasym
