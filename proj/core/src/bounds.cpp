#include "hyperasym/bounds.hpp"

#include "hyperasym/coeffs.hpp"
#include "hyperasym/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/mpfr.hpp>

namespace hyperasym {
namespace {

namespace mp = boost::multiprecision;

// sqrt(pi) Gamma(M/2 + 1) / Gamma(M/2 + 1/2) + 1, the sharper large-M
// replacement for sqrt(e (M + 1/2)) available when omega = 1.
Real gamma_ratio_root(const Real& M) {
  Real half_m = M / 2;
  return mp::sqrt(pi()) * gamma(half_m + 1) / gamma(half_m + Real(1) / 2) + 1;
}

Real root_term(const Real& M, unsigned omega) {
  if (omega == 1) return gamma_ratio_root(M);
  Real e = mp::exp(Real(1));
  return Real(static_cast<long>(omega)) * mp::sqrt(e * (M + Real(1) / 2));
}

Real factor_impl(const Real& M, unsigned omega, const Real& theta,
                 BoundRegime* regime) {
  if (!(M > 0))
    throw std::invalid_argument("hyperterminant_bound_factor: M must be > 0");
  if (omega < 1)
    throw std::invalid_argument(
        "hyperterminant_bound_factor: omega must be >= 1");
  Real a = mp::abs(theta);
  Real w(static_cast<long>(omega));
  if (!(a < pi() * w + pi() / 2))
    throw std::domain_error(
        "hyperterminant_bound_factor: |theta| must be < pi omega + pi/2");
  if (a <= pi() * w / 2) {
    if (regime) *regime = BoundRegime::inner;
    return Real(1);
  }
  Real root = root_term(M, omega);
  if (a <= pi() * w) {
    if (regime) *regime = BoundRegime::stokes;
    Real s = mp::abs(mp::sin(theta / w));
    if (s == 0) return root;  // csc pole exactly on the Stokes angle
    Real csc = 1 / s;
    return csc < root ? csc : root;
  }
  if (regime) *regime = BoundRegime::outer;
  return w * mp::sqrt(2 * pi() * M) / mp::pow(mp::abs(mp::cos(theta)), M) +
         root;
}

// The family representative theta+ anchoring the bound: the smallest Stokes
// angle of rec's family (for source label alpha) strictly greater than
// theta - pi/2.  Every theta short of pi/2 past a Stokes angle keeps that
// angle as its anchor, which is exactly the continued validity window of
// the alternative remainder representation.
Real anchor_theta_plus(const AdjacencyRecord& rec, const Real& theta,
                       long alpha) {
  return stokes_successor(rec, theta - pi() / 2, alpha).theta_plus;
}

// Shared assembly: prefactor * sum_m integral(exponent from big_n) * factor
// with the factor's omega and M supplied by the caller.  big_n is the order
// handed to abs_contour_integral, so the exponent is (big_n + 1)/omega_n.
RemainderBoundResult assemble(const ProblemSpec& spec, int n, long alpha,
                              const PhasedComplex& z, long N, long big_n,
                              const Real& prefactor, unsigned factor_omega,
                              const Real& big_m) {
  const Real& theta = z.phase;
  RemainderBoundResult result;
  std::vector<int> adjacent;
  for (const AdjacencyRecord* r : spec.records_from(n))
    if (std::find(adjacent.begin(), adjacent.end(), r->to_id) == adjacent.end())
      adjacent.push_back(r->to_id);
  for (int m : adjacent) {
    const AdjacencyRecord* rec = &spec.record_for(n, m, alpha);
    BoundReport report;
    report.saddle_id = n;
    report.adjacent_id = rec->to_id;
    report.N = N;
    report.theta = theta;
    Real theta_plus = anchor_theta_plus(*rec, theta, alpha);
    Real theta_b =
        theta - theta_plus + pi() * Real(static_cast<long>(factor_omega));
    report.factor = factor_impl(big_m, factor_omega, theta_b, &report.regime);
    report.integral_part =
        abs_contour_integral(spec, n, rec->to_id, big_n, theta_plus);
    report.prefactor = prefactor;
    report.bound_value = report.prefactor * report.integral_part * report.factor;
    result.total += report.bound_value;
    result.contributions.push_back(std::move(report));
  }
  return result;
}

void fill_neglected(RemainderBoundResult& result, const Complex& coeff,
                    const Real& scale) {
  result.neglected_term = abs(coeff) * scale;
  if (result.neglected_term > 0)
    result.neglected_ratio = result.total / result.neglected_term;
}

}  // namespace

Real hyperterminant_bound_factor(const Real& M, unsigned omega,
                                 const Real& theta) {
  return factor_impl(M, omega, theta, nullptr);
}

RemainderBoundResult remainder_bound(const ProblemSpec& spec, int n,
                                     long alpha, const PhasedComplex& z,
                                     long N) {
  if (N < 0) throw std::invalid_argument("remainder_bound: N must be >= 0");
  unsigned omega = spec.saddle(n).order_omega;
  Real omega_r(static_cast<long>(omega));
  Real big_m = Real(N + 1) / omega_r;
  Real prefactor =
      gamma(big_m) / (2 * pi() * mp::pow(z.modulus, Real(N) / omega_r));
  RemainderBoundResult result =
      assemble(spec, n, alpha, z, N, N, prefactor, omega, big_m);
  Complex t_n = perron_coefficients(spec, n, alpha, N + 1).values.back();
  fill_neglected(result, t_n, mp::pow(z.modulus, -Real(N) / omega_r));
  return result;
}

RemainderBoundResult simple_saddle_bound(const ProblemSpec& spec, int n,
                                         const PhasedComplex& z, long N) {
  if (spec.saddle(n).order_omega != 2)
    throw std::invalid_argument(
        "simple_saddle_bound: saddle must be simple (omega = 2)");
  if (N < 0)
    throw std::invalid_argument("simple_saddle_bound: N must be >= 0");
  Real big_m = Real(N) + Real(1) / 2;
  Real prefactor = gamma(big_m) / (pi() * mp::pow(z.modulus, Real(N)));
  // exponent N + 1/2 = (2N + 1)/omega_n, and the factor collapses to the
  // omega = 1 cases in theta - theta+ + pi
  RemainderBoundResult result =
      assemble(spec, n, 0, z, N, 2 * N, prefactor, 1, big_m);
  Complex bold_t = perron_coefficients(spec, n, 0, 2 * N + 1).values.back() -
                   perron_coefficients(spec, n, 1, 2 * N + 1).values.back();
  fill_neglected(result, bold_t, mp::pow(z.modulus, -Real(N)));
  return result;
}

}  // namespace hyperasym
