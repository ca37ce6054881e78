#include "hyperasym/coeffs.hpp"

#include "hyperasym/series.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace hyperasym {

namespace mp = boost::multiprecision;

namespace {

Real factorial(unsigned n) {
  Real f(1);
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

CoefficientTable perron_coefficients(const ProblemSpec& spec, int n, long alpha,
                                     std::size_t count) {
  if (count < 1) throw std::invalid_argument("perron_coefficients: count must be >= 1");
  const SaddlePoint& s = spec.saddle(n);
  const unsigned omega = s.order_omega;
  const Real om(static_cast<long>(omega));

  Polynomial fs = spec.f.taylor_shift(s.location);
  Polynomial gs = spec.g.taylor_shift(s.location);
  Complex c = fs.coeffs.size() > omega ? fs.coeffs[omega] : Complex{};
  if (abs(c) == 0)
    throw std::invalid_argument("perron_coefficients: leading derivative vanishes");

  // unit series h[j] = coefficient of u^j in (f - f_n)/(c u^omega)
  TruncatedSeries h{std::vector<Complex>(count)};
  h.coefficients[0] = Complex(Real(1));
  for (std::size_t j = 1; j < count; ++j) {
    std::size_t idx = omega + j;
    h.coefficients[j] =
        idx < fs.coeffs.size() ? fs.coeffs[idx] / c : Complex{};
  }

  // scalar base omega!/f^(omega) carried as (modulus, phase) with the
  // principal phase of f^(omega) negated
  Complex f_om = c * factorial(omega);  // = f^(omega)(t^(n))
  PhasedComplex base{factorial(omega) / abs(f_om), -arg(f_om)};

  CoefficientTable out;
  out.saddle_id = n;
  out.alpha = alpha;
  out.route = CoeffRoute::perron;
  out.values.resize(count);
  for (std::size_t r = 0; r < count; ++r) {
    Real rp1_over_om = Real(static_cast<long>(r) + 1) / om;
    TruncatedSeries hp = ps_pow(h, -rp1_over_om);
    Complex taylor_r{};
    for (std::size_t j = 0; j <= r && j < gs.coeffs.size(); ++j)
      taylor_r += gs.coeffs[j] * hp.coefficients[r - j];
    Complex value = phased_pow(base, rp1_over_om).cartesian() * taylor_r *
                    gamma(rp1_over_om);
    value = value * polar(Real(1), 2 * pi() * Real(alpha) * rp1_over_om);
    out.values[r] = value;
  }
  return out;
}

CoefficientTable trapezoidal_coefficients(const ProblemSpec& spec, int n,
                                          long alpha, std::size_t count,
                                          Real rho, unsigned M) {
  if (count < 1)
    throw std::invalid_argument("trapezoidal_coefficients: count must be >= 1");
  if (M <= count)
    throw std::invalid_argument("trapezoidal_coefficients: require M > count");
  const SaddlePoint& s = spec.saddle(n);
  const unsigned omega = s.order_omega;
  const Real om(static_cast<long>(omega));

  Real nearest{0};
  bool have_other = false;
  for (const auto& other : spec.saddles) {
    if (other.id == n) continue;
    Real d = abs(other.location - s.location);
    if (!have_other || d < nearest) {
      nearest = d;
      have_other = true;
    }
  }
  if (rho <= 0) {
    if (!have_other)
      throw std::invalid_argument("trapezoidal_coefficients: rho required when no other saddle exists");
    rho = nearest / 2;
  }
  if (have_other && rho >= nearest)
    throw std::invalid_argument("trapezoidal_coefficients: disc of radius rho contains another saddle");

  const std::size_t samples = 2 * static_cast<std::size_t>(M);
  Complex f_om = s.leading_derivative;
  Real target_phase = -arg(f_om);  // limit of arg Q as rho -> 0
  Real two_pi = 2 * pi();

  std::vector<Complex> gval(samples);
  std::vector<Real> qmod(samples), qphase(samples);
  Real prev_phase = target_phase;
  for (std::size_t m = 0; m < samples; ++m) {
    Real ang = pi() * Real(static_cast<long>(m)) / Real(static_cast<long>(M));
    Complex w = polar(rho, ang);
    Complex t = s.location + w;
    Complex q = pow(w, static_cast<int>(omega)) /
                (spec.f.eval(t) - s.critical_value);
    gval[m] = spec.g.eval(t);
    qmod[m] = abs(q);
    Real ph = arg(q);
    // unwrap: keep each phase within pi of its predecessor (first sample
    // anchored near -arg f^(omega))
    Real shift = mp::round((prev_phase - ph) / two_pi);
    ph += two_pi * shift;
    qphase[m] = ph;
    prev_phase = ph;
  }

  CoefficientTable out;
  out.saddle_id = n;
  out.alpha = alpha;
  out.route = CoeffRoute::trapezoidal;
  out.values.resize(count);
  for (std::size_t r = 0; r < count; ++r) {
    Real rp1_over_om = Real(static_cast<long>(r) + 1) / om;
    Complex sum{};
    Real rho_pow_r = mp::pow(rho, static_cast<int>(r));
    for (std::size_t m = 0; m < samples; ++m) {
      Real ang = pi() * Real(static_cast<long>(m)) / Real(static_cast<long>(M));
      Complex term = gval[m] *
                     polar(mp::pow(qmod[m], rp1_over_om) / rho_pow_r,
                           qphase[m] * rp1_over_om - ang * Real(static_cast<long>(r)));
      sum += term;
    }
    Complex value = sum * gamma(rp1_over_om) /
                    Real(static_cast<long>(samples));
    value = value * polar(Real(1), 2 * pi() * Real(alpha) * rp1_over_om);
    out.values[r] = value;
  }
  return out;
}

CoefficientTable bold_T_coefficients(const CoefficientTable& table0,
                                     const CoefficientTable& table1) {
  if (table0.saddle_id != table1.saddle_id)
    throw std::invalid_argument("bold_T_coefficients: saddle mismatch");
  if (table1.alpha != table0.alpha + 1)
    throw std::invalid_argument("bold_T_coefficients: alphas must differ by exactly 1");
  if (table0.values.size() != table1.values.size())
    throw std::invalid_argument("bold_T_coefficients: length mismatch");
  CoefficientTable out = table0;
  for (std::size_t r = 0; r < out.values.size(); ++r)
    out.values[r] = table0.values[r] - table1.values[r];
  return out;
}

}  // namespace hyperasym
