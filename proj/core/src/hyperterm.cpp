#include "hyperasym/hyperterm.hpp"

#include "hyperasym/specfun.hpp"
#include "quadrature_detail.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <string>

namespace hyperasym {

namespace mp = boost::multiprecision;

namespace {

Real two_pi() { return 2 * pi(); }

// ---------------------------------------------------------------------------
// Memoisation of the expensive special-function calls.  Keys embed the
// working precision, so results computed under one ScopedPrecision are not
// reused under another.

std::string real_key(const Real& x) { return x.str(); }

Complex cached_2f1(const Real& a, const Real& b, const Real& c,
                   const Complex& x) {
  thread_local std::map<std::string, Complex> cache;
  std::ostringstream key;
  key << Real::default_precision() << '|' << real_key(a) << '|' << real_key(b)
      << '|' << real_key(c) << '|' << real_key(x.re) << '|' << real_key(x.im);
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  Complex v = gauss_2f1({Complex(a), Complex(b), Complex(c), x});
  cache.emplace(key.str(), v);
  return v;
}

Complex cached_u(long a, const Real& b, const PhasedComplex& zs) {
  thread_local std::map<std::string, Complex> cache;
  std::ostringstream key;
  key << Real::default_precision() << '|' << a << '|' << real_key(b) << '|'
      << real_key(zs.modulus) << '|' << real_key(zs.phase);
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  Complex v = kummer_u(Complex(Real(a)), Complex(b), zs);
  cache.emplace(key.str(), v);
  return v;
}

// ---------------------------------------------------------------------------
// A-coefficients of the simple-hyperterminant series.

void check_theorem_hypotheses(const std::vector<ReducedColumn>& cols) {
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].sigma.is_zero())
      throw std::domain_error("a_coefficient: sigma must be nonzero");
    Real bound = j == 1 ? Real(2) : Real(1);
    if (!(cols[j].M > bound))
      throw std::domain_error(
          "a_coefficient: theorem hypothesis violated (Re(M_1) > 2, "
          "Re(M_j) > 1 otherwise)");
  }
  for (std::size_t j = 1; j < cols.size(); ++j) {
    Real d = cols[j].sigma.phase - cols[j - 1].sigma.phase;
    if (!(d > 0 && d < two_pi()))
      throw std::domain_error(
          "a_coefficient: sigma phase difference outside (0, 2 pi); "
          "normalize via choose_gammas first");
  }
}

// A^(2)(n; M0, s0, M1, s1), explicit 2F1 formula.
Complex a2_value(const Real& M0, const PhasedComplex& s0, const Real& M1,
                 const PhasedComplex& s1, unsigned n) {
  PhasedComplex ratio = s1 / s0;
  Real nn(static_cast<long>(n));
  Complex rat_pow =
      phased_pow({ratio.modulus, ratio.phase - pi()}, nn - M1 + 1).cartesian();
  Complex s0_pow = phased_pow(s0, 2 - M0 - M1).cartesian();
  Real nfact(1);
  for (unsigned j = 2; j <= n; ++j) nfact *= j;
  Real g = gamma(M0 + nn) * gamma(M1) * nfact * gamma(M0 + M1 - 1) /
           gamma(M0 + M1 + nn);
  Complex f = cached_2f1(M0 + nn, nn + 1, M0 + M1 + nn,
                         Complex(Real(1)) + ratio.cartesian());
  return -(polar(Real(1), M0 * pi()) * s0_pow * rat_pow * g * f);
}

struct ATable {
  std::vector<Complex> a;   // A(n) for n < terms
  std::vector<Real> trunc;  // absolute inner-truncation estimate per n
};

// Table of A^(k+1)(n), n < terms, in ascending n (deterministic order).
ATable build_a_table(const std::vector<ReducedColumn>& cols, unsigned terms) {
  check_theorem_hypotheses(cols);
  ATable t;
  t.a.resize(terms, Complex{});
  t.trunc.resize(terms, Real(0));
  const Real& M0 = cols[0].M;
  const PhasedComplex& s0 = cols[0].sigma;

  if (cols.size() == 1) {
    // A^(1)(n) = delta_{n,0} e^{M0 pi i} sigma0^{1-M0} Gamma(M0)
    t.a[0] = polar(Real(1), M0 * pi()) *
             phased_pow(s0, 1 - M0).cartesian() * gamma(M0);
    return t;
  }

  const Real& M1 = cols[1].M;
  const PhasedComplex& s1 = cols[1].sigma;

  if (cols.size() == 2) {
    for (unsigned n = 0; n < terms; ++n) t.a[n] = a2_value(M0, s0, M1, s1, n);
    return t;
  }

  // Three columns: recursive m-sum over A^(2)(m; M1, s1, M2, s2).
  std::vector<Complex> inner(terms);
  for (unsigned m = 0; m < terms; ++m)
    inner[m] = a2_value(M1, s1, cols[2].M, cols[2].sigma, m);

  PhasedComplex ratio = s1 / s0;
  Complex x = Complex(Real(1)) + ratio.cartesian();
  Complex head = polar(Real(1), M0 * pi()) *
                 phased_pow(s0, 1 - M0).cartesian() * gamma(M0 + M1 - 1);
  for (unsigned n = 0; n < terms; ++n) {
    Real nn(static_cast<long>(n));
    Complex pref = head *
                   phased_pow({ratio.modulus, ratio.phase - pi()}, nn)
                       .cartesian() *
                   gamma(M0 + nn);
    Complex sum{};
    // (n+m)!/m!, updated incrementally over m
    Real rising = gamma(nn + 1);
    Real last_mag(0);
    for (unsigned m = 0; m < terms; ++m) {
      Real mm(static_cast<long>(m));
      Complex f = cached_2f1(M0 + nn, nn + mm + 1, M0 + M1 + nn + mm, x);
      Complex term = rising / gamma(M0 + M1 + nn + mm) * inner[m] * f;
      sum += term;
      last_mag = abs(term);
      rising *= (nn + mm + 1) / (mm + 1);
    }
    t.a[n] = pref * sum;
    t.trunc[n] = abs(pref) * last_mag;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Simple hyperterminant F^(k+1) = sum_n A(n) U(n+1, 2-M0, z sigma0).

struct SimpleF {
  Complex value;
  Real abs_tail;  // absolute truncation estimate
};

SimpleF simple_hyperterminant(const PhasedComplex& z,
                              const std::vector<ReducedColumn>& cols,
                              unsigned terms) {
  PhasedComplex zs{z.modulus * cols[0].sigma.modulus,
                   z.phase + cols[0].sigma.phase};
  Real b = 2 - cols[0].M;
  if (cols.size() == 1) {
    ATable t = build_a_table(cols, 1);
    return {t.a[0] * cached_u(1, b, zs), Real(0)};
  }
  ATable t = build_a_table(cols, terms);
  Complex sum{};
  Real tail(0), last(0);
  for (unsigned n = 0; n < terms; ++n) {
    Complex u = cached_u(static_cast<long>(n) + 1, b, zs);
    Complex term = t.a[n] * u;
    sum += term;
    last = abs(term);
    tail += t.trunc[n] * abs(u);
  }
  return {sum, tail + last};
}

// ---------------------------------------------------------------------------
// Appendix-style reduction of **F**^(k+1) to simple hyperterminants.

HyperterminantResult evaluate_reduction(const PhasedComplex& z,
                                        const HyperterminantArgs& args,
                                        const GammaSelection& sel,
                                        unsigned terms) {
  const std::size_t k1 = args.columns.size();  // k + 1
  const std::size_t k = k1 - 1;
  const std::vector<long>& g = sel.gammas;

  std::vector<Real> M(k1), invw(k1);
  for (std::size_t j = 0; j < k1; ++j) {
    M[j] = args.columns[j].M;
    invw[j] = Real(1) / Real(static_cast<long>(args.columns[j].omega));
  }

  Complex total{};
  Real abs_tail(0);
  std::vector<unsigned> l(k1, 0);  // lexicographic odometer l_0 .. l_k
  for (;;) {
    std::vector<Real> lw(k1);
    for (std::size_t j = 0; j < k1; ++j)
      lw[j] = Real(static_cast<long>(l[j])) * invw[j];

    // reduced columns
    std::vector<ReducedColumn> cols(k1);
    for (std::size_t j = 0; j < k1; ++j) {
      Real Mj = M[j] + lw[j];
      if (j < k) Mj += 1 - (Real(static_cast<long>(l[j + 1])) + 1) * invw[j + 1];
      Real gshift = Real(g[j]);
      if (j > 0) gshift += Real(g[j - 1]);
      cols[j] = {Mj, PhasedComplex{args.columns[j].sigma.modulus,
                                   args.columns[j].sigma.phase +
                                       two_pi() * gshift}};
    }

    // phase prefactor of this l-tuple
    Real ph = Real(g[k]) * (M[k] + lw[k]);
    if (k >= 1)
      ph += Real(g[k - 1]) * (M[k - 1] + M[k] + lw[k - 1] - invw[k]);
    for (std::size_t j = 0; j + 2 <= k; ++j)
      ph += Real(g[j]) * (M[j] + M[j + 1] + lw[j] - invw[j + 1] -
                          (Real(static_cast<long>(l[j + 2])) + 1) * invw[j + 2]);
    Complex zfac =
        phased_pow(z, 1 - (Real(static_cast<long>(l[0])) + 1) * invw[0])
            .cartesian() *
        polar(Real(1), two_pi() * ph);

    SimpleF f = simple_hyperterminant(z, cols, terms);
    total += zfac * f.value;
    abs_tail += abs(zfac) * f.abs_tail;

    // advance odometer (last index fastest keeps l lexicographic)
    std::size_t j = k1;
    while (j > 0) {
      --j;
      if (++l[j] < args.columns[j].omega) break;
      l[j] = 0;
      if (j == 0) { j = k1; break; }
    }
    if (j == k1) break;
  }
  Real denom = abs(total);
  if (denom == 0) denom = Real(1);
  return {total, abs_tail / denom};
}

Real default_target() { return machine_epsilon() * mp::pow(Real(10), 10); }

bool phases_collinear(const HyperterminantArgs& args, const Real& tol) {
  for (std::size_t j = 1; j < args.columns.size(); ++j) {
    Real d = (args.columns[j].sigma.phase - args.columns[j - 1].sigma.phase) /
             two_pi();
    if (mp::abs(d - mp::round(d)) < tol) return true;
  }
  return false;
}

// The integration oracle lives in quadrature_detail.hpp.
using detail::de_integrate;

template <typename F>
Complex integrate_split(const F& f, const Real& split, const Real& upper,
                        const Real& tol) {
  if (split > 0 && split < upper)
    return de_integrate(f, Real(0), split, tol) +
           de_integrate(f, split, upper, tol);
  return de_integrate(f, Real(0), upper, tol);
}

}  // namespace

void validate_args(const HyperterminantArgs& args) {
  if (args.columns.size() > 3)
    throw std::invalid_argument("HyperterminantArgs: at most three columns");
  for (const auto& c : args.columns) {
    if (c.omega < 1)
      throw std::invalid_argument("HyperterminantArgs: omega must be positive");
    if (c.sigma.is_zero())
      throw std::invalid_argument("HyperterminantArgs: sigma must be nonzero");
    if (!(c.M > Real(1) / Real(static_cast<long>(c.omega))))
      throw std::invalid_argument("HyperterminantArgs: require M > 1/omega");
  }
}

GammaSelection choose_gammas(const PhasedComplex& z,
                             const HyperterminantArgs& args) {
  if (args.columns.empty())
    throw std::invalid_argument("choose_gammas: no columns");
  Real tol = mp::pow(Real(10), -static_cast<long>(Real::default_precision() / 3));
  GammaSelection sel;
  Real v0 = (z.phase + args.columns[0].sigma.phase) / two_pi();
  Real g0 = -mp::round(v0);
  if (!(mp::abs(v0 + g0) < Real(1) / 2))
    throw std::domain_error("choose_gammas: no gamma_0 window (boundary case)");
  sel.gammas.push_back(g0.convert_to<long>());
  for (std::size_t j = 1; j < args.columns.size(); ++j) {
    Real dj = (args.columns[j].sigma.phase -
               args.columns[j - 1].sigma.phase) / two_pi();
    if (mp::abs(dj - mp::round(dj)) < tol)
      throw CollinearPhaseError(
          "choose_gammas: successive sigma phases collinear");
    Real gj = -mp::floor(dj);
    sel.gammas.push_back(gj.convert_to<long>());
  }
  return sel;
}

Complex a_coefficient(const std::vector<ReducedColumn>& cols, unsigned n,
                      unsigned series_terms, Real* truncation) {
  if (cols.empty() || cols.size() > 3)
    throw std::invalid_argument("a_coefficient: one to three columns required");
  if (series_terms == 0) series_terms = 40;
  unsigned need = cols.size() == 3 ? std::max(series_terms, n + 1) : n + 1;
  ATable t = build_a_table(cols, need);
  if (truncation) *truncation = t.trunc[n];
  return t.a[n];
}

HyperterminantResult hyperterminant(const PhasedComplex& z,
                                    const HyperterminantArgs& args,
                                    unsigned series_terms,
                                    Real target_accuracy) {
  if (args.columns.empty()) return {Complex(Real(1)), Real(0)};
  validate_args(args);
  Real w0(static_cast<long>(args.columns[0].omega));
  if (!(mp::abs(z.phase + args.columns[0].sigma.phase) < pi() * w0))
    throw std::domain_error(
        "hyperterminant: convergence condition |arg(sigma_0 z)| < pi omega_0 "
        "violated");
  GammaSelection sel = choose_gammas(z, args);
  if (target_accuracy <= 0) target_accuracy = default_target();
  if (series_terms != 0) return evaluate_reduction(z, args, sel, series_terms);
  HyperterminantResult r = evaluate_reduction(z, args, sel, 40);
  if (args.columns.size() > 1 && r.truncation_estimate > target_accuracy)
    r = evaluate_reduction(z, args, sel, 80);
  return r;
}

HyperterminantResult hyperterminant_collinear(const PhasedComplex& z,
                                              const HyperterminantArgs& args,
                                              const std::vector<Real>& epsilons,
                                              unsigned series_terms,
                                              Real tolerance) {
  if (args.columns.empty()) return {Complex(Real(1)), Real(0)};
  validate_args(args);
  Real tol = mp::pow(Real(10), -static_cast<long>(Real::default_precision() / 3));
  if (!phases_collinear(args, tol))
    return hyperterminant(z, args, series_terms);
  if (epsilons.size() < 2)
    throw std::invalid_argument(
        "hyperterminant_collinear: need at least two epsilon values");
  for (std::size_t i = 1; i < epsilons.size(); ++i)
    if (!(epsilons[i] < epsilons[i - 1] && epsilons[i] > 0))
      throw std::invalid_argument(
          "hyperterminant_collinear: epsilons must be positive and descending");
  // The tableau cannot extrapolate below the smooth part of the series
  // truncation noise; a quarter of the working precision is attainable.
  if (tolerance <= 0)
    tolerance = mp::pow(Real(10),
                        -static_cast<long>(Real::default_precision() / 4));

  const std::size_t k = args.columns.size() - 1;
  std::vector<Complex> tab(epsilons.size());
  Real series_est(0);
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    HyperterminantArgs shifted = args;
    for (std::size_t j = 0; j < shifted.columns.size(); ++j)
      shifted.columns[j].sigma.phase -=
          Real(static_cast<long>(k - j)) * epsilons[i];
    HyperterminantResult r = hyperterminant(z, shifted, series_terms);
    tab[i] = r.value;
    if (r.truncation_estimate > series_est) series_est = r.truncation_estimate;
  }
  // Neville extrapolation of the tableau to eps = 0
  Real err(0);
  Complex prev_diag = tab[0];
  for (std::size_t j = 1; j < tab.size(); ++j) {
    for (std::size_t i = tab.size(); i-- > j;) {
      tab[i] = (epsilons[i - j] * tab[i] - epsilons[i] * tab[i - 1]) /
               Complex(epsilons[i - j] - epsilons[i]);
    }
    err = abs(tab.back() - prev_diag);
    prev_diag = tab.back();
  }
  Real rel = err / (abs(tab.back()) + machine_epsilon());
  if (rel > tolerance)
    throw AccuracyError(
        "hyperterminant_collinear: extrapolation error estimate above "
        "tolerance");
  Real est = rel > series_est ? rel : series_est;
  return {tab.back(), est};
}

Complex hyperterminant_quadrature(const PhasedComplex& z,
                                  const HyperterminantArgs& args,
                                  unsigned target_digits) {
  if (args.columns.empty()) return Complex(Real(1));
  validate_args(args);
  if (args.columns.size() > 2)
    throw std::invalid_argument(
        "hyperterminant_quadrature: depth at most 2 (k <= 1)");
  Real w0(static_cast<long>(args.columns[0].omega));
  if (!(mp::abs(z.phase + args.columns[0].sigma.phase) < pi() * w0))
    throw std::domain_error(
        "hyperterminant_quadrature: convergence condition violated");
  unsigned prec = Real::default_precision();
  if (target_digits == 0) target_digits = prec / 2;
  Real tol = mp::pow(Real(10), -static_cast<long>(target_digits) - 2);
  Real ln10 = mp::log(Real(10));
  Real pole_floor = mp::pow(Real(10), -static_cast<long>(prec));

  const auto& c0 = args.columns[0];
  Real eta0 = pi() - c0.sigma.phase;
  Real iw0 = Real(1) / w0;
  Complex zr = phased_pow(z, iw0).cartesian();
  Complex rot0 = polar(Real(1), eta0);
  Real xmax0 = ln10 * Real(static_cast<long>(prec) + 10) / c0.sigma.modulus;

  auto outer_core = [&](const Real& x) {
    Complex t0p = polar(mp::pow(x, c0.M - 1), eta0 * (c0.M - 1));
    Complex t0r = polar(mp::pow(x, iw0), eta0 * iw0);
    Complex den = zr - t0r;
    if (abs(den) < pole_floor * (abs(zr) + abs(t0r)))
      throw std::runtime_error("hyperterminant_quadrature: pole encounter");
    return mp::exp(-c0.sigma.modulus * x) * t0p / den * rot0;
  };

  if (args.columns.size() == 1)
    return integrate_split(outer_core, z.modulus, xmax0, tol);

  const auto& c1 = args.columns[1];
  Real w1(static_cast<long>(c1.omega));
  Real iw1 = Real(1) / w1;
  Real eta1 = pi() - c1.sigma.phase;
  Complex rot1 = polar(Real(1), eta1);
  Real xmax1 = ln10 * Real(static_cast<long>(prec) + 10) / c1.sigma.modulus;
  Real tol_in = tol / 4;

  auto f = [&](const Real& x) {
    Complex t0r = polar(mp::pow(x, iw1), eta0 * iw1);  // t_0^(1/omega_1)
    auto inner = [&](const Real& y) {
      Complex t1p = polar(mp::pow(y, c1.M - 1), eta1 * (c1.M - 1));
      Complex t1r = polar(mp::pow(y, iw1), eta1 * iw1);
      Complex den = t0r - t1r;
      if (abs(den) < pole_floor * (abs(t0r) + abs(t1r)))
        throw std::runtime_error("hyperterminant_quadrature: pole encounter");
      return mp::exp(-c1.sigma.modulus * y) * t1p / den * rot1;
    };
    return outer_core(x) * integrate_split(inner, x, xmax1, tol_in);
  };
  return integrate_split(f, z.modulus, xmax0, tol);
}

}  // namespace hyperasym
