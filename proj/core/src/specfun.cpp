#include "hyperasym/specfun.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <stdexcept>

namespace hyperasym {

namespace mp = boost::multiprecision;

namespace {

bool near_integer(const Real& x, const Real& tol, long* out = nullptr) {
  Real r = mp::round(x);
  if (mp::abs(x - r) < tol) {
    if (out) *out = r.convert_to<long>();
    return true;
  }
  return false;
}

bool is_nonpositive_integer_c(const Complex& z, const Real& tol) {
  long n;
  return mp::abs(z.im) < tol && near_integer(z.re, tol, &n) && n <= 0;
}

// 1/Gamma with poles mapped to 0.
Complex rgamma(const Complex& z) {
  if (is_nonpositive_integer_c(z, machine_epsilon() * 100)) return Complex{};
  return Complex(Real(1)) / gamma(z);
}

Complex pow_principal(const Complex& base, const Complex& expo) {
  return exp(expo * log(base));
}

Complex promote(const Complex& z) {
  return {to_current_precision(z.re), to_current_precision(z.im)};
}

struct SeriesOut {
  Complex sum;
  Real max_mag;
};

// Sum_{k>=0} (a)_k (b)_k / ((c)_k k!) w^k with magnitude tracking.
SeriesOut hyp2f1_series(const Complex& a, const Complex& b, const Complex& c,
                        const Complex& w) {
  Real eps = machine_epsilon();
  Complex term(Real(1)), sum(Real(1));
  Real max_mag(1);
  for (long k = 0; k < 1000000; ++k) {
    Complex ck = c + Complex(Real(k));
    if (is_nonpositive_integer_c(ck, eps)) throw std::domain_error("2F1 series: pole in c");
    term = term * (a + Complex(Real(k))) * (b + Complex(Real(k))) /
           (ck * Complex(Real(k + 1))) * w;
    sum += term;
    Real at = abs(term);
    max_mag = mp::max(max_mag, abs(sum));
    if (at < eps * (abs(sum) + eps) && k > 4) return {sum, max_mag};
  }
  throw std::runtime_error("2F1 series did not converge");
}

// Sum_{k>=0} (a)_k / ((b)_k k!) w^k (Kummer M) with magnitude tracking.
SeriesOut hyp1f1_series(const Complex& a, const Complex& b, const Complex& w) {
  Real eps = machine_epsilon();
  Complex term(Real(1)), sum(Real(1));
  Real max_mag(1);
  for (long k = 0; k < 1000000; ++k) {
    Complex bk = b + Complex(Real(k));
    if (is_nonpositive_integer_c(bk, eps)) throw std::domain_error("1F1 series: pole in b");
    term = term * (a + Complex(Real(k))) / (bk * Complex(Real(k + 1))) * w;
    sum += term;
    Real at = abs(term);
    max_mag = mp::max(max_mag, abs(sum));
    if (at < eps * (abs(sum) + eps) && k > 4) return {sum, max_mag};
  }
  throw std::runtime_error("1F1 series did not converge");
}

struct Eval {
  Complex value;
  Real loss_digits;  // decimal digits lost to cancellation
};

Real loss_of(const Real& max_mag, const Complex& value) {
  Real av = abs(value);
  if (av == 0) return Real(0);
  Real ratio = max_mag / av;
  return ratio > 1 ? Real(mp::log10(ratio)) : Real(0);
}

// ---------------------------------------------------------------------------
// 2F1 transformation machinery

// Transformation index: 0 w=x, 1 w=x/(x-1), 2 w=1-x, 3 w=1/x,
// 4 w=1/(1-x), 5 w=1-1/x.
Complex transform_w(int k, const Complex& x) {
  Complex one(Real(1));
  switch (k) {
    case 0: return x;
    case 1: return x / (x - one);
    case 2: return one - x;
    case 3: return one / x;
    case 4: return one / (one - x);
    default: return one - one / x;
  }
}

Eval f21_transform(int k, const Complex& a, const Complex& b, const Complex& c,
                   const Complex& x) {
  Complex one(Real(1));
  Complex w = transform_w(k, x);
  switch (k) {
    case 0: {
      auto s = hyp2f1_series(a, b, c, w);
      return {s.sum, loss_of(s.max_mag, s.sum)};
    }
    case 1: {
      auto s = hyp2f1_series(a, c - b, c, w);
      Complex pref = pow_principal(one - x, -a);
      return {pref * s.sum, loss_of(s.max_mag, s.sum)};
    }
    case 2: {
      auto s1 = hyp2f1_series(a, b, a + b - c + one, w);
      auto s2 = hyp2f1_series(c - a, c - b, c - a - b + one, w);
      Complex g = gamma(c);
      Complex p1 = g * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
      Complex p2 = g * gamma(a + b - c) * rgamma(a) * rgamma(b) *
                   pow_principal(one - x, c - a - b);
      Complex v = p1 * s1.sum + p2 * s2.sum;
      Real mm = mp::max(abs(p1) * s1.max_mag, abs(p2) * s2.max_mag);
      return {v, loss_of(mm, v)};
    }
    case 3: {
      auto s1 = hyp2f1_series(a, a - c + one, a - b + one, w);
      auto s2 = hyp2f1_series(b, b - c + one, b - a + one, w);
      Complex g = gamma(c);
      Complex p1 = g * gamma(b - a) * rgamma(b) * rgamma(c - a) * pow_principal(-x, -a);
      Complex p2 = g * gamma(a - b) * rgamma(a) * rgamma(c - b) * pow_principal(-x, -b);
      Complex v = p1 * s1.sum + p2 * s2.sum;
      Real mm = mp::max(abs(p1) * s1.max_mag, abs(p2) * s2.max_mag);
      return {v, loss_of(mm, v)};
    }
    case 4: {
      auto s1 = hyp2f1_series(a, c - b, a - b + one, w);
      auto s2 = hyp2f1_series(b, c - a, b - a + one, w);
      Complex g = gamma(c);
      Complex p1 = g * gamma(b - a) * rgamma(b) * rgamma(c - a) *
                   pow_principal(one - x, -a);
      Complex p2 = g * gamma(a - b) * rgamma(a) * rgamma(c - b) *
                   pow_principal(one - x, -b);
      Complex v = p1 * s1.sum + p2 * s2.sum;
      Real mm = mp::max(abs(p1) * s1.max_mag, abs(p2) * s2.max_mag);
      return {v, loss_of(mm, v)};
    }
    default: {
      auto s1 = hyp2f1_series(a, a - c + one, a + b - c + one, w);
      auto s2 = hyp2f1_series(c - a, one - a, c - a - b + one, w);
      Complex g = gamma(c);
      Complex p1 = g * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b) *
                   pow_principal(x, -a);
      Complex p2 = g * gamma(a + b - c) * rgamma(a) * rgamma(b) *
                   pow_principal(x, a - c) * pow_principal(one - x, c - a - b);
      Complex v = p1 * s1.sum + p2 * s2.sum;
      Real mm = mp::max(abs(p1) * s1.max_mag, abs(p2) * s2.max_mag);
      return {v, loss_of(mm, v)};
    }
  }
}

// The parameter whose integer degeneracy breaks transformation k, or none.
bool degeneracy_param(int k, const Complex& a, const Complex& b, const Complex& c,
                      Complex* out) {
  switch (k) {
    case 2:
    case 5: *out = c - a - b; return true;
    case 3:
    case 4: *out = b - a; return true;
    default: return false;
  }
}

Complex f21_dispatch(const Complex& a, const Complex& b, const Complex& c,
                     const Complex& x);

// Evaluate transformation k, resolving integer-degenerate connection
// coefficients by an imaginary epsilon-shift of `a` with +/- averaging.
Complex f21_via(int k, const Complex& a, const Complex& b, const Complex& c,
                const Complex& x, unsigned base_digits) {
  Complex dg;
  bool prone = degeneracy_param(k, a, b, c, &dg);
  bool degenerate = prone && mp::abs(dg.im) < Real("1e-3") &&
                    near_integer(dg.re, Real("1e-3"));
  unsigned extra = 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (degenerate) {
      // F is analytic in a; evaluate at a +/- i*eps and average (O(eps^2)).
      unsigned hi = base_digits + base_digits / 2 + 20 + extra;
      ScopedPrecision sp(hi);
      Complex aa = promote(a), bb = promote(b), cc = promote(c), xx = promote(x);
      Real eps = mp::pow(Real(10), -static_cast<int>(base_digits / 2 + 5));
      Complex shift{Real(0), eps};
      Eval e1 = f21_transform(k, aa + shift, bb, cc, xx);
      Eval e2 = f21_transform(k, aa - shift, bb, cc, xx);
      Complex v = (e1.value + e2.value) / Real(2);
      Real loss = mp::max(e1.loss_digits, e2.loss_digits);
      if (loss < Real(static_cast<long>(base_digits / 2 + 10 + extra)))
        return v;
    } else {
      ScopedPrecision sp(base_digits + extra);
      Complex aa = promote(a), bb = promote(b), cc = promote(c), xx = promote(x);
      Eval e = f21_transform(k, aa, bb, cc, xx);
      if (e.loss_digits < Real(static_cast<long>(extra + 5))) return e.value;
    }
    extra = extra ? 3 * extra : base_digits + 20;
  }
  throw std::runtime_error("2F1: cancellation control failed to converge");
}

Complex f21_dispatch(const Complex& a, const Complex& b, const Complex& c,
                     const Complex& x) {
  Real eps = machine_epsilon();
  if (is_nonpositive_integer_c(c, eps * 100))
    throw std::domain_error("2F1: c is a nonpositive integer");
  if (abs(x) == 0) return Complex(Real(1));

  unsigned base = Real::default_precision();
  // On the cut [1, inf) evaluate the limit from below (Im x -> 0^-), made
  // explicit by a nudge far beneath the working tolerance.
  Complex x_eff = x;
  if (x.im == 0 && x.re > 1)
    x_eff.im = -mp::pow(Real(10), -static_cast<int>(3 * base + 20));
  // Choose the fractional-linear map with the smallest |w|.
  int best = 0;
  Real best_w = abs(transform_w(0, x_eff));
  for (int k = 1; k < 6; ++k) {
    Real aw = abs(transform_w(k, x_eff));
    if (aw < best_w) { best_w = aw; best = k; }
  }
  if (best_w > Real("0.85"))
    throw std::domain_error("2F1: argument outside the supported region");
  return f21_via(best, a, b, c, x_eff, base);
}

}  // namespace

Complex gegenbauer(unsigned r, const Complex& p, const Complex& w) {
  Complex two(Real(2));
  if (r == 0) return Complex(Real(1));
  Complex prev(Real(1));
  Complex cur = two * p * w;
  for (unsigned n = 2; n <= r; ++n) {
    Complex nn(Real(static_cast<long>(n)));
    Complex next = (two * w * (nn + p - Complex(Real(1))) * cur -
                    (nn + two * p - two) * prev) / nn;
    prev = cur;
    cur = next;
  }
  return cur;
}

Complex binomial_general(const Complex& a, unsigned r) {
  Complex acc(Real(1));
  Real fact(1);
  for (unsigned j = 0; j < r; ++j) {
    acc = acc * (a - Complex(Real(static_cast<long>(j))));
    fact *= Real(static_cast<long>(j + 1));
  }
  return acc / fact;
}

Complex kummer_u(const Complex& a, const Complex& b, const PhasedComplex& z) {
  if (z.is_zero()) throw std::domain_error("kummer_u: z must be nonzero");
  if (mp::abs(z.phase) >= pi())
    throw std::domain_error("kummer_u: |phase of z| must be < pi");
  Real eps = machine_epsilon();
  if (is_nonpositive_integer_c(a, eps * 100))
    throw std::domain_error("kummer_u: nonpositive integer a unsupported");

  unsigned base = Real::default_precision();

  // Large |z|: the (divergent) inverse-power expansion truncated at its
  // least term reaches full working accuracy and avoids the exponentially
  // large cancellation of the Kummer connection formula.
  if (z.modulus > Real(static_cast<long>(3 * base))) {
    Complex one(Real(1));
    Complex inv_mz = -(one / Complex(polar(z.modulus, z.phase)));
    Complex term = one, sum = one;
    Real eps = machine_epsilon();
    for (long k = 0; k < 1000000; ++k) {
      Complex next = term * (a + Complex(Real(k))) * (a - b + one + Complex(Real(k))) /
                     Complex(Real(k + 1)) * inv_mz;
      if (abs(next) > abs(term)) {
        if (abs(term) > eps * abs(sum))
          throw std::runtime_error("kummer_u: asymptotic series stalled above tolerance");
        break;
      }
      term = next;
      sum += term;
      if (abs(term) < eps * abs(sum)) break;
    }
    Complex zpow = exp(-a * Complex(mp::log(z.modulus), z.phase));
    return zpow * sum;
  }

  bool degenerate = mp::abs(b.im) < Real("1e-3") && near_integer(b.re, Real("1e-3"));

  unsigned extra = 0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    unsigned hi = degenerate ? base + base / 2 + 20 + extra : base + extra;
    ScopedPrecision sp(hi);
    Complex aa = promote(a);
    Complex bv = promote(b);
    Real zmod = to_current_precision(z.modulus);
    Real zphase = to_current_precision(z.phase);
    Complex zc = polar(zmod, zphase);
    Complex one(Real(1)), two(Real(2));
    int n_eval = degenerate ? 2 : 1;
    Complex vals[2];
    Real loss(0);
    for (int s = 0; s < n_eval; ++s) {
      Complex bb = bv;
      if (degenerate) {
        Real pert = mp::pow(Real(10), -static_cast<int>(base / 2 + 5));
        bb = bv + Complex(Real(0), s == 0 ? pert : -pert);
      }
      // U = G(1-b)/G(a-b+1) M(a,b,z) + G(b-1)/G(a) z^(1-b) M(a-b+1,2-b,z)
      auto s1 = hyp1f1_series(aa, bb, zc);
      auto s2 = hyp1f1_series(aa - bb + one, two - bb, zc);
      Complex p1 = gamma(one - bb) * rgamma(aa - bb + one);
      Complex p2 = gamma(bb - one) * rgamma(aa);
      // z^(1-b) with the phase carried by the PhasedComplex argument.
      Complex zp = exp((one - bb) * Complex(mp::log(zmod), zphase));
      Complex v = p1 * s1.sum + p2 * zp * s2.sum;
      Real mm = mp::max(abs(p1) * s1.max_mag, abs(p2) * abs(zp) * s2.max_mag);
      vals[s] = v;
      loss = mp::max(loss, loss_of(mm, v));
    }
    Complex value = degenerate ? (vals[0] + vals[1]) / Real(2) : vals[0];
    Real budget = degenerate ? Real(static_cast<long>(base / 2 + 10 + extra))
                             : Real(static_cast<long>(extra + 5));
    if (loss < budget) return value;
    extra = extra ? 3 * extra : base + 20;
  }
  throw std::runtime_error("kummer_u: cancellation control failed to converge");
}

Complex gauss_2f1(const HypergeoParams& p) {
  return f21_dispatch(p.a, p.b, p.c, p.z);
}

}  // namespace hyperasym
