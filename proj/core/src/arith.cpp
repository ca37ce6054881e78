#include "hyperasym/arith.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <mutex>
#include <sstream>
#include <vector>

namespace hyperasym {

namespace mp = boost::multiprecision;

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real machine_epsilon() {
  return mp::pow(Real(10), 1 - static_cast<int>(Real::default_precision()));
}

Real to_current_precision(Real x) {
  x.precision(Real::default_precision());
  return x;
}

Real abs(const Complex& z) { return mp::sqrt(z.re * z.re + z.im * z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real arg(const Complex& z) {
  if (z.re == 0 && z.im == 0) return Real(0);
  return mp::atan2(z.im, z.re);
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Complex exp(const Complex& z) {
  Real m = mp::exp(z.re);
  return {m * mp::cos(z.im), m * mp::sin(z.im)};
}

Complex log(const Complex& z) {
  if (z.re == 0 && z.im == 0) throw std::domain_error("log of zero");
  return {mp::log(abs(z)), arg(z)};
}

Complex sqrt(const Complex& z) {
  if (z.re == 0 && z.im == 0) return {};
  Real m = mp::sqrt(abs(z));
  Real half_arg = arg(z) / 2;
  return polar(m, half_arg);
}

Complex sin(const Complex& z) {
  return {mp::sin(z.re) * mp::cosh(z.im), mp::cos(z.re) * mp::sinh(z.im)};
}

Complex cos(const Complex& z) {
  return {mp::cos(z.re) * mp::cosh(z.im), -mp::sin(z.re) * mp::sinh(z.im)};
}

Complex polar(const Real& modulus, const Real& phase) {
  return {modulus * mp::cos(phase), modulus * mp::sin(phase)};
}

Complex pow(const Complex& z, const Real& e) {
  if (z.re == 0 && z.im == 0) {
    if (e > 0) return {};
    throw std::domain_error("pow: zero base with nonpositive exponent");
  }
  return exp(e * log(z));
}

Complex pow(const Complex& z, int e) {
  if (e < 0) return Complex(Real(1)) / pow(z, -e);
  Complex acc(Real(1)), base = z;
  for (unsigned n = static_cast<unsigned>(e); n; n >>= 1) {
    if (n & 1u) acc = acc * base;
    if (n > 1) base = base * base;
  }
  return acc;
}

Complex i_unit() { return {Real(0), Real(1)}; }

std::string to_string(const Complex& z, unsigned digits) {
  std::ostringstream os;
  os << z.re.str(digits, std::ios_base::scientific);
  std::string im = z.im.str(digits, std::ios_base::scientific);
  if (!im.empty() && im[0] != '-') os << '+';
  os << im << 'i';
  return os.str();
}

PhasedComplex phased_from_cartesian(const Complex& z) {
  return {abs(z), arg(z)};
}

PhasedComplex phased_pow(const PhasedComplex& p, const Real& e) {
  if (p.is_zero()) {
    if (e > 0) return {};
    throw std::domain_error("phased_pow: zero base with nonpositive exponent");
  }
  return {mp::pow(p.modulus, e), e * p.phase};
}

// ---------------------------------------------------------------------------
// Gamma

namespace {

bool is_nonpositive_integer(const Real& x) {
  return x <= 0 && mp::floor(x) == x;
}

// Tangent numbers T_1..T_n (exact integers), extended on demand.  They are
// precision-independent, so a single shared cache is safe.
const mp::mpz_int& tangent_number(std::size_t n) {
  static std::mutex mu;
  static std::vector<mp::mpz_int> cache;  // cache[k-1] = T_k
  std::lock_guard<std::mutex> lock(mu);
  if (cache.size() < n) {
    std::size_t m = std::max<std::size_t>(n + 16, cache.size() * 2);
    std::vector<mp::mpz_int> t(m + 1);
    t[1] = 1;
    for (std::size_t k = 2; k <= m; ++k) t[k] = t[k - 1] * static_cast<long>(k - 1);
    for (std::size_t k = 2; k <= m; ++k)
      for (std::size_t j = k; j <= m; ++j)
        t[j] = t[j - 1] * static_cast<long>(j - k) + t[j] * static_cast<long>(j - k + 2);
    cache.assign(t.begin() + 1, t.end());
  }
  return cache[n - 1];
}

// B_{2n} at current precision via the exact tangent numbers.
Real bernoulli_2n(std::size_t n) {
  if (n == 0) return Real(1);
  Real four_n = mp::pow(Real(4), static_cast<int>(n));
  Real b = Real(tangent_number(n)) * Real(2 * static_cast<long>(n)) /
           (four_n * (four_n - 1));
  if (n % 2 == 0) b = -b;
  return b;
}

// log Gamma by Stirling's series; requires Re(w) large enough for the
// current precision (caller shifts first).
Complex stirling_log_gamma(const Complex& w) {
  Real eps = machine_epsilon();
  Complex lw = log(w);
  Complex result = (w - Complex(Real(0.5))) * lw - w +
                   Complex(mp::log(2 * pi()) / 2);
  Complex w2 = w * w;
  Complex inv = Complex(Real(1)) / w;
  Real aw = abs(w);
  for (std::size_t k = 1; k < 4096; ++k) {
    Real b = bernoulli_2n(k);
    Complex term = Complex(b / Real(2 * static_cast<long>(k) * (2 * static_cast<long>(k) - 1))) * inv;
    result += term;
    if (abs(term) < eps * aw) break;
    inv = inv / w2;
  }
  return result;
}

}  // namespace

Real gamma(const Real& x) {
  if (is_nonpositive_integer(x))
    throw std::domain_error("gamma: pole at nonpositive integer");
  return mp::tgamma(x);
}

Complex log_gamma(const Complex& z) {
  if (z.im == 0 && is_nonpositive_integer(z.re))
    throw std::domain_error("gamma: pole at nonpositive integer");
  if (z.re >= Real(0.5)) {
    // Shift until Stirling converges at the working precision.
    Real threshold = Real(0.4) * Real(static_cast<long>(Real::default_precision())) + 8;
    Complex w = z;
    Complex log_shift{};
    while (w.re < threshold) {
      log_shift += log(w);
      w += Complex(Real(1));
    }
    return stirling_log_gamma(w) - log_shift;
  }
  // Reflection; this loses the continuous branch but callers in the left
  // half-plane only need Gamma itself.
  return log(gamma(z));
}

Complex gamma(const Complex& z) {
  if (z.im == 0 && is_nonpositive_integer(z.re))
    throw std::domain_error("gamma: pole at nonpositive integer");
  if (z.im == 0 && z.re > 0) return Complex(mp::tgamma(z.re));
  if (z.re >= Real(0.5)) return exp(log_gamma(z));
  // Reflection formula into the right half-plane.
  Complex one_minus = Complex(Real(1)) - z;
  Complex s = sin(Complex(pi()) * z);
  return Complex(pi()) / (s * gamma(one_minus));
}

}  // namespace hyperasym
