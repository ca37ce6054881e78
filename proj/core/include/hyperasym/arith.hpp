#pragma once
// Configurable-precision real/complex arithmetic with explicit multi-sheet
// phase tracking, plus the Gamma function.

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace hyperasym {

using Real = boost::multiprecision::mpfr_float;

// Decimal working precision for a computation.  `digits` is the accuracy
// contract of the public API; `guard_digits` extra digits are carried
// internally.  All operations take the context explicitly; nothing global
// beyond the thread-local mpfr default precision managed by ScopedPrecision.
struct PrecisionContext {
  unsigned digits = 60;
  unsigned guard_digits = 20;

  PrecisionContext() = default;
  PrecisionContext(unsigned d, unsigned g = 20) : digits(d), guard_digits(g) {
    if (digits < 16) throw std::invalid_argument("PrecisionContext: digits must be >= 16");
    if (guard_digits < 10) throw std::invalid_argument("PrecisionContext: guard_digits must be >= 10");
  }
  unsigned working_digits() const { return digits + guard_digits; }
};

// RAII guard that sets the thread-local default decimal precision of Real.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned decimal_digits)
      : saved_(Real::default_precision()) {
    Real::default_precision(decimal_digits);
  }
  explicit ScopedPrecision(const PrecisionContext& ctx)
      : ScopedPrecision(ctx.working_digits()) {}
  ~ScopedPrecision() { Real::default_precision(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

// A quadrature or extrapolation failed to reach the requested accuracy.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Real pi();                 // at current thread precision
Real machine_epsilon();    // 10^(1-current decimal precision)

// boost.multiprecision copies/assignments inherit the operands' precision,
// so values entering an escalated-precision scope must be re-based or the
// whole computation silently stays at the callers' precision.
Real to_current_precision(Real x);

// ---------------------------------------------------------------------------
// Complex over Real.  std::complex is not usable over a multiprecision type,
// so the handful of operations needed here are written out.
struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r) : re(std::move(r)) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r) {}
  Complex(double r) : re(r) {}

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }
  Complex& operator/=(const Complex& o) { *this = *this / o; return *this; }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Real& s, const Complex& b) { return {s * b.re, s * b.im}; }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re * s, a.im * s}; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  friend Complex operator/(const Complex& a, const Real& s) { return {a.re / s, a.im / s}; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

Real abs(const Complex& z);
Real norm(const Complex& z);            // |z|^2
Real arg(const Complex& z);             // atan2, in (-pi, pi]
Complex conj(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);          // principal branch
Complex sqrt(const Complex& z);         // principal branch
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex polar(const Real& modulus, const Real& phase);
Complex pow(const Complex& z, const Real& e);   // principal branch
Complex pow(const Complex& z, int e);
Complex i_unit();

std::string to_string(const Complex& z, unsigned digits);

// ---------------------------------------------------------------------------
// A complex number carried as (modulus, unbounded real phase).  The phase is
// data: it is never reduced modulo 2*pi, so fractional powers across many
// sheets (e.g. phase 11*pi/2) are exact by construction.
struct PhasedComplex {
  Real modulus{0};
  Real phase{0};   // radians, NOT reduced

  PhasedComplex() = default;
  PhasedComplex(Real m, Real p) : modulus(std::move(m)), phase(std::move(p)) {
    if (modulus < 0) throw std::invalid_argument("PhasedComplex: negative modulus");
    if (modulus == 0) phase = 0;  // canonical zero
  }

  Complex cartesian() const { return polar(modulus, phase); }
  bool is_zero() const { return modulus == 0; }

  friend PhasedComplex operator*(const PhasedComplex& a, const PhasedComplex& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return {a.modulus * b.modulus, a.phase + b.phase};
  }
  friend PhasedComplex operator/(const PhasedComplex& a, const PhasedComplex& b) {
    return {a.modulus / b.modulus, a.phase - b.phase};
  }
};

// From a cartesian value, phase taken in (-pi, pi].
PhasedComplex phased_from_cartesian(const Complex& z);

// p^e with result phase exactly e * p.phase; no implicit branch cut.
PhasedComplex phased_pow(const PhasedComplex& p, const Real& e);

// Gamma.  Real arguments use mpfr's gamma; complex arguments use a
// recurrence shift into the right half plane plus a Stirling series sized to
// the current working precision.  Poles at nonpositive integers throw.
Real gamma(const Real& x);
Complex gamma(const Complex& z);
Complex log_gamma(const Complex& z);    // principal log-Gamma (continuous)

}  // namespace hyperasym
