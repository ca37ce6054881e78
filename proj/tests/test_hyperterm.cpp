#include "doctest.h"
#include "hyperasym/hyperterm.hpp"
#include "hyperasym/specfun.hpp"

#include <random>

using namespace hyperasym;
namespace mp = boost::multiprecision;

namespace {

Real tol_digits(int d) { return mp::pow(Real(10), -d); }

Real rel_diff(const Complex& a, const Complex& b) {
  return abs(a - b) / abs(b);
}

HyperterminantArgs one_col(const Real& M, unsigned omega, const Real& smod,
                           const Real& sphase) {
  return {{{M, omega, PhasedComplex{smod, sphase}}}};
}

}  // namespace

TEST_CASE("level-0 hyperterminant is one") {
  ScopedPrecision sp(50);
  HyperterminantResult r = hyperterminant(PhasedComplex{Real(2), Real(1)}, {});
  CHECK(r.value == Complex(Real(1)));
  CHECK(r.truncation_estimate == 0);
}

TEST_CASE("gamma window selection") {
  ScopedPrecision sp(50);
  PhasedComplex z{Real(1), -pi() / 4};

  // z phase -pi/4, sigma_0 phase pi/2 -> gamma_0 = 0
  GammaSelection a = choose_gammas(z, one_col(Real(3), 1, Real(1), pi() / 2));
  CHECK(a.gammas == std::vector<long>{0});

  // sigma_0 phase pi/2, sigma_1 phase -9 pi/2 -> gamma_1 = 3
  HyperterminantArgs two{{{Real(3), 1, PhasedComplex{Real(1), pi() / 2}},
                          {Real(3), 1, PhasedComplex{Real(1), -9 * pi() / 2}}}};
  GammaSelection b = choose_gammas(z, two);
  CHECK(b.gammas == std::vector<long>{0, 3});

  // equal successive phases -> collinear error
  HyperterminantArgs col{{{Real(3), 1, PhasedComplex{Real(1), pi()}},
                          {Real(3), 1, PhasedComplex{Real(1), pi()}}}};
  CHECK_THROWS_AS(choose_gammas(z, col), CollinearPhaseError);
}

TEST_CASE("first-level A coefficients") {
  ScopedPrecision sp(50);
  std::vector<ReducedColumn> c{{Real(3), PhasedComplex{Real(1), pi()}}};
  // Kronecker delta at n = 0
  CHECK(abs(a_coefficient(c, 1, 40)) == 0);
  // A^(1)(0; 3, sigma = 1 phase pi) = e^{3 pi i} sigma^{-2} Gamma(3) = -2
  CHECK(abs(a_coefficient(c, 0, 40) - Complex(Real(-2))) < tol_digits(45));
}

TEST_CASE("simple F(1) closed reduction against quadrature") {
  ScopedPrecision sp(50);
  PhasedComplex z{Real(5), Real(0)};
  HyperterminantArgs args = one_col(Real(2), 1, Real(1), Real(0));
  // F^(1)(z; 2, 1, 1) = e^{2 pi i} Gamma(2) U(1, 0, 5)
  Complex expected = kummer_u(Complex(Real(1)), Complex{}, z);
  HyperterminantResult series = hyperterminant(z, args);
  Complex quad = hyperterminant_quadrature(z, args);
  CHECK(rel_diff(series.value, expected) < tol_digits(40));
  CHECK(rel_diff(quad, expected) < tol_digits(20));
}

TEST_CASE("generalized F(1) with omega = 2 matches quadrature") {
  PrecisionContext ctx(30);
  ScopedPrecision sp(ctx);
  PhasedComplex z{Real(1), -pi() / 4};
  HyperterminantArgs args = one_col(Real(7), 2, Real(27) / 4, pi() / 2);
  HyperterminantResult series = hyperterminant(z, args);
  Complex quad = hyperterminant_quadrature(z, args);
  CHECK(rel_diff(series.value, quad) < tol_digits(20));
}

TEST_CASE("nested generalized F(2) matches quadrature") {
  PrecisionContext ctx(24);
  ScopedPrecision sp(ctx);
  PhasedComplex z{Real("0.9"), -pi() / 4};
  HyperterminantArgs args{
      {{Real("5.5"), 2, PhasedComplex{Real(27) / 4, pi() / 2}},
       {Real("4.25"), 3, PhasedComplex{Real(27) / 4, -9 * pi() / 2}}}};
  HyperterminantResult series = hyperterminant(z, args);
  Complex quad = hyperterminant_quadrature(z, args, 14);
  CHECK(rel_diff(series.value, quad) < tol_digits(10));
  CHECK(series.truncation_estimate < tol_digits(10));
}

TEST_CASE("series agrees with quadrature on randomized argument sets") {
  PrecisionContext ctx(24);
  ScopedPrecision sp(ctx);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto draw = [&](double lo, double hi) {
    return Real(lo + (hi - lo) * uni(rng));
  };
  Real tol = tol_digits(24 / 2 - 2);

  int checked = 0;
  for (int set = 0; set < 30; ++set) {
    bool nested = set >= 22;
    unsigned w0 = 1 + static_cast<unsigned>(3 * uni(rng)) % 3;
    Real M0 = draw(1.2, 5.0);
    Real smod0 = draw(0.8, 5.0);
    Real sph0 = draw(-0.8, 0.8) * pi();
    Real zmod = draw(0.6, 2.5);
    Real zph = draw(-0.75, 0.75) * pi() - sph0;
    PhasedComplex z{zmod, zph};
    HyperterminantArgs args = one_col(M0, w0, smod0, sph0);
    if (nested) {
      unsigned w1 = 1 + static_cast<unsigned>(3 * uni(rng)) % 3;
      for (int attempt = 0;; ++attempt) {
        REQUIRE(attempt < 100);
        Real smod1 = draw(0.8, 5.0);
        Real d = draw(0.4, 2 * 3.141592 - 0.4);
        // keep 1 + sigma_1/sigma_0 away from the e^{+-i pi/3} corners where
        // no 2F1 fractional-linear map contracts
        Complex x = Complex(Real(1)) + polar(smod1 / smod0, d);
        Complex bad1 = polar(Real(1), pi() / 3), bad2 = polar(Real(1), -pi() / 3);
        if (abs(x - bad1) < Real("0.35") || abs(x - bad2) < Real("0.35"))
          continue;
        args.columns.push_back(
            {draw(2.3, 5.0), w1, PhasedComplex{smod1, sph0 + d}});
        break;
      }
    }
    HyperterminantResult series = hyperterminant(z, args);
    Complex quad = hyperterminant_quadrature(z, args, 14);
    CHECK(rel_diff(series.value, quad) < tol);
    ++checked;
  }
  CHECK(checked == 30);
}

TEST_CASE("increasing series terms moves results less than the estimate") {
  PrecisionContext ctx(40);
  ScopedPrecision sp(ctx);
  PhasedComplex z{Real("0.9"), -pi() / 4};
  HyperterminantArgs args{
      {{Real("5.5"), 2, PhasedComplex{Real(27) / 4, pi() / 2}},
       {Real("4.25"), 3, PhasedComplex{Real(27) / 4, -9 * pi() / 2}}}};
  HyperterminantResult f40 = hyperterminant(z, args, 40);
  HyperterminantResult f60 = hyperterminant(z, args, 60);
  Real moved = rel_diff(f40.value, f60.value);
  CHECK(moved <= 50 * f40.truncation_estimate + tol_digits(50));
}

TEST_CASE("three-column hyperterminant is stable under term escalation") {
  PrecisionContext ctx(24);
  ScopedPrecision sp(ctx);
  PhasedComplex z{Real("1.1"), pi() / 8};
  HyperterminantArgs args{
      {{Real("4.5"), 1, PhasedComplex{Real(3), pi() / 2}},
       {Real("3.75"), 2, PhasedComplex{Real(2), Real("-1.2") * pi()}},
       {Real("2.5"), 1, PhasedComplex{Real(4), Real("-3.4") * pi()}}}};
  HyperterminantResult f20 = hyperterminant(z, args, 20);
  HyperterminantResult f30 = hyperterminant(z, args, 30);
  CHECK(rel_diff(f20.value, f30.value) <
        50 * f20.truncation_estimate + tol_digits(18));
}

TEST_CASE("hypothesis and precondition violations raise errors") {
  ScopedPrecision sp(50);
  PhasedComplex z{Real(1), Real(0)};
  // M below 1/omega rejected outright
  CHECK_THROWS_AS(hyperterminant(z, one_col(Real("0.9"), 1, Real(1), Real(0))),
                  std::invalid_argument);
  // theorem hypothesis Re(M_1) > 2 violated by a legal argument pack
  HyperterminantArgs weak{{{Real(3), 1, PhasedComplex{Real(1), pi() / 2}},
                           {Real("1.5"), 1, PhasedComplex{Real(1), -pi() / 2}}}};
  CHECK_THROWS_AS(hyperterminant(z, weak), std::domain_error);
  // convergence condition |arg(sigma_0 z)| < pi omega_0
  PhasedComplex zfar{Real(1), Real("0.9") * pi()};
  CHECK_THROWS_AS(
      hyperterminant(zfar, one_col(Real(3), 1, Real(1), Real("0.9") * pi())),
      std::domain_error);
  CHECK_THROWS_AS(
      hyperterminant_quadrature(zfar,
                                one_col(Real(3), 1, Real(1), Real("0.9") * pi())),
      std::domain_error);
}

TEST_CASE("collinear handling") {
  PrecisionContext ctx(40);
  ScopedPrecision sp(ctx);
  PhasedComplex z{Real("1.2"), pi() / 8};

  // non-collinear input passes through unchanged
  HyperterminantArgs plain{
      {{Real(3), 1, PhasedComplex{Real(2), pi() / 2}},
       {Real("3.5"), 1, PhasedComplex{Real(2), -pi() / 2}}}};
  HyperterminantResult direct = hyperterminant(z, plain);
  HyperterminantResult via =
      hyperterminant_collinear(z, plain, {Real("0.001"), Real("0.0001")});
  CHECK(via.value == direct.value);

  // collinear case: equal sigma phases
  HyperterminantArgs col{{{Real(3), 1, PhasedComplex{Real(2), pi() / 2}},
                          {Real("3.5"), 1, PhasedComplex{Real(2), pi() / 2}}}};
  CHECK_THROWS_AS(hyperterminant(z, col), CollinearPhaseError);

  std::vector<Real> epsA, epsB;
  Real e("0.01");
  for (int i = 0; i < 9; ++i) { epsA.push_back(e); e /= 2; }
  e = Real("0.008");
  for (int i = 0; i < 9; ++i) { epsB.push_back(e); e /= 2; }
  HyperterminantResult a = hyperterminant_collinear(z, col, epsA, 40);
  HyperterminantResult b = hyperterminant_collinear(z, col, epsB, 40);
  // self-convergence of the extrapolation across two tableaux
  CHECK(rel_diff(a.value, b.value) < tol_digits(20));

  // the limit is approached from the epsilon side of the pole
  HyperterminantArgs tilt = col;
  tilt.columns[1].sigma.phase += Real("0.00001");
  HyperterminantResult near = hyperterminant(z, tilt, 40);
  CHECK(rel_diff(a.value, near.value) < tol_digits(3));

  // bad epsilon list
  CHECK_THROWS_AS(hyperterminant_collinear(z, col, {Real("0.001")}),
                  std::invalid_argument);
}
