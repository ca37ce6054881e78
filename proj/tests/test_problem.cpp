#include "doctest.h"
#include "hyperasym/problem.hpp"

using namespace hyperasym;
namespace mp = boost::multiprecision;

namespace {

Real tol_digits(int d) { return mp::pow(Real(10), -d); }

}  // namespace

TEST_CASE("polynomial eval, derivative, taylor shift") {
  ScopedPrecision sp(60);
  // p(t) = 1 + 2t + 3t^2
  Polynomial p{{Complex(Real(1)), Complex(Real(2)), Complex(Real(3))}};
  CHECK(abs(p.eval(Complex(Real(2))) - Complex(Real(17))) < tol_digits(55));
  Polynomial d = p.derivative();
  CHECK(abs(d.eval(Complex(Real(2))) - Complex(Real(14))) < tol_digits(55));
  // shift: p(1 + u) = 6 + 8u + 3u^2
  Polynomial q = p.taylor_shift(Complex(Real(1)));
  REQUIRE(q.coeffs.size() == 3);
  CHECK(abs(q.coeffs[0] - Complex(Real(6))) < tol_digits(55));
  CHECK(abs(q.coeffs[1] - Complex(Real(8))) < tol_digits(55));
  CHECK(abs(q.coeffs[2] - Complex(Real(3))) < tol_digits(55));
  // shift identity at a random complex point
  Complex c{Real("0.3"), Real("-1.7")}, u{Real("0.9"), Real("0.4")};
  Polynomial r{{Complex(Real(1)), c, u, Complex(Real(-2)), Complex{Real(0), Real(5)}}};
  Complex lhs = r.taylor_shift(c).eval(u);
  Complex rhs = r.eval(c + u);
  CHECK(abs(lhs - rhs) < tol_digits(50));
}

TEST_CASE("builtin pearcey_cusp loads with validated data") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("pearcey_cusp", ctx);
  const SaddlePoint& s1 = spec.saddle(1);
  const SaddlePoint& s2 = spec.saddle(2);
  CHECK(s1.order_omega == 2);
  CHECK(s2.order_omega == 3);
  // critical values f_1 = 6i, f_2 = -(3/4)i
  CHECK(abs(s1.critical_value - Complex{Real(0), Real(6)}) < tol_digits(50));
  CHECK(abs(s2.critical_value - Complex{Real(0), Real(-3) / 4}) < tol_digits(50));
  // |F_12| = 27/4
  const AdjacencyRecord& r12 = spec.record_for(1, 2, 0);
  CHECK(mp::abs(r12.singulant.modulus - Real(27) / 4) < tol_digits(50));
  // f''(t^(1)) = -18i
  CHECK(abs(s1.leading_derivative - Complex{Real(0), Real(-18)}) < tol_digits(50));
}

TEST_CASE("builtin degenerate_3_5 loads") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("degenerate_3_5", ctx);
  CHECK(spec.saddle(1).order_omega == 3);
  CHECK(spec.saddle(2).order_omega == 5);
  CHECK(mp::abs(spec.record_for(1, 2, 0).singulant.modulus - Real(32) / 7) <
        tol_digits(50));
  // f^(3)(0) = 120, f^(5)(2) = 360
  CHECK(abs(spec.saddle(1).leading_derivative - Complex(Real(120))) < tol_digits(45));
  CHECK(abs(spec.saddle(2).leading_derivative - Complex(Real(360))) < tol_digits(45));
}

TEST_CASE("builtin swallowtail loads") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("swallowtail", ctx);
  CHECK(spec.saddle(1).order_omega == 2);
  CHECK(spec.saddle(3).order_omega == 3);
  CHECK(mp::abs(spec.record_for(1, 2, 0).singulant.modulus -
                9 * mp::sqrt(Real(109)) / 4) < tol_digits(45));
  CHECK(mp::abs(spec.record_for(1, 3, 0).singulant.modulus -
                125 * mp::sqrt(Real(5)) / 12) < tol_digits(45));
}

TEST_CASE("saddle-order mismatch rejected") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("pearcey_cusp", ctx);
  spec.saddles[0].order_omega = 3;  // claim a double saddle at the simple one
  CHECK_THROWS_AS(validate_problem(spec, ctx), std::invalid_argument);
}

TEST_CASE("stokes successors reproduce the pearcey chain") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("pearcey_cusp", ctx);
  Real tol = tol_digits(50);

  // 1 -> 2 at theta = -pi/4: theta+ = pi/2, alpha+ = 1
  StokesSuccessor a = stokes_successor(spec.record_for(1, 2, 0), -pi() / 4);
  CHECK(mp::abs(a.theta_plus - pi() / 2) < tol);
  CHECK(a.alpha_plus == 1);

  // 2 -> 1 at theta = pi/2: theta+ = 11 pi/2, alpha+ = 2
  StokesSuccessor b = stokes_successor(spec.record_for(2, 1, 1), a.theta_plus);
  CHECK(mp::abs(b.theta_plus - 11 * pi() / 2) < tol);
  CHECK(b.alpha_plus == 2);

  // 1 -> 2 again from 11 pi/2 with source path alpha = 2: 17 pi/2, alpha+ = 5
  StokesSuccessor c =
      stokes_successor(spec.record_for(1, 2, 2), b.theta_plus, 2);
  CHECK(mp::abs(c.theta_plus - 17 * pi() / 2) < tol);
  CHECK(c.alpha_plus == 5);
}

TEST_CASE("stokes successors reproduce the degenerate_3_5 chain") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("degenerate_3_5", ctx);
  Real tol = tol_digits(50);

  StokesSuccessor a = stokes_successor(spec.record_for(1, 2, 0), -pi() / 4);
  CHECK(mp::abs(a.theta_plus) < tol);  // theta_12+ = 0
  CHECK(a.alpha_plus == 2);

  StokesSuccessor b = stokes_successor(spec.record_for(2, 1, 2), a.theta_plus);
  CHECK(mp::abs(b.theta_plus - 9 * pi()) < tol);  // theta_121+ = 9 pi
  CHECK(b.alpha_plus == 4);

  // source path about saddle 1 now has alpha = 4 (family 1 mod 3)
  StokesSuccessor c =
      stokes_successor(spec.record_for(1, 2, 4), b.theta_plus, 4);
  CHECK(mp::abs(c.theta_plus - 14 * pi()) < tol);  // theta_1212+ = 14 pi
  CHECK(c.alpha_plus == 9);
}

TEST_CASE("stokes successor monotonicity and on-line rejection") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  ProblemSpec spec = make_builtin("pearcey_cusp", ctx);
  const AdjacencyRecord& r = spec.record_for(1, 2, 0);
  for (int k = -3; k <= 3; ++k) {
    Real theta = Real(k) * pi() / 3 + Real("0.1");
    StokesSuccessor s = stokes_successor(r, theta);
    CHECK(s.theta_plus > theta);
    CHECK(s.theta_plus <= theta + 2 * pi() * 2 + tol_digits(40));
  }
  CHECK_THROWS_AS(stokes_successor(r, pi() / 2), std::domain_error);
}

TEST_CASE("truncation schedules reproduce both tables") {
  PrecisionContext ctx(60);
  ScopedPrecision sp(ctx);
  Real one(1);

  ProblemSpec pearcey = make_builtin("pearcey_cusp", ctx);
  CHECK(truncation_schedule(pearcey, 1, 0, one).counts == std::vector<long>{13});
  CHECK(truncation_schedule(pearcey, 1, 1, one).counts ==
        std::vector<long>{27, 20});
  CHECK(truncation_schedule(pearcey, 1, 2, one).counts ==
        std::vector<long>{40, 40, 13});
  TruncationSchedule p3 = truncation_schedule(pearcey, 1, 3, one);
  CHECK(p3.counts == std::vector<long>{54, 60, 27, 20});
  CHECK(p3.chain == std::vector<int>{1, 2, 1, 2, 1});

  ProblemSpec deg = make_builtin("degenerate_3_5", ctx);
  CHECK(truncation_schedule(deg, 1, 0, one).counts == std::vector<long>{13});
  CHECK(truncation_schedule(deg, 1, 1, one).counts == std::vector<long>{27, 22});
  CHECK(truncation_schedule(deg, 1, 2, one).counts ==
        std::vector<long>{41, 45, 13});
  CHECK(truncation_schedule(deg, 1, 3, one).counts ==
        std::vector<long>{54, 68, 27, 22});
}

TEST_CASE("json round trip with validation") {
  ScopedPrecision sp(80);
  // Airy-type problem: f = t^3/3 - t, saddles at +-1 (omega = 2)
  // f(1) = -2/3, f(-1) = 2/3, F_12 = f(-1) - f(1) = 4/3 > 0 -> Stokes at 0.
  // f''(-1) = -2 (arg = pi): 2 pi alpha = 0 + pi + 2 phi -> alpha=0, phi=-pi/2
  std::string doc = R"({
    "name": "airy_like",
    "precision_digits": 50,
    "f": {"coeffs": [["0","0"], ["-1","0"], ["0","0"], ["0.33333333333333333333333333333333333333333333333333333333333333","0"]]},
    "g": {"coeffs": [["1","0"]]},
    "saddles": [{"id": 1, "t": ["1","0"], "omega": 2},
                 {"id": 2, "t": ["-1","0"], "omega": 2}],
    "adjacency": [{"from": 1, "to": 2, "base_theta_over_pi": "0",
                   "base_alpha": 0, "arrival_phi_over_pi": "-0.5"}]
  })";
  ProblemSpec spec = load_problem(doc);
  CHECK(spec.name == "airy_like");
  CHECK(mp::abs(spec.adjacency[0].singulant.modulus - Real(4) / 3) < tol_digits(40));

  // Stokes-condition violation: wrong base angle
  std::string bad = doc;
  bad.replace(bad.find("\"base_theta_over_pi\": \"0\""), 25,
              "\"base_theta_over_pi\": \"0.5\"");
  CHECK_THROWS_AS(load_problem(bad), std::invalid_argument);

  // malformed document
  CHECK_THROWS_AS(load_problem("{ not json"), std::invalid_argument);
}
