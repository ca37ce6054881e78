#pragma once
// Steepest-descent geometry: path tracing by Newton continuation in the
// descent variable, oracle-grade evaluation of T^(n)(z; alpha) by quadrature
// along the traced path, and the absolute contour integrals over the
// doubly-infinite adjacent contours that feed the bounds module.

#include "hyperasym/problem.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hyperasym {

// A steepest-descent path from a saddle.  Every sample satisfies
// f(t(v)) - f_origin = v e^{i(-theta + 2 pi alpha)} with v >= 0 strictly
// increasing; the first sample is the saddle itself at v = 0.
struct PathSample {
  std::vector<std::pair<Real, Complex>> points;  // (v, t)
  int saddle_id = 0;
  Real theta{0};
  long alpha = 0;
  Real direction_phi{0};  // slope angle at the saddle, in (-pi, pi]
};

// Newton continuation diverged, typically by running into a zero of f' --
// at a Stokes angle this is precisely an adjacent saddle.  saddle_id names
// the declared saddle within 10^-3 of the smallest saddle spacing of the
// failure point, or -1 when the divergence is not near any declared saddle.
struct PathCollisionError : std::runtime_error {
  int saddle_id;
  PathCollisionError(const std::string& what, int id)
      : std::runtime_error(what), saddle_id(id) {}
};

struct TraceOptions {
  Real initial_dv{0};          // 0: derived from the nearest singulant modulus
  unsigned max_steps = 200000;
};

// P^(n)(theta; alpha) out to descent value v_max.
PathSample trace_path(const ProblemSpec& spec, int saddle_id, const Real& theta,
                      long alpha, const Real& v_max,
                      const TraceOptions& options = {});

// As above with the starting slope angle given instead of alpha; the implied
// alpha = (theta + arg f^(omega)(t^(n)) + omega phi) / (2 pi) must round to
// an integer within the direction spacing (phi within pi/omega of a path).
PathSample trace_path_direction(const ProblemSpec& spec, int saddle_id,
                                const Real& theta, const Real& direction_phi,
                                const Real& v_max,
                                const TraceOptions& options = {});

struct ReferenceResult {
  Complex value;
  Real accuracy_estimate;  // relative, from quadrature step halving
};

// omega_n z^{1/omega_n} int e^{-z(f - f_n)} g dt over P^(n)(arg z; alpha),
// integrated in the scale-invariant variable u = |z| v with the tail cut
// where e^{-u} < 10^-(target_digits + 10).  target_digits == 0 selects the
// problem's precision_digits.  theta = arg z must be off the Stokes angles
// of the traced path family (a collision raises PathCollisionError).
ReferenceResult reference_T(const ProblemSpec& spec, int saddle_id, long alpha,
                            const PhasedComplex& z, unsigned target_digits = 0);

// int |g| |f - f_n|^{-(N+1)/omega_n} |dt| over both branches of the
// doubly-infinite contour C^(m)(theta_plus) through the adjacent saddle m.
// theta_plus must be a Stokes angle of an n -> m adjacency family; the two
// branches carry the arrival labels alpha+ and alpha+ + 1.  Throws
// AccuracyError when the tail fails to decay (integral divergent).
Real abs_contour_integral(const ProblemSpec& spec, int n, int m, long N,
                          const Real& theta_plus, unsigned target_digits = 0);

// CSV export (header "v,re_t,im_t") at the current working precision.
std::string path_csv(const PathSample& path);

}  // namespace hyperasym
