#include "hyperasym/geometry.hpp"

#include "quadrature_detail.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <sstream>

namespace hyperasym {

namespace mp = boost::multiprecision;

namespace {

Real two_pi() { return 2 * pi(); }

Real reduce_angle(Real a) {  // into (-pi, pi]
  a -= two_pi() * mp::round(a / two_pi());
  if (a <= -pi()) a += two_pi();
  return a;
}

// Smallest distance between two declared saddles; 0 when fewer than two.
Real saddle_spacing(const ProblemSpec& spec) {
  Real best(0);
  for (std::size_t i = 0; i < spec.saddles.size(); ++i)
    for (std::size_t j = i + 1; j < spec.saddles.size(); ++j) {
      Real d = abs(spec.saddles[i].location - spec.saddles[j].location);
      if (best == 0 || d < best) best = d;
    }
  return best;
}

// ---------------------------------------------------------------------------
// Truncated power series in one variable (coefficient of sigma^k at index k),
// used for the local inverse t(sigma) at the saddle.

using Series = std::vector<Complex>;

Series smul(const Series& a, const Series& b, std::size_t len) {
  Series out(len);
  for (std::size_t i = 0; i < a.size() && i < len; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j)
      out[i + j] += a[i] * b[j];
  return out;
}

Series sinv(const Series& a, std::size_t len) {  // requires a[0] != 0
  Series out(len);
  out[0] = Complex(Real(1)) / a[0];
  for (std::size_t k = 1; k < len; ++k) {
    Complex acc{};
    for (std::size_t j = 1; j <= k && j < a.size(); ++j)
      acc += a[j] * out[k - j];
    out[k] = -acc / a[0];
  }
  return out;
}

// P(u(sigma)) truncated at sigma^(len-1), u with zero constant term.
Series scompose(const Polynomial& P, const Series& u, std::size_t len) {
  Series out(len);
  out[0] = P.coeffs.back();
  for (std::size_t j = P.coeffs.size() - 1; j-- > 0;) {
    out = smul(out, u, len);
    out[0] += P.coeffs[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Newton continuation along f(t) = f_origin + v e^{i(-theta + 2 pi alpha)}.
// The tracer keeps a monotone table of accepted samples; arbitrary v values
// (e.g. quadrature nodes) are then solved from table-interpolated seeds.
// Near the saddle the map v -> t is recovered instead from the reverted
// local series t = t0 + sum c_k sigma^k, sigma = v^(1/omega): solving the
// full equation there is ill-conditioned (f' below the evaluation noise of
// f), while the series is exact in the given problem data.

class Tracer {
 public:
  Tracer(const ProblemSpec& spec, int saddle_id, const Real& theta, long alpha)
      : spec_(spec),
        origin_(spec.saddle(saddle_id)),
        fprime_(spec.f.derivative()),
        dir_(polar(Real(1), -theta + two_pi() * Real(alpha))),
        spacing_(saddle_spacing(spec)) {
    unsigned omega = origin_.order_omega;
    Real arg_lead = arg(origin_.leading_derivative);
    phi_ = reduce_angle((two_pi() * Real(alpha) - theta - arg_lead) /
                        Real(static_cast<long>(omega)));
    Real fact(1);
    for (unsigned j = 2; j <= omega; ++j) fact *= j;
    Real seed_coeff = mp::pow(fact / abs(origin_.leading_derivative),
                              Real(1) / Real(static_cast<long>(omega)));
    c1_ = seed_coeff * polar(Real(1), phi_);
    v_scale_ = Real(0);
    for (const AdjacencyRecord* r : spec.records_from(saddle_id))
      if (v_scale_ == 0 || r->singulant.modulus < v_scale_)
        v_scale_ = r->singulant.modulus;
    if (v_scale_ == 0) v_scale_ = 1;
    newton_tol_ = machine_epsilon() * mp::pow(Real(10), 6);
    build_local_series();
  }

  const Real& direction_phi() const { return phi_; }
  const std::vector<std::pair<Real, Complex>>& table() const { return table_; }

  // Extends the sample table out to v_max with adaptive steps.
  void extend(const Real& v_max, const TraceOptions& opt = {}) {
    if (v_max <= 0) return;
    unsigned steps = 0;
    if (table_.empty()) {
      Real v1 = v_switch_;
      if (v1 > v_max) v1 = v_max;
      Complex t1 = newton_or_throw(v1, local_t(v1));
      table_.emplace_back(v1, t1);
    }
    Real dv = opt.initial_dv > 0 ? opt.initial_dv : v_scale_ / 16;
    while (table_.back().first < v_max) {
      if (++steps > opt.max_steps)
        throw AccuracyError("trace_path: step limit exceeded");
      const Real& cur_v = table_.back().first;
      const Complex& cur_t = table_.back().second;
      Real step = dv;
      if (step > v_max - cur_v) step = v_max - cur_v;
      if (step > cur_v + v_scale_) step = cur_v + v_scale_;
      Complex fp = fprime_.eval(cur_t);
      unsigned iters = 0;
      bool ok = abs(fp) > 0;
      Complex t_new, t_pred;
      if (ok) {
        t_pred = cur_t + (step * dir_) / fp;
        ok = newton(cur_v + step, t_pred, t_new, iters);
      }
      // Predictor-consistency keeps the iteration in the quadratic regime
      // and rejects roots found across a foreign saddle: when f' collapses
      // the predictor leaves the continuation tube and the correction is of
      // the size of the predictor step itself.
      if (ok) {
        Real pred_len = abs(t_pred - cur_t);
        ok = abs(t_new - t_pred) <=
                 3 * pred_len / 4 + 32 * newton_tol_ * (abs(t_new) + 1) &&
             abs(t_new - cur_t) <=
                 spacing_half() + (abs(cur_t - origin_.location) + 1) / 3;
      }
      if (!ok) {
        dv /= 2;
        if (dv < (cur_v + v_scale_) * newton_floor()) report_collision(cur_t);
        continue;
      }
      check_proximity(t_new);
      table_.emplace_back(cur_v + step, t_new);
      if (iters <= 3) dv *= Real(14) / 10;
    }
  }

  // Solves for t(v) from the nearest table seed (the table must already
  // cover v; used at quadrature nodes).
  Complex solve(const Real& v) const {
    if (v == 0) return origin_.location;
    if (v <= v_switch_) return local_t(v);
    if (table_.empty())
      throw AccuracyError("path solve: sample table does not cover v");
    Complex seed;
    {
      auto it = std::lower_bound(
          table_.begin(), table_.end(), v,
          [](const std::pair<Real, Complex>& s, const Real& x) {
            return s.first < x;
          });
      if (it == table_.end()) {
        seed = table_.back().second +
               ((v - table_.back().first) * dir_) /
                   fprime_.eval(table_.back().second);
      } else if (it == table_.begin()) {
        seed = it->second;
      } else {
        auto lo = std::prev(it);
        Real w = (v - lo->first) / (it->first - lo->first);
        seed = lo->second + w * (it->second - lo->second);
      }
    }
    return newton_or_throw(v, seed);
  }

  // f'(t(v)) together with t(v); below the series radius both come from the
  // local expansion (the plain polynomial evaluation of f' near its root
  // loses all relative accuracy).
  Complex slope(const Real& v, Complex* t_out) const {
    unsigned omega = origin_.order_omega;
    if (v > 0 && v <= v_switch_) {
      Complex u = local_u(v);
      if (t_out) *t_out = origin_.location + u;
      Complex hat{};
      for (std::size_t j = fphat_.coeffs.size(); j-- > 0;)
        hat = hat * u + fphat_.coeffs[j];
      return pow(u, static_cast<int>(omega) - 1) * hat;
    }
    Complex t = solve(v);
    if (t_out) *t_out = t;
    return fprime_.eval(t);
  }

 private:
  Real spacing_half() const { return spacing_ > 0 ? spacing_ / 2 : Real(1); }
  static Real newton_floor() { return mp::pow(Real(10), -18); }

  // offset u(v) = sum c_k sigma^k, sigma = v^(1/omega)
  Complex local_u(const Real& v) const {
    unsigned omega = origin_.order_omega;
    Real sigma = mp::pow(v, Real(1) / Real(static_cast<long>(omega)));
    Complex u{};
    for (std::size_t k = series_.size(); k-- > 1;)
      u = (u + series_[k]) * sigma;
    return u;
  }

  Complex local_t(const Real& v) const { return origin_.location + local_u(v); }

  // Reverts f(t0 + u) - f0 = v dir into u(sigma) by Newton iteration on
  // truncated series; the sub-omega Taylor coefficients of the shifted f are
  // dropped (they are pure rounding noise) so the series is free of the
  // cancellation that plagues direct evaluation near the saddle.
  void build_local_series() {
    unsigned omega = origin_.order_omega;
    unsigned prec = Real::default_precision();
    local_p_ = spec_.f.taylor_shift(origin_.location);
    for (unsigned j = 0; j < omega && j < local_p_.coeffs.size(); ++j)
      local_p_.coeffs[j] = Complex{};
    Polynomial pd = local_p_.derivative();
    fphat_.coeffs.assign(pd.coeffs.begin() +
                             static_cast<long>(omega) - 1,
                         pd.coeffs.end());

    // sigma-radius of convergence ~ (nearest singulant)^(1/omega); truncate
    // at a quarter of it
    std::size_t len =
        static_cast<std::size_t>(prec * 23 / 6) / 2 + 12;  // ~ prec/log10(4)
    series_.assign(2, Complex{});
    series_[1] = c1_;
    Real eps = machine_epsilon();
    // Newton on truncated series doubles the correct order per step, so the
    // truncation length can grow with it
    unsigned rounds = 0;
    for (std::size_t cur = 4;; cur = std::min(2 * cur, len)) {
      if (++rounds > 40) break;  // stalled at the coefficient noise floor
      series_.resize(cur, Complex{});
      Series s = scompose(local_p_, series_, cur + omega);
      s[omega] -= dir_;
      Series num(cur);
      for (std::size_t k = 0; k < cur; ++k) num[k] = s[k + omega - 1];
      Series d = scompose(pd, series_, cur + omega - 1);
      Series den(cur);
      for (std::size_t k = 0; k < cur; ++k) den[k] = d[k + omega - 1];
      Series corr = smul(num, sinv(den, cur), cur);
      Real moved(0);
      for (std::size_t k = 0; k < cur; ++k) {
        series_[k] -= corr[k];
        Real m = abs(corr[k]);
        if (m > moved) moved = m;
      }
      if (cur == len && moved < eps) break;
    }

    Real sigma_sw = mp::pow(v_scale_, Real(1) / Real(static_cast<long>(omega))) / 4;
    // back off until the series matches the defining equation at the switch
    Real res_tol = mp::pow(Real(10), 8 - static_cast<long>(prec)) *
                   (v_scale_ + 1);
    for (int tries = 0; tries < 60; ++tries) {
      Real v_sw = mp::pow(sigma_sw, static_cast<long>(omega));
      Complex u = local_u(v_sw);
      Complex res = local_p_.eval(u) - v_sw * dir_;
      if (abs(res) <= res_tol) break;
      sigma_sw /= 2;
    }
    v_switch_ = mp::pow(sigma_sw, static_cast<long>(omega));
  }

  bool newton(const Real& v, Complex t, Complex& out, unsigned& iters) const {
    Complex target = origin_.critical_value + v * dir_;
    Real noise = machine_epsilon() * (abs(target) + 1);  // of f(t) - target
    for (iters = 0; iters < 48; ++iters) {
      Complex r = spec_.f.eval(t) - target;
      Complex fp = fprime_.eval(t);
      if (!(abs(fp) > 0)) return false;
      Complex dt = r / fp;
      Real move = abs(dt);
      if (move > 4 * (abs(t) + 1)) return false;  // runaway
      t -= dt;
      // converged when the correction reaches the tolerance or the
      // conditioning floor of the residual evaluation
      if (move <= newton_tol_ * (abs(t) + 1) + 8 * noise / abs(fp)) {
        out = t;
        return true;
      }
    }
    return false;
  }

  Complex newton_or_throw(const Real& v, const Complex& seed) const {
    Complex t;
    unsigned iters = 0;
    if (!newton(v, seed, t, iters))
      throw AccuracyError("path solve: Newton iteration diverged at v = " +
                          v.str(8));
    check_proximity(t);
    return t;
  }

  // A point within 10^-3 of the saddle spacing of a foreign declared saddle
  // means the continuation has run into it (the Stokes configuration).
  void check_proximity(const Complex& t) const {
    if (spacing_ == 0) return;
    for (const SaddlePoint& s : spec_.saddles) {
      if (s.id == origin_.id) continue;
      if (abs(t - s.location) < spacing_ / 1000)
        throw PathCollisionError(
            "trace_path: continuation ran into saddle " + std::to_string(s.id),
            s.id);
    }
  }

  [[noreturn]] void report_collision(const Complex& t) const {
    int nearest = -1;
    if (spacing_ > 0) {
      Real best(0);
      for (const SaddlePoint& s : spec_.saddles) {
        if (s.id == origin_.id) continue;
        Real d = abs(t - s.location);
        if (nearest < 0 || d < best) {
          best = d;
          nearest = s.id;
        }
      }
      if (nearest >= 0 && !(best < spacing_ / 1000)) nearest = -1;
    }
    if (nearest >= 0)
      throw PathCollisionError(
          "trace_path: continuation ran into saddle " + std::to_string(nearest),
          nearest);
    throw PathCollisionError("trace_path: Newton continuation diverged", -1);
  }

  const ProblemSpec& spec_;
  const SaddlePoint& origin_;
  Polynomial fprime_;
  Complex dir_;       // e^{i(-theta + 2 pi alpha)}
  Real phi_{0};       // slope angle at the saddle
  Complex c1_;        // leading inverse-series coefficient
  Polynomial local_p_;  // f(t0 + u) - f0, sub-omega noise removed
  Polynomial fphat_;    // f'(t0 + u) / u^(omega-1)
  Series series_;       // c_k of t(sigma)
  Real v_switch_{0};
  Real spacing_{0};
  Real v_scale_{0};
  Real newton_tol_{0};
  std::vector<std::pair<Real, Complex>> table_;
};

PathSample assemble(const Tracer& tracer, int saddle_id, const Real& theta,
                    long alpha, const Complex& t0) {
  PathSample out;
  out.saddle_id = saddle_id;
  out.theta = theta;
  out.alpha = alpha;
  out.direction_phi = tracer.direction_phi();
  out.points.emplace_back(Real(0), t0);
  out.points.insert(out.points.end(), tracer.table().begin(),
                    tracer.table().end());
  return out;
}

}  // namespace

PathSample trace_path(const ProblemSpec& spec, int saddle_id, const Real& theta,
                      long alpha, const Real& v_max,
                      const TraceOptions& options) {
  if (v_max < 0) throw std::invalid_argument("trace_path: v_max must be >= 0");
  Tracer tracer(spec, saddle_id, theta, alpha);
  tracer.extend(v_max, options);
  return assemble(tracer, saddle_id, theta, alpha,
                  spec.saddle(saddle_id).location);
}

PathSample trace_path_direction(const ProblemSpec& spec, int saddle_id,
                                const Real& theta, const Real& direction_phi,
                                const Real& v_max,
                                const TraceOptions& options) {
  const SaddlePoint& s = spec.saddle(saddle_id);
  Real a_real = (theta + arg(s.leading_derivative) +
                 Real(static_cast<long>(s.order_omega)) * direction_phi) /
                two_pi();
  long alpha = mp::round(a_real).convert_to<long>();
  return trace_path(spec, saddle_id, theta, alpha, v_max, options);
}

ReferenceResult reference_T(const ProblemSpec& spec, int saddle_id, long alpha,
                            const PhasedComplex& z, unsigned target_digits) {
  if (z.modulus <= 0)
    throw std::invalid_argument("reference_T: z must be nonzero");
  const SaddlePoint& sad = spec.saddle(saddle_id);
  unsigned omega = sad.order_omega;
  unsigned digits = target_digits ? target_digits : spec.precision_digits;
  Real theta = z.phase;

  Real ln10 = mp::log(Real(10));
  Real u_max = ln10 * Real(static_cast<long>(digits) + 10);
  Real v_max = u_max / z.modulus;
  Tracer tracer(spec, saddle_id, theta, alpha);
  tracer.extend(v_max);

  Real tol = mp::pow(Real(10), -static_cast<long>(digits));
  // endpoint behaviour v^(1/omega - 1): weight cut tol^omega keeps the
  // truncated node contributions below tol
  Real wcut = mp::pow(tol, static_cast<long>(omega));
  auto integrand = [&](const Real& u) {
    Complex t;
    Complex fp = tracer.slope(u / z.modulus, &t);
    return mp::exp(-u) * spec.g.eval(t) / fp;
  };
  Real diff(0);
  Complex integral = detail::de_integrate(integrand, Real(0), u_max, tol, wcut,
                                          &diff);

  Complex dir = polar(Real(1), -theta + two_pi() * Real(alpha));
  Complex value = Real(static_cast<long>(omega)) *
                  phased_pow(z, Real(1) / Real(static_cast<long>(omega)))
                      .cartesian() *
                  dir * integral / z.modulus;
  Real scale = abs(integral);
  Real estimate = scale > 0 ? Real(diff / scale) : diff;
  return {value, estimate};
}

Real abs_contour_integral(const ProblemSpec& spec, int n, int m, long N,
                          const Real& theta_plus, unsigned target_digits) {
  const SaddlePoint& sn = spec.saddle(n);
  const SaddlePoint& sm = spec.saddle(m);
  if (N < 0) throw std::invalid_argument("abs_contour_integral: N must be >= 0");

  // resolve theta_plus against the n -> m adjacency families:
  // theta+ = base_theta + 2 pi d  =>  alpha+ = base_alpha + d
  const AdjacencyRecord* rec = nullptr;
  long dshift = 0;
  Real best(0);
  for (const AdjacencyRecord* r : spec.records_from(n)) {
    if (r->to_id != m) continue;
    Real d = (theta_plus - r->base_theta) / two_pi();
    Real miss = mp::abs(d - mp::round(d));
    if (!rec || miss < best) {
      rec = r;
      best = miss;
      dshift = mp::round(d).convert_to<long>();
    }
  }
  if (!rec)
    throw std::invalid_argument("abs_contour_integral: no adjacency record for pair");
  if (!(best < mp::pow(Real(10), -9)))
    throw std::invalid_argument(
        "abs_contour_integral: theta_plus is not a Stokes angle of the pair");
  long alpha_plus = rec->base_alpha + dshift;

  Real F = rec->singulant.modulus;
  Real omega_n(static_cast<long>(sn.order_omega));
  Real p(static_cast<long>(spec.f.degree()));
  Real dg(static_cast<long>(spec.g.degree()));
  // large-t decay exponent of the integrand in v; q <= 0 means the tail grows
  Real q = Real(N + 1) / omega_n - (dg + 1) / p;
  if (!(q > 0))
    throw AccuracyError("abs_contour_integral: contour tail does not decay");

  unsigned digits = target_digits ? target_digits : spec.precision_digits;
  Real ln10 = mp::log(Real(10));
  // lambda = log(1 + w/F): exponential tail decay e^{-q lambda}
  Real lambda_max = ln10 * Real(static_cast<long>(digits) + 5) / q;
  Real w_max = F * (mp::exp(lambda_max) - 1);
  Real tol = mp::pow(Real(10), -static_cast<long>(digits));
  Real wcut = mp::pow(tol, static_cast<long>(sm.order_omega));
  Real expo = Real(N + 1) / omega_n;

  Real total(0);
  for (long branch = 0; branch <= 1; ++branch) {
    Tracer tracer(spec, m, theta_plus, alpha_plus + branch);
    tracer.extend(w_max);
    auto integrand = [&](const Real& lam) {
      // w = F (e^lam - 1) without cancellation at the tiny outer nodes
      Real w = F * mp::expm1(lam);
      Real vfull = F + w;                     // |f - f_n|
      Complex t;
      Complex fp = tracer.slope(w, &t);
      return Complex(mp::pow(vfull, -expo) * abs(spec.g.eval(t)) / abs(fp) *
                     vfull);                  // dw = (F + w) d lambda
    };
    total += detail::de_integrate(integrand, Real(0), lambda_max, tol, wcut).re;
  }
  return total;
}

std::string path_csv(const PathSample& path) {
  std::ostringstream out;
  out << "v,re_t,im_t\n";
  for (const auto& [v, t] : path.points)
    out << v.str() << "," << t.re.str() << "," << t.im.str() << "\n";
  return out.str();
}

}  // namespace hyperasym
