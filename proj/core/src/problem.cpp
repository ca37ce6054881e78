#include "hyperasym/problem.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hyperasym {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Polynomial

Complex Polynomial::eval(const Complex& t) const {
  Complex acc;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs.size() <= 1) return Polynomial{{Complex{}}};
  std::vector<Complex> d(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    d[k - 1] = coeffs[k] * Real(static_cast<long>(k));
  return Polynomial{std::move(d)};
}

Polynomial Polynomial::taylor_shift(const Complex& center) const {
  std::vector<Complex> a = coeffs;
  if (a.empty()) return Polynomial{{Complex{}}};
  const std::size_t n = a.size() - 1;
  // repeated synthetic division: after pass k, a[k] is the u^k coefficient
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = n; i-- > k;) a[i] += center * a[i + 1];
  return Polynomial{std::move(a)};
}

// ---------------------------------------------------------------------------
// ProblemSpec accessors

const SaddlePoint& ProblemSpec::saddle(int id) const {
  for (const auto& s : saddles)
    if (s.id == id) return s;
  throw std::invalid_argument("ProblemSpec: unknown saddle id " + std::to_string(id));
}

std::vector<const AdjacencyRecord*> ProblemSpec::records_from(int id) const {
  std::vector<const AdjacencyRecord*> out;
  for (const auto& r : adjacency)
    if (r.from_id == id) out.push_back(&r);
  return out;
}

const AdjacencyRecord& ProblemSpec::record_for(int from, int to,
                                               long source_alpha) const {
  const AdjacencyRecord* fallback = nullptr;
  for (const auto& r : adjacency) {
    if (r.from_id != from || r.to_id != to) continue;
    long omega = static_cast<long>(r.omega_from);
    if (((r.source_alpha - source_alpha) % omega + omega) % omega == 0) return r;
    fallback = &r;
  }
  if (fallback) return *fallback;
  throw std::invalid_argument("ProblemSpec: no adjacency record " +
                              std::to_string(from) + " -> " + std::to_string(to));
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Reduce x into (-pi, pi].
Real reduce_angle(Real x) {
  Real two_pi = 2 * pi();
  x = mp::fmod(x, two_pi);
  if (x > pi()) x -= two_pi;
  if (x <= -pi()) x += two_pi;
  return x;
}

Complex poly_derivative_at(const Polynomial& p, const Complex& t, unsigned k) {
  Polynomial q = p;
  for (unsigned j = 0; j < k; ++j) q = q.derivative();
  return q.eval(t);
}

}  // namespace

void validate_problem(ProblemSpec& spec, const PrecisionContext& ctx) {
  ScopedPrecision sp(ctx);
  if (spec.f.coeffs.size() < 2 || abs(spec.f.coeffs.back()) == 0)
    throw std::invalid_argument("problem: f must have degree >= 1 with nonzero leading coefficient");
  if (spec.g.coeffs.empty())
    throw std::invalid_argument("problem: g must be nonempty");
  if (spec.saddles.empty())
    throw std::invalid_argument("problem: at least one saddle required");

  Real scale{0};
  for (const auto& c : spec.f.coeffs) {
    Real a = abs(c);
    if (a > scale) scale = a;
  }
  Real tol = mp::pow(Real(10), -static_cast<int>(ctx.digits) + 6) * scale;

  for (auto& s : spec.saddles) {
    if (s.order_omega < 2)
      throw std::invalid_argument("problem: saddle order omega must be >= 2");
    s.critical_value = spec.f.eval(s.location);
    for (unsigned p = 1; p < s.order_omega; ++p) {
      if (abs(poly_derivative_at(spec.f, s.location, p)) > tol)
        throw std::invalid_argument(
            "problem: saddle-order mismatch at saddle " + std::to_string(s.id) +
            " (derivative " + std::to_string(p) + " does not vanish)");
    }
    s.leading_derivative = poly_derivative_at(spec.f, s.location, s.order_omega);
    if (abs(s.leading_derivative) <= tol)
      throw std::invalid_argument(
          "problem: saddle-order mismatch at saddle " + std::to_string(s.id) +
          " (leading derivative vanishes; order higher than declared)");
  }

  Real sing_tol = mp::pow(Real(10), -static_cast<int>(ctx.digits) + 6);
  for (auto& r : spec.adjacency) {
    const SaddlePoint& from = spec.saddle(r.from_id);
    const SaddlePoint& to = spec.saddle(r.to_id);
    if (r.from_id == r.to_id)
      throw std::invalid_argument("problem: adjacency record must connect distinct saddles");
    r.omega_from = from.order_omega;
    r.omega_to = to.order_omega;

    Complex diff = to.critical_value - from.critical_value;
    Real modulus = abs(diff);
    if (modulus == 0)
      throw std::invalid_argument("problem: coincident critical values in adjacency record");
    if (abs(modulus - r.singulant.modulus) > sing_tol * modulus)
      throw std::invalid_argument("problem: declared singulant modulus disagrees with f");
    r.singulant = PhasedComplex{modulus, -to_current_precision(r.base_theta)};

    // Stokes condition: e^{i base_theta} (f_m - f_n) is positive real.
    Real mismatch = reduce_angle(r.base_theta + arg(diff));
    if (mp::abs(mismatch) > sing_tol * 1000)
      throw std::invalid_argument("problem: Stokes-condition violation in adjacency record " +
                                  std::to_string(r.from_id) + " -> " + std::to_string(r.to_id));

    if (!(r.arrival_phi > -pi() && r.arrival_phi <= pi() + sing_tol))
      throw std::invalid_argument("problem: arrival_phi outside (-pi, pi]");

    // 2 pi alpha = theta + arg f^(omega_m)(t^(m)) + omega_m phi.
    Real lhs = 2 * pi() * Real(r.base_alpha);
    Real rhs = r.base_theta + arg(to.leading_derivative) +
               Real(static_cast<long>(to.order_omega)) * r.arrival_phi;
    if (mp::abs(lhs - rhs) > sing_tol * 1000)
      throw std::invalid_argument("problem: base_alpha inconsistent with Stokes data in record " +
                                  std::to_string(r.from_id) + " -> " + std::to_string(r.to_id));
  }
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

Real real_from_string(const std::string& s) { return Real(s); }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw std::invalid_argument("problem: complex values must be [re, im] decimal-string pairs");
  return {real_from_string(j[0].get<std::string>()),
          real_from_string(j[1].get<std::string>())};
}

Polynomial poly_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array())
    throw std::invalid_argument("problem: polynomial must be {coeffs: [...]}");
  std::vector<Complex> c;
  for (const auto& e : j["coeffs"]) c.push_back(complex_from_json(e));
  return Polynomial{std::move(c)};
}

}  // namespace

ProblemSpec load_problem(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("problem: malformed document: ") + e.what());
  }
  try {
    ProblemSpec spec;
    spec.name = doc.at("name").get<std::string>();
    spec.precision_digits = doc.at("precision_digits").get<unsigned>();
    PrecisionContext ctx(spec.precision_digits);
    ScopedPrecision sp(ctx);
    spec.f = poly_from_json(doc.at("f"));
    spec.g = poly_from_json(doc.at("g"));
    for (const auto& js : doc.at("saddles")) {
      SaddlePoint s;
      s.id = js.at("id").get<int>();
      s.location = complex_from_json(js.at("t"));
      s.order_omega = js.at("omega").get<unsigned>();
      spec.saddles.push_back(s);
    }
    for (const auto& ja : doc.at("adjacency")) {
      AdjacencyRecord r;
      r.from_id = ja.at("from").get<int>();
      r.to_id = ja.at("to").get<int>();
      r.base_theta = real_from_string(ja.at("base_theta_over_pi").get<std::string>()) * pi();
      r.base_alpha = ja.at("base_alpha").get<long>();
      r.arrival_phi = real_from_string(ja.at("arrival_phi_over_pi").get<std::string>()) * pi();
      r.source_alpha = ja.value("source_alpha", 0L);
      // modulus recomputed during validation; declared value optional
      Real declared{0};
      const SaddlePoint* from = nullptr;
      const SaddlePoint* to = nullptr;
      for (const auto& s : spec.saddles) {
        if (s.id == r.from_id) from = &s;
        if (s.id == r.to_id) to = &s;
      }
      if (!from || !to)
        throw std::invalid_argument("problem: adjacency record references unknown saddle");
      declared = abs(spec.f.eval(to->location) - spec.f.eval(from->location));
      r.singulant = PhasedComplex{declared, -r.base_theta};
      spec.adjacency.push_back(r);
    }
    validate_problem(spec, ctx);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("problem: malformed document: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Built-in problems

ProblemSpec make_builtin(const std::string& name, const PrecisionContext& ctx) {
  ScopedPrecision sp(ctx);
  const Complex I = i_unit();
  ProblemSpec spec;
  spec.name = name;
  spec.precision_digits = ctx.digits;

  auto record = [](int from, int to, Real modulus, Real theta, long alpha,
                   Real phi, long src) {
    AdjacencyRecord r;
    r.from_id = from;
    r.to_id = to;
    r.singulant = PhasedComplex{std::move(modulus), -theta};
    r.base_theta = std::move(theta);
    r.base_alpha = alpha;
    r.arrival_phi = std::move(phi);
    r.source_alpha = src;
    return r;
  };

  if (name == "pearcey_cusp") {
    // f(t) = -i (t^4 - 3 t^2 + 2 sqrt2 t), g = 1
    Real s2 = mp::sqrt(Real(2));
    spec.f = Polynomial{{Complex{}, Complex{Real(0), -2 * s2}, Complex{Real(0), Real(3)},
                         Complex{}, Complex{Real(0), Real(-1)}}};
    spec.g = Polynomial{{Complex(Real(1))}};
    spec.saddles = {{1, Complex{-s2}, 2, {}, {}}, {2, Complex{s2 / 2}, 3, {}, {}}};
    Real F = Real(27) / 4;
    spec.adjacency = {
        record(1, 2, F, pi() / 2, 1, 2 * pi() / 3, 0),
        record(2, 1, F, -pi() / 2, -1, -pi() / 2, 1),
    };
  } else if (name == "degenerate_3_5") {
    // f(t) = (15/28) t^7 - 5 t^6 + 18 t^5 - 30 t^4 + 20 t^3, g = 1
    spec.f = Polynomial{{Complex{}, Complex{}, Complex{}, Complex(Real(20)),
                         Complex(Real(-30)), Complex(Real(18)), Complex(Real(-5)),
                         Complex(Real(15) / 28)}};
    spec.g = Polynomial{{Complex(Real(1))}};
    spec.saddles = {{1, Complex{}, 3, {}, {}}, {2, Complex{Real(2)}, 5, {}, {}}};
    Real F = Real(32) / 7;
    spec.adjacency = {
        record(1, 2, F, Real(0), 2, 4 * pi() / 5, 0),
        record(1, 2, F, 2 * pi(), 3, 4 * pi() / 5, 1),
        record(2, 1, F, -pi(), -1, -pi() / 3, 2),
    };
  } else if (name == "swallowtail") {
    // f(t) = t^5 + (5/24)(4i-15) t^3 + (45/16)(2i-1) t^2 + (5/256)(101+168i) t
    spec.f = Polynomial{{Complex{},
                         Complex{Real(5) * 101 / 256, Real(5) * 168 / 256},
                         Complex{Real(-45) / 16, Real(45) * 2 / 16},
                         Complex{Real(5) * (-15) / 24, Real(5) * 4 / 24},
                         Complex{},
                         Complex(Real(1))}};
    spec.g = Polynomial{{Complex(Real(1))}};
    spec.saddles = {{1, Complex{Real(7) / 4, Real(-1) / 2}, 2, {}, {}},
                    {2, Complex{Real(-5) / 4, Real(-1) / 2}, 2, {}, {}},
                    {3, Complex{Real(-1) / 4, Real(1) / 2}, 3, {}, {}}};
    Real F12 = 9 * mp::sqrt(Real(109)) / 4;
    Real F13 = 125 * mp::sqrt(Real(5)) / 12;
    Real t12 = 3 * pi() - mp::atan(Real(10) / 3);
    Real t13 = 3 * pi() - mp::atan(Real(278) / 29);
    // arrival slopes from 2 pi alpha = theta + arg f^(omega_m)(t^(m)) + omega_m phi
    // with arg f''(t^(2)) = -pi/2 and arg f'''(t^(3)) = -pi + atan(1/3).
    Real phi12 = (mp::atan(Real(10) / 3) - pi() / 2) / 2;
    Real phi13 = (-2 * pi() + mp::atan(Real(278) / 29) - mp::atan(Real(1) / 3)) / 3;
    // third pair (3 -> 2): Stokes data for the shortest-path graph
    Complex d32 =
        spec.f.eval(spec.saddles[1].location) - spec.f.eval(spec.saddles[2].location);
    Real F32 = abs(d32);
    Real t32 = -arg(d32);
    Real phi32 = (-t32 + pi() / 2) / 2;  // alpha = 0, arg f''(t^(2)) = -pi/2
    spec.adjacency = {
        record(1, 2, F12, t12, 1, phi12, 0),
        record(1, 3, F13, t13, 0, phi13, 0),
        record(3, 2, F32, t32, 0, phi32, 0),
    };
  } else {
    throw std::invalid_argument("make_builtin: unknown builtin '" + name + "'");
  }
  validate_problem(spec, ctx);
  return spec;
}

// ---------------------------------------------------------------------------
// Stokes successor

StokesSuccessor stokes_successor(const AdjacencyRecord& rec, const Real& theta) {
  return stokes_successor(rec, theta, rec.source_alpha);
}

StokesSuccessor stokes_successor(const AdjacencyRecord& rec, const Real& theta,
                                 long alpha_cur) {
  long d = alpha_cur - rec.source_alpha;
  Real period = 2 * pi() * Real(static_cast<long>(rec.omega_from));
  Real base = rec.base_theta + 2 * pi() * Real(d);
  // smallest base + period*k strictly greater than theta
  Real k_real = mp::ceil((theta - base) / period);
  long k = k_real.convert_to<long>();
  Real theta_plus = base + period * Real(k);
  Real tol = mp::pow(Real(10), -static_cast<long>(Real::default_precision()) + 8);
  if (mp::abs(theta_plus - theta) <= tol * (1 + mp::abs(theta)) ||
      mp::abs(theta_plus - period - theta) <= tol * (1 + mp::abs(theta)))
    throw std::domain_error("stokes_successor: theta lies on a Stokes line");
  if (theta_plus <= theta) {
    theta_plus += period;
    ++k;
  }
  return {theta_plus, rec.base_alpha + d + static_cast<long>(rec.omega_from) * k};
}

// ---------------------------------------------------------------------------
// Truncation schedule

TruncationSchedule truncation_schedule(const ProblemSpec& spec, int start_id,
                                       int level, const Real& mod_z) {
  if (level < 0 || level > 3)
    throw std::invalid_argument("truncation_schedule: level must be 0..3");
  if (!(mod_z > 0))
    throw std::invalid_argument("truncation_schedule: mod_z must be positive");
  if (spec.adjacency.empty())
    throw std::invalid_argument("truncation_schedule: adjacency graph is empty");

  // shortest walk of (level+1) steps from start_id; walks may revisit saddles
  const int steps = level + 1;
  struct Node {
    Real dist;
    int prev_index;  // index into previous layer
    int id;
    bool reachable = false;
  };
  std::vector<std::vector<Node>> layers(steps + 1);
  std::vector<int> ids;
  for (const auto& s : spec.saddles) ids.push_back(s.id);
  auto index_of = [&](int id) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return static_cast<int>(i);
    return -1;
  };
  layers[0].resize(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i)
    layers[0][i] = {Real(0), -1, ids[i], ids[i] == start_id};
  for (int s = 1; s <= steps; ++s) {
    layers[s].resize(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      layers[s][i] = {Real(0), -1, ids[i], false};
    for (const auto& r : spec.adjacency) {
      int fi = index_of(r.from_id), ti = index_of(r.to_id);
      if (fi < 0 || ti < 0 || !layers[s - 1][fi].reachable) continue;
      Real cand = layers[s - 1][fi].dist + r.singulant.modulus;
      Node& dst = layers[s][ti];
      if (!dst.reachable || cand < dst.dist) {
        dst.dist = cand;
        dst.prev_index = fi;
        dst.reachable = true;
      }
    }
  }
  int best = -1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!layers[steps][i].reachable) continue;
    if (best < 0 || layers[steps][i].dist < layers[steps][best].dist)
      best = static_cast<int>(i);
  }
  if (best < 0)
    throw std::invalid_argument("truncation_schedule: no walk of required length exists");

  std::vector<int> chain(steps + 1);
  int cur = best;
  for (int s = steps; s >= 0; --s) {
    chain[s] = ids[cur];
    cur = layers[s][cur].prev_index;
  }

  TruncationSchedule out;
  out.level = level;
  out.chain = chain;
  out.path_length = layers[steps][best].dist;
  out.etas.resize(level + 1);
  out.counts.resize(level + 1);
  out.etas[0] = out.path_length;
  for (int j = 1; j <= level; ++j) {
    Real F{0};
    // weight of the edge m_{j-1} -> m_j used by the chain
    for (const auto& r : spec.adjacency)
      if (r.from_id == chain[j - 1] && r.to_id == chain[j]) {
        F = r.singulant.modulus;
        break;
      }
    Real eta = out.etas[j - 1] - F;
    if (eta < 0) eta = 0;
    out.etas[j] = eta;
  }
  for (int j = 0; j <= level; ++j) {
    Real nj = out.etas[j] * Real(static_cast<long>(spec.saddle(chain[j]).order_omega)) * mod_z;
    Real fl = mp::floor(nj);
    out.counts[j] = fl.convert_to<long>();
  }
  return out;
}

}  // namespace hyperasym
