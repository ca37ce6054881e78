#pragma once
// Problem data model: polynomials f and g, saddle points with orders,
// adjacency records (Stokes data), Stokes-angle successors, and optimal
// truncation schedules.

#include "hyperasym/arith.hpp"

#include <string>
#include <vector>

namespace hyperasym {

// Polynomial with complex coefficients in ascending degree order.
struct Polynomial {
  std::vector<Complex> coeffs;  // coeffs[k] multiplies t^k

  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> c) : coeffs(std::move(c)) {}

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  Complex eval(const Complex& t) const;
  Polynomial derivative() const;
  // Coefficients of p(center + u) as a polynomial in u.
  Polynomial taylor_shift(const Complex& center) const;
};

struct SaddlePoint {
  int id = 0;
  Complex location;            // t^(n)
  unsigned order_omega = 1;    // omega_n; critical point order is omega_n - 1
  Complex critical_value;      // f_n = f(t^(n))
  Complex leading_derivative;  // f^(omega_n)(t^(n))
};

// Stokes data for the ordered saddle pair n -> m.  base_theta is one
// representative Stokes angle of the steepest-descent path family from
// t^(n) labelled by source_alpha; the full set for that family is
// base_theta + 2*pi*omega_n*k.  Other families are reached by shifting
// theta by 2*pi and alpha by 1 per unit of source alpha.
struct AdjacencyRecord {
  int from_id = 0;
  int to_id = 0;
  // modulus |f_m - f_n|; phase stored at the alpha_n = 0 reference,
  // i.e. -base_theta (the general phase is -theta_plus + 2*pi*alpha_n).
  PhasedComplex singulant;
  Real base_theta{0};
  long base_alpha = 0;
  Real arrival_phi{0};   // slope angle of the adjacent contour at t^(m), in (-pi, pi]
  long source_alpha = 0; // alpha label of the source path this record describes

  // Filled during validation for standalone use.
  unsigned omega_from = 1;
  unsigned omega_to = 1;
};

struct TruncationSchedule {
  int level = 0;
  std::vector<long> counts;  // N_0 ... N_level
  std::vector<Real> etas;    // eta_0 ... eta_level
  Real path_length{0};       // r_level^(n), shortest (level+1)-step walk
  std::vector<int> chain;    // saddle ids m_0 ... m_(level+1) along that walk
};

struct ProblemSpec {
  std::string name;
  unsigned precision_digits = 60;
  Polynomial f;
  Polynomial g;
  std::vector<SaddlePoint> saddles;
  std::vector<AdjacencyRecord> adjacency;

  const SaddlePoint& saddle(int id) const;
  std::vector<const AdjacencyRecord*> records_from(int id) const;
  // The record for pair n -> m whose source family matches alpha mod omega_n;
  // falls back to the unique record for the pair if none is tagged.
  const AdjacencyRecord& record_for(int from, int to, long source_alpha) const;
};

// Parse and validate a JSON problem document (schema: name, precision_digits,
// f/g coefficient lists as [re, im] decimal-string pairs, saddles, adjacency
// with angles given as decimal multiples of pi; adjacency entries may carry an
// optional "source_alpha" integer, default 0).
ProblemSpec load_problem(const std::string& json_text);

// Built-in problems: "pearcey_cusp", "degenerate_3_5", "swallowtail".
ProblemSpec make_builtin(const std::string& name, const PrecisionContext& ctx = {});

// Validates saddle invariants, Stokes conditions, alpha consistency, and
// recomputes singulants; fills derived fields.  Throws std::invalid_argument.
void validate_problem(ProblemSpec& spec, const PrecisionContext& ctx);

struct StokesSuccessor {
  Real theta_plus;
  long alpha_plus;
};

// Smallest Stokes angle of rec's path family strictly greater than theta:
// theta_plus = base_theta + 2*pi*omega_n*k, alpha_plus = base_alpha + omega_n*k.
// Throws std::domain_error if theta lies on a Stokes angle of the family.
StokesSuccessor stokes_successor(const AdjacencyRecord& rec, const Real& theta);

// As above for the source path labelled alpha_cur: the base data shifts by
// 2*pi (theta) and 1 (alpha) per unit of alpha_cur - rec.source_alpha.
StokesSuccessor stokes_successor(const AdjacencyRecord& rec, const Real& theta,
                                 long alpha_cur);

// Optimal truncation counts: eta_0 = r_level (shortest (level+1)-step walk in
// the adjacency graph weighted by singulant moduli), eta_j = max(0,
// eta_{j-1} - |F_{m_{j-1} m_j}|), N_j = floor(eta_j * omega_{m_j} * mod_z).
TruncationSchedule truncation_schedule(const ProblemSpec& spec, int start_id,
                                       int level, const Real& mod_z);

}  // namespace hyperasym
