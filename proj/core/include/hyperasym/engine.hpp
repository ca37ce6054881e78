#pragma once
// Hyperasymptotic expansion engine: Level 0-3 assembly of T^(n)(z; alpha)
// from coefficient tables and generalised hyperterminants, late-coefficient
// prediction by resurgence, and the algebraic adjacency-constant solver.

#include "hyperasym/hyperterm.hpp"
#include "hyperasym/problem.hpp"

#include <utility>
#include <vector>

namespace hyperasym {

// One recorded contribution.  level_index 0 terms are the Poincare sum
// T_r z^{-r/omega}; higher levels hold one entry per (chain, branch, r)
// with the value carrying all prefactors and the branch sign.
struct LedgerTerm {
  int level_index = 0;
  std::vector<int> chain;  // saddle ids m_0 .. m_level_index, chain[0] = n
  long r = 0;
  Complex value;
};

// Branch bookkeeping for one (chain, branch) group.  branch_bits holds the
// b_j in {0, 1} chosen at chain steps j >= 2; bit 1 adds +1 to every
// subsequent arrival alpha, shifts every subsequent singulant phase by
// -2*pi, and flips the sign.  thetas/alphas are the arrival chains after
// those shifts; sign = (-1)^(sum of bits).
struct BranchRecord {
  std::vector<int> chain;
  std::vector<int> branch_bits;
  std::vector<Real> thetas;
  std::vector<long> alphas;
  int sign = 1;
};

// A replayable hyperterminant invocation: value is what the engine used,
// weight is the full multiplier (prefactor * sign * bold-T coefficient), so
// the recorded contribution is weight * value.
struct HyperterminantCall {
  PhasedComplex z;
  HyperterminantArgs args;
  Complex weight;
  Complex value;
  unsigned series_terms = 0;  // as passed to hyperterminant
};

struct ExpansionLedger {
  int level = 0;
  TruncationSchedule schedule;
  std::vector<LedgerTerm> terms;
  Complex partial_sum;  // exact running sum of terms, in recorded order
  std::vector<BranchRecord> branch_tree;
  std::vector<HyperterminantCall> calls;  // aligned with the level >= 1 terms
};

// Truncated Poincare expansion sum_{r<N} T_r^(n)(alpha) z^{-r/omega_n}.
// theta = arg z must lie strictly between Stokes angles of every declared
// adjacency family of t^(n) (std::domain_error otherwise).
ExpansionLedger expand_level0(const ProblemSpec& spec, int n, long alpha,
                              const PhasedComplex& z, long N);

// Level 0..3 hyperasymptotic approximation.  Truncation counts come from
// truncation_schedule(spec, n, level, |z|) unless schedule_override is
// given; chains that deviate from the schedule walk get counts from the
// eta-recurrence seeded by the same eta_0.  Hyperterminant domain errors
// are rethrown with the offending chain appended to the message.
ExpansionLedger hyper_expand(const ProblemSpec& spec, int n, long alpha,
                             const PhasedComplex& z, int level,
                             const TruncationSchedule* schedule_override = nullptr);

// Re-evaluates every recorded hyperterminant call, re-sums all terms in the
// recorded order, and returns the sum; equals partial_sum for an untampered
// ledger.
Complex replay_ledger(const ExpansionLedger& ledger);

// Resurgence prediction of the late coefficient T_N^(n)(alpha) from the
// adjacent-saddle expansions: sum over the given (m, count) pairs of
// (2 pi i omega_m)^-1 sum_{r<count} bold-T_r^(m)(alpha+)
// e^{i theta+ M} Gamma(M) / |F_nm|^M with M = (N+1)/omega_n - (r+1)/omega_m.
// An empty list predicts 0.
Complex late_coefficients(const ProblemSpec& spec, int n, long alpha, long N,
                          const std::vector<std::pair<int, long>>& inner_counts);

// Optimal inner truncation counts for the prediction above, one pair per
// declared adjacent saddle of t^(n): count = eta_1 omega_m / (eta_0 omega_n) N
// with eta_0 the shortest two-step walk length and eta_1 = eta_0 - |F_nm|.
std::vector<std::pair<int, long>> late_inner_counts(const ProblemSpec& spec,
                                                    int n, long N);

struct AdjacencyConstant {
  int to_id = 0;
  Complex value;
  long rounded = 0;
};

struct AdjacencyFit {
  std::vector<AdjacencyConstant> constants;
  Real residual;          // |A k - t| / |t|
  Real condition_number;  // least-squares design matrix, 2-norm estimate
};

struct ConditioningError : std::runtime_error {
  Real condition_number;
  ConditioningError(const std::string& what, Real cond)
      : std::runtime_error(what), condition_number(std::move(cond)) {}
};

// Solves for the constant prefactors K_nm of the candidate pairs by
// equating computed coefficients T_N^(n)(alpha) at the given orders to the
// late-coefficient blocks with the remainder set to zero; least squares
// when overdetermined.  Requires orders.size() >= candidates.size().
AdjacencyFit adjacency_constants(const ProblemSpec& spec, int n, long alpha,
                                 const std::vector<int>& candidates,
                                 const std::vector<long>& orders);

}  // namespace hyperasym
