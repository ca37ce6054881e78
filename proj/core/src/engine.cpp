#include "hyperasym/engine.hpp"

#include "hyperasym/coeffs.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hyperasym {
namespace {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Shared helpers

Complex two_pi_i_pow(int k) {
  Complex unit = 2 * pi() * i_unit();
  Complex out{Real(1)};
  for (int j = 0; j < k; ++j) out *= unit;
  return out;
}

// Coefficient tables keyed by (saddle, alpha), grown on demand.
class CoeffCache {
 public:
  explicit CoeffCache(const ProblemSpec& spec) : spec_(spec) {}

  const std::vector<Complex>& table(int id, long alpha, std::size_t count) {
    auto key = std::make_pair(id, alpha);
    auto it = tables_.find(key);
    if (it == tables_.end() || it->second.size() < count) {
      CoefficientTable t = perron_coefficients(spec_, id, alpha, count);
      it = tables_.insert_or_assign(key, std::move(t.values)).first;
    }
    return it->second;
  }

  Complex bold_T(int id, long alpha, std::size_t r, std::size_t count) {
    return table(id, alpha, count)[r] - table(id, alpha + 1, count)[r];
  }

 private:
  const ProblemSpec& spec_;
  std::map<std::pair<int, long>, std::vector<Complex>> tables_;
};

// Hyperterminant evaluation with the collinear-phase fallback.
HyperterminantResult eval_F(const PhasedComplex& z,
                            const HyperterminantArgs& args,
                            unsigned series_terms) {
  try {
    return hyperterminant(z, args, series_terms);
  } catch (const CollinearPhaseError&) {
    std::vector<Real> eps;
    Real e("0.01");
    for (int i = 0; i < 9; ++i) {
      eps.push_back(e);
      e /= 2;
    }
    return hyperterminant_collinear(z, args, eps, series_terms);
  }
}

std::string chain_label(const std::vector<int>& chain) {
  std::ostringstream out;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) out << "->";
    out << chain[i];
  }
  return out.str();
}

std::vector<int> sorted_adjacent_ids(const ProblemSpec& spec, int from) {
  std::vector<int> ids;
  for (const AdjacencyRecord* rec : spec.records_from(from))
    if (std::find(ids.begin(), ids.end(), rec->to_id) == ids.end())
      ids.push_back(rec->to_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------
// Chain assembly

struct Assembly {
  const ProblemSpec& spec;
  PhasedComplex z;
  int start_id;
  int level;
  const TruncationSchedule& schedule;
  Real eta0;
  Real abs_tolerance;  // series truncation budget per recorded term
  CoeffCache cache;
  Complex level_prefactor;  // z^{(1 - N_0)/omega_n}
  ExpansionLedger& ledger;

  long count_for(const std::vector<int>& chain, std::size_t j,
                 const Real& eta_j) const {
    // schedule counts apply along the schedule walk; off-walk chains use the
    // eta recurrence with the shared eta_0
    if (j < schedule.counts.size() && chain.size() <= schedule.chain.size() &&
        std::equal(chain.begin(), chain.end(), schedule.chain.begin()))
      return schedule.counts[j];
    Real n_real = mp::floor(eta_j *
                            Real(static_cast<long>(
                                spec.saddle(chain[j]).order_omega)) *
                            z.modulus);
    return n_real.convert_to<long>();
  }

  // Emit every branch variant of the level-j contribution of `chain`
  // (length j + 1), then recurse one step deeper.
  void extend(std::vector<int>& chain, std::vector<Real>& thetas,
              std::vector<long>& alphas, std::vector<Real>& moduli,
              std::vector<long>& counts, const Real& eta_prev) {
    const std::size_t depth = chain.size() - 1;  // completed chain steps
    if (static_cast<int>(depth) >= level) return;
    const Real theta_cur = depth == 0 ? z.phase : thetas.back();
    const long alpha_cur = depth == 0 ? start_alpha : alphas.back();
    for (int to : sorted_adjacent_ids(spec, chain.back())) {
      const AdjacencyRecord& rec = spec.record_for(chain.back(), to, alpha_cur);
      StokesSuccessor succ = stokes_successor(rec, theta_cur, alpha_cur);
      Real eta_j = eta_prev - rec.singulant.modulus;
      if (eta_j < 0) eta_j = 0;
      chain.push_back(to);
      thetas.push_back(succ.theta_plus);
      alphas.push_back(succ.alpha_plus);
      moduli.push_back(rec.singulant.modulus);
      counts.push_back(count_for(chain, depth + 1, eta_j));
      emit(chain, thetas, alphas, moduli, counts);
      if (eta_j > 0)
        extend(chain, thetas, alphas, moduli, counts, eta_j);
      chain.pop_back();
      thetas.pop_back();
      alphas.pop_back();
      moduli.pop_back();
      counts.pop_back();
    }
  }

  void emit(const std::vector<int>& chain, const std::vector<Real>& thetas,
            const std::vector<long>& alphas, const std::vector<Real>& moduli,
            const std::vector<long>& counts) {
    const std::size_t j = chain.size() - 1;  // level index of this group
    const long r_count = counts[j];
    if (r_count <= 0) return;

    Complex prefactor = level_prefactor / two_pi_i_pow(static_cast<int>(j));
    for (std::size_t i = 1; i <= j; ++i)
      prefactor = prefactor /
                  Real(static_cast<long>(spec.saddle(chain[i]).order_omega));

    const unsigned omega_last = spec.saddle(chain[j]).order_omega;
    const unsigned omega_prev = spec.saddle(chain[j - 1]).order_omega;
    const Real m_head = Real(counts[j - 1] + 1) /
                        Real(static_cast<long>(omega_prev));

    // branch bits b_2 .. b_j, lexicographic
    const std::size_t bit_count = j >= 2 ? j - 1 : 0;
    for (std::size_t mask = 0; mask < (std::size_t(1) << bit_count); ++mask) {
      BranchRecord branch;
      branch.chain = chain;
      branch.thetas = thetas;
      branch.alphas = alphas;
      long shift = 0;
      for (std::size_t b = 0; b < bit_count; ++b) {
        // bit for chain step b + 2, MSB first so variants come out in
        // lexicographic order
        int bit = (mask >> (bit_count - 1 - b)) & 1;
        branch.branch_bits.push_back(bit);
        shift += bit;
        const std::size_t step = b + 1;  // index into thetas/alphas
        for (std::size_t i = step; i <= j - 1; ++i) {
          if (!bit) continue;
          branch.thetas[i] += 2 * pi();
          branch.alphas[i] += 1;
        }
      }
      // recompute cumulative shifts per column for the sigma phases
      std::vector<long> cum(j, 0);
      {
        long s = 0;
        for (std::size_t i = 0; i < j; ++i) {
          if (i >= 1) s += branch.branch_bits.empty()
                              ? 0
                              : branch.branch_bits[i - 1];
          cum[i] = s;
        }
      }
      branch.sign = (cum[j - 1] % 2 == 0) ? 1 : -1;
      ledger.branch_tree.push_back(branch);

      HyperterminantArgs args;
      args.columns.resize(j);
      for (std::size_t i = 1; i <= j; ++i) {
        HyperterminantColumn& col = args.columns[i - 1];
        const unsigned om_prev = spec.saddle(chain[i - 1]).order_omega;
        col.omega = om_prev;
        col.sigma = PhasedComplex{
            moduli[i - 1],
            pi() - thetas[i - 1] - 2 * pi() * Real(cum[i - 1])};
        if (i < j)
          col.M = Real(counts[i - 1] + 1) / Real(static_cast<long>(om_prev)) -
                  Real(counts[i]) /
                      Real(static_cast<long>(spec.saddle(chain[i]).order_omega));
      }

      const long alpha_final = alphas[j - 1] + cum[j - 1];
      const Real sign_real(branch.sign);
      for (long r = 0; r < r_count; ++r) {
        args.columns[j - 1].M =
            m_head - Real(r + 1) / Real(static_cast<long>(omega_last));
        Complex weight = prefactor * sign_real *
                         cache.bold_T(chain[j], alpha_final,
                                      static_cast<std::size_t>(r),
                                      static_cast<std::size_t>(r_count));
        // evaluate with the short series first; escalate only when the
        // truncation is not already far below the schedule's own error floor
        unsigned terms = 40;
        HyperterminantResult f;
        try {
          f = eval_F(z, args, terms);
          if (f.truncation_estimate * abs(weight * f.value) > abs_tolerance) {
            terms = 80;
            f = eval_F(z, args, terms);
          }
        } catch (const std::logic_error& e) {
          throw std::domain_error(std::string(e.what()) + " [chain " +
                                  chain_label(chain) + ", r = " +
                                  std::to_string(r) + "]");
        }
        Complex value = weight * f.value;
        ledger.terms.push_back({static_cast<int>(j), chain, r, value});
        ledger.calls.push_back({z, args, weight, f.value, terms});
        ledger.partial_sum += value;
      }
    }
  }

  long start_alpha = 0;
};

void check_off_stokes(const ProblemSpec& spec, int n, long alpha,
                      const Real& theta) {
  for (int to : sorted_adjacent_ids(spec, n)) {
    const AdjacencyRecord& rec = spec.record_for(n, to, alpha);
    stokes_successor(rec, theta, alpha);  // throws on a Stokes line
  }
}

void add_level0_terms(const ProblemSpec& spec, int n, long alpha,
                      const PhasedComplex& z, long count, CoeffCache& cache,
                      ExpansionLedger& ledger) {
  if (count <= 0) return;  // empty sums are zero
  const unsigned omega = spec.saddle(n).order_omega;
  const std::vector<Complex>& t =
      cache.table(n, alpha, static_cast<std::size_t>(count));
  for (long r = 0; r < count; ++r) {
    Complex value =
        t[static_cast<std::size_t>(r)] *
        phased_pow(z, -Real(r) / Real(static_cast<long>(omega))).cartesian();
    ledger.terms.push_back({0, {n}, r, value});
    ledger.partial_sum += value;
  }
}

// ---------------------------------------------------------------------------
// Small complex linear algebra for the adjacency solver

using Matrix = std::vector<std::vector<Complex>>;

Real frobenius(const Matrix& m) {
  Real sum{0};
  for (const auto& row : m)
    for (const Complex& x : row) sum += norm(x);
  return mp::sqrt(sum);
}

Matrix invert(Matrix m, const Real& scale) {
  const std::size_t d = m.size();
  Matrix inv(d, std::vector<Complex>(d));
  for (std::size_t i = 0; i < d; ++i) inv[i][i] = Complex(Real(1));
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t pivot = c;
    for (std::size_t rw = c + 1; rw < d; ++rw)
      if (abs(m[rw][c]) > abs(m[pivot][c])) pivot = rw;
    if (abs(m[pivot][c]) <= machine_epsilon() * scale * 1000)
      throw ConditioningError(
          "adjacency_constants: singular design matrix (pivot " +
              abs(m[pivot][c]).str(3) + " against scale " + scale.str(3) + ")",
          scale / (abs(m[pivot][c]) + machine_epsilon() * scale));
    std::swap(m[c], m[pivot]);
    std::swap(inv[c], inv[pivot]);
    Complex p = m[c][c];
    for (std::size_t k = 0; k < d; ++k) {
      m[c][k] /= p;
      inv[c][k] /= p;
    }
    for (std::size_t rw = 0; rw < d; ++rw) {
      if (rw == c) continue;
      Complex factor = m[rw][c];
      for (std::size_t k = 0; k < d; ++k) {
        m[rw][k] -= factor * m[c][k];
        inv[rw][k] -= factor * inv[c][k];
      }
    }
  }
  return inv;
}

// One late-coefficient block: the pair-nm inner sum of the resurgence
// formula without the constant prefactor K.
Complex late_block(const ProblemSpec& spec, CoeffCache& cache, int n, int m,
                   long alpha, long order, long count) {
  const AdjacencyRecord& rec = spec.record_for(n, m, alpha);
  const long d = alpha - rec.source_alpha;
  const Real theta_plus = rec.base_theta + 2 * pi() * Real(d);
  const long alpha_plus = rec.base_alpha + d;
  const Real f_mod = rec.singulant.modulus;
  const unsigned omega_n = spec.saddle(n).order_omega;
  const unsigned omega_m = spec.saddle(m).order_omega;

  Complex sum{};
  for (long r = 0; r < count; ++r) {
    Real big_m = Real(order + 1) / Real(static_cast<long>(omega_n)) -
                 Real(r + 1) / Real(static_cast<long>(omega_m));
    Complex term = cache.bold_T(m, alpha_plus, static_cast<std::size_t>(r),
                                static_cast<std::size_t>(count)) *
                   polar(Real(1), theta_plus * big_m) * gamma(big_m) /
                   mp::pow(f_mod, big_m);
    sum += term;
  }
  return sum / (two_pi_i_pow(1) * Real(static_cast<long>(omega_m)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations

ExpansionLedger expand_level0(const ProblemSpec& spec, int n, long alpha,
                              const PhasedComplex& z, long N) {
  if (N < 0) throw std::invalid_argument("expand_level0: negative N");
  check_off_stokes(spec, n, alpha, z.phase);
  ExpansionLedger ledger;
  ledger.level = 0;
  ledger.schedule.level = 0;
  ledger.schedule.counts = {N};
  ledger.schedule.chain = {n};
  CoeffCache cache(spec);
  add_level0_terms(spec, n, alpha, z, N, cache, ledger);
  return ledger;
}

ExpansionLedger hyper_expand(const ProblemSpec& spec, int n, long alpha,
                             const PhasedComplex& z, int level,
                             const TruncationSchedule* schedule_override) {
  if (level < 0 || level > 3)
    throw std::invalid_argument("hyper_expand: level must be 0..3");
  if (z.modulus <= 0)
    throw std::invalid_argument("hyper_expand: |z| must be positive");
  check_off_stokes(spec, n, alpha, z.phase);

  ExpansionLedger ledger;
  ledger.level = level;
  ledger.schedule = schedule_override
                        ? *schedule_override
                        : truncation_schedule(spec, n, level, z.modulus);
  if (ledger.schedule.counts.empty())
    throw std::invalid_argument("hyper_expand: schedule has no counts");
  const long n0 = ledger.schedule.counts[0];
  const unsigned omega_n = spec.saddle(n).order_omega;
  Real eta0 = ledger.schedule.etas.empty()
                  ? Real(n0) / (Real(static_cast<long>(omega_n)) * z.modulus)
                  : ledger.schedule.etas[0];

  Assembly assembly{spec,
                    z,
                    n,
                    level,
                    ledger.schedule,
                    eta0,
                    Real(0),
                    CoeffCache(spec),
                    phased_pow(z, Real(1 - n0) /
                                      Real(static_cast<long>(omega_n)))
                        .cartesian(),
                    ledger};
  assembly.start_alpha = alpha;

  add_level0_terms(spec, n, alpha, z, n0, assembly.cache, ledger);

  // budget for the hyperterminant series truncation of one term: well below
  // the superasymptotic floor e^{-eta_0 |z|} of this schedule, relative to
  // the magnitude of the expansion itself
  Real scale = abs(ledger.partial_sum);
  if (scale == 0) scale = Real(1);
  assembly.abs_tolerance =
      scale * mp::exp(-eta0 * z.modulus) * mp::pow(Real(10), -8);

  std::vector<int> chain{n};
  std::vector<Real> thetas;
  std::vector<long> alphas;
  std::vector<Real> moduli;
  std::vector<long> counts{n0};
  assembly.extend(chain, thetas, alphas, moduli, counts, eta0);
  return ledger;
}

Complex replay_ledger(const ExpansionLedger& ledger) {
  Complex sum{};
  std::size_t call_index = 0;
  for (const LedgerTerm& term : ledger.terms) {
    if (term.level_index == 0) {
      sum += term.value;
      continue;
    }
    if (call_index >= ledger.calls.size())
      throw std::invalid_argument("replay_ledger: missing recorded calls");
    const HyperterminantCall& call = ledger.calls[call_index++];
    sum += call.weight * eval_F(call.z, call.args, call.series_terms).value;
  }
  if (call_index != ledger.calls.size())
    throw std::invalid_argument("replay_ledger: unused recorded calls");
  return sum;
}

Complex late_coefficients(const ProblemSpec& spec, int n, long alpha, long N,
                          const std::vector<std::pair<int, long>>& inner_counts) {
  CoeffCache cache(spec);
  Complex sum{};
  for (const auto& [m, count] : inner_counts)
    sum += late_block(spec, cache, n, m, alpha, N, count);
  return sum;
}

std::vector<std::pair<int, long>> late_inner_counts(const ProblemSpec& spec,
                                                    int n, long N) {
  std::vector<std::pair<int, long>> out;
  std::vector<int> adjacent = sorted_adjacent_ids(spec, n);
  if (adjacent.empty()) return out;
  const Real eta0 = truncation_schedule(spec, n, 1, Real(1)).path_length;
  const unsigned omega_n = spec.saddle(n).order_omega;
  for (int m : adjacent) {
    const AdjacencyRecord& rec = spec.record_for(n, m, 0);
    Real eta1 = eta0 - rec.singulant.modulus;
    if (eta1 < 0) eta1 = 0;
    Real count =
        mp::floor(eta1 * Real(static_cast<long>(spec.saddle(m).order_omega)) /
                  (eta0 * Real(static_cast<long>(omega_n))) * Real(N));
    out.emplace_back(m, count.convert_to<long>());
  }
  return out;
}

AdjacencyFit adjacency_constants(const ProblemSpec& spec, int n, long alpha,
                                 const std::vector<int>& candidates,
                                 const std::vector<long>& orders) {
  if (candidates.empty())
    throw std::invalid_argument("adjacency_constants: no candidate pairs");
  if (orders.size() < candidates.size())
    throw std::invalid_argument(
        "adjacency_constants: need at least as many orders as candidates");
  const long min_order = *std::min_element(orders.begin(), orders.end());
  const long max_order = *std::max_element(orders.begin(), orders.end());
  if (min_order < 1)
    throw std::invalid_argument("adjacency_constants: orders must be >= 1");

  CoeffCache cache(spec);
  std::map<int, long> counts;
  for (const auto& [m, count] : late_inner_counts(spec, n, min_order))
    counts[m] = count;

  const std::size_t p = candidates.size();
  const std::size_t q = orders.size();
  Matrix a(q, std::vector<Complex>(p));
  std::vector<Complex> b(q);
  const std::vector<Complex>& t_table =
      cache.table(n, alpha, static_cast<std::size_t>(max_order) + 1);
  for (std::size_t i = 0; i < q; ++i) {
    b[i] = t_table[static_cast<std::size_t>(orders[i])];
    for (std::size_t j = 0; j < p; ++j) {
      auto it = counts.find(candidates[j]);
      long count = it == counts.end() ? 0 : it->second;
      if (count < 1) count = 1;
      a[i][j] = late_block(spec, cache, n, candidates[j], alpha, orders[i],
                           count);
    }
  }

  // normal equations A^H A k = A^H b
  Matrix h(p, std::vector<Complex>(p));
  std::vector<Complex> rhs(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < q; ++k) h[i][j] += conj(a[k][i]) * a[k][j];
    for (std::size_t k = 0; k < q; ++k) rhs[i] += conj(a[k][i]) * b[k];
  }
  Matrix hinv = invert(h, frobenius(h));
  std::vector<Complex> solution(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) solution[i] += hinv[i][j] * rhs[j];

  Real cond = mp::sqrt(frobenius(h) * frobenius(hinv));
  Real cond_limit = mp::pow(Real(10), Real(Real::default_precision()) / 3);
  if (cond > cond_limit)
    throw ConditioningError(
        "adjacency_constants: ill-conditioned system (condition " +
            cond.str(3) + ")",
        cond);

  Real res_sq{0}, b_sq{0};
  for (std::size_t k = 0; k < q; ++k) {
    Complex fit{};
    for (std::size_t j = 0; j < p; ++j) fit += a[k][j] * solution[j];
    res_sq += norm(fit - b[k]);
    b_sq += norm(b[k]);
  }

  AdjacencyFit fit;
  fit.residual = mp::sqrt(res_sq / b_sq);
  fit.condition_number = cond;
  for (std::size_t j = 0; j < p; ++j) {
    Real rounded = mp::round(solution[j].re);
    fit.constants.push_back(
        {candidates[j], solution[j], rounded.convert_to<long>()});
  }
  return fit;
}

}  // namespace hyperasym
