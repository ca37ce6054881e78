// Microbenchmarks for the hot paths: coefficient generation, hyperterminant
// evaluation, geometry quadrature, and whole expansion levels.  All cases run
// at 30 requested digits on the built-in problems.

#include "hyperasym/bounds.hpp"
#include "hyperasym/coeffs.hpp"
#include "hyperasym/engine.hpp"
#include "hyperasym/geometry.hpp"
#include "hyperasym/hyperterm.hpp"
#include "hyperasym/problem.hpp"

#include <benchmark/benchmark.h>

using namespace hyperasym;

namespace {

const PrecisionContext& ctx() {
  static PrecisionContext c(30);
  return c;
}

const ProblemSpec& pearcey() {
  static ScopedPrecision sp(ctx());
  static ProblemSpec spec = make_builtin("pearcey_cusp", ctx());
  return spec;
}

const ProblemSpec& degenerate() {
  static ScopedPrecision sp(ctx());
  static ProblemSpec spec = make_builtin("degenerate_3_5", ctx());
  return spec;
}

void bench_perron_coefficients(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = pearcey();
  for (auto _ : state) {
    CoefficientTable t =
        perron_coefficients(spec, 1, 0, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(t.values.back());
  }
}
BENCHMARK(bench_perron_coefficients)->Arg(16)->Arg(64);

void bench_trapezoidal_coefficients(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = pearcey();
  for (auto _ : state) {
    CoefficientTable t =
        trapezoidal_coefficients(spec, 1, 0, 16, Real(0), 256);
    benchmark::DoNotOptimize(t.values.back());
  }
}
BENCHMARK(bench_trapezoidal_coefficients);

void bench_hyperterminant(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  long cols = state.range(0);
  PhasedComplex z{Real(1), -pi() / 4};
  HyperterminantArgs args;
  // argument shapes matching the level-1..3 pearcey re-expansions
  args.columns.push_back({Real(7), 2, PhasedComplex{Real(27) / 4, pi() / 2}});
  if (cols >= 2)
    args.columns.push_back({Real(5), 2, PhasedComplex{Real(27) / 4, -pi() / 2}});
  if (cols >= 3)
    args.columns.push_back({Real(4), 2, PhasedComplex{Real(27) / 4, -3 * pi() / 2}});
  for (auto _ : state) {
    HyperterminantResult r = hyperterminant(z, args, 40);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bench_hyperterminant)->Arg(1)->Arg(2)->Arg(3);

void bench_reference_quadrature(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = pearcey();
  PhasedComplex z{Real(1), -pi() / 4};
  for (auto _ : state) {
    ReferenceResult r = reference_T(spec, 1, 0, z);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bench_reference_quadrature);

void bench_abs_contour_integral(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = pearcey();
  for (auto _ : state) {
    Real v = abs_contour_integral(spec, 1, 2, 13, pi() / 2);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(bench_abs_contour_integral);

void bench_expand_level(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = degenerate();
  int level = static_cast<int>(state.range(0));
  PhasedComplex z{Real(1), -pi() / 4};
  for (auto _ : state) {
    ExpansionLedger ledger = hyper_expand(spec, 1, 0, z, level);
    benchmark::DoNotOptimize(ledger.partial_sum);
  }
}
BENCHMARK(bench_expand_level)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void bench_remainder_bound(benchmark::State& state) {
  ScopedPrecision sp(ctx());
  const ProblemSpec& spec = pearcey();
  PhasedComplex z{Real(1), -pi() / 4};
  for (auto _ : state) {
    RemainderBoundResult rb = remainder_bound(spec, 1, 0, z, 13);
    benchmark::DoNotOptimize(rb.total);
  }
}
BENCHMARK(bench_remainder_bound)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
