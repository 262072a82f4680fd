#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "nnls/discretization.hpp"
#include "nnls/energy.hpp"
#include "nnls/linear_solve.hpp"
#include "nnls/nonlinearity.hpp"
#include "nnls/reduction.hpp"

using namespace nnls;

namespace {

Functional functional(int dim, int n) {
  PotentialSpec spec;
  spec.wells.push_back(WellGeometry{});
  auto pot = std::make_shared<const Potential>(build_potential(spec, build_grid(dim, 2.5, n)));
  return make_functional(pot, 0.2, NonlinParams{});
}

PairField bump(const GridSpec& g) {
  PairField p(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const Point x = g.point(j);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) r2 += x[a] * x[a];
    p.u[j] = 0.5 * std::exp(-r2 / 0.04);
    p.v[j] = 0.45 * std::exp(-r2 / 0.05);
  }
  p.u.zero_boundary();
  p.v.zero_boundary();
  return p;
}

void BM_HEval(benchmark::State& state) {
  const NonlinParams p;
  double s = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(h_tilde_eval(s, 0.25, p));
    s += 1e-9;
  }
}

void BM_Gradient(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Functional J = functional(dim, static_cast<int>(state.range(1)));
  const PairField p = bump(J.grid());
  for (auto _ : state) benchmark::DoNotOptimize(J_eps_grad(p, J));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(J.grid().size()));
}

void BM_Hvp(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Functional J = functional(dim, static_cast<int>(state.range(1)));
  const PairField p = bump(J.grid());
  const PairField d = bump(J.grid());
  for (auto _ : state) benchmark::DoNotOptimize(J_eps_hvp(p, d, J));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(J.grid().size()));
}

void BM_ShiftedSolve(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Functional J = functional(dim, static_cast<int>(state.range(1)));
  const Field rhs = bump(J.grid()).u;
  const Field shift(J.grid(), 0.5);
  const ShiftedOperator op{&J.V(), J.eps, 2.0, &shift};
  for (auto _ : state) benchmark::DoNotOptimize(solve_shifted(op, rhs, 1e-10));
}

void BM_Reduce(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const Functional J = functional(dim, static_cast<int>(state.range(1)));
  const PairField p = bump(J.grid());
  for (auto _ : state) benchmark::DoNotOptimize(reduce(p, J, {1e-10, 50}));
}

}  // namespace

BENCHMARK(BM_HEval);
BENCHMARK(BM_Gradient)->Args({1, 501})->Args({1, 2001})->Args({2, 101});
BENCHMARK(BM_Hvp)->Args({1, 501})->Args({1, 2001})->Args({2, 101});
BENCHMARK(BM_ShiftedSolve)->Args({1, 2001})->Args({2, 101})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Reduce)->Args({1, 501})->Args({2, 101})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
