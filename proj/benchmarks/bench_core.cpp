#include <benchmark/benchmark.h>

#include "ddsplit/assembly.hpp"
#include "ddsplit/schemes.hpp"
#include "ddsplit/solver.hpp"

namespace {

using namespace ddsplit;

struct Problem2D {
  Grid grid;
  CoefficientField coeff;
  Partition partition;
  SplitOperator split;
  Eigen::VectorXd u;

  explicit Problem2D(int n) {
    const double extents[] = {1.0, 1.0};
    const int nodes[] = {n, n};
    grid = build_grid(2, extents, nodes, BcKind::Dirichlet);
    CoefficientSpec spec;
    spec.lambda = [](double, double) { return 1.0; };
    coeff = sample_coefficients(grid, spec);
    partition = build_blocks(grid, {2, 2}, 0.25, RampKind::Linear);
    split = assemble_split(grid, coeff, partition);
    split.grid = &grid;
    u = Eigen::VectorXd::Ones(grid.node_count());
  }
};

void BM_assemble_split(benchmark::State& state) {
  Problem2D p(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_split(p.grid, p.coeff, p.partition));
}
BENCHMARK(BM_assemble_split)->Arg(33)->Arg(65);

void BM_factorize(benchmark::State& state) {
  Problem2D p(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ResolventFactor factor(p.split.parts[0], 0.01);
    benchmark::DoNotOptimize(factor);
  }
}
BENCHMARK(BM_factorize)->Arg(33)->Arg(65);

void BM_additive_step(benchmark::State& state) {
  Problem2D p(static_cast<int>(state.range(0)));
  const double h = 0.01;
  FactorCache cache;
  std::vector<FactorPtr> factors;
  for (const auto& part : p.split.parts)
    factors.push_back(cache.get(part, h * p.split.q()));
  State s{p.u, 0.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(step_additive(s, h, factors));
}
BENCHMARK(BM_additive_step)->Arg(33)->Arg(65);

void BM_fscn_step(benchmark::State& state) {
  Problem2D p(static_cast<int>(state.range(0)));
  const double h = 0.01;
  FactorCache cache;
  std::vector<FactorPtr> factors;
  std::vector<const SparseOperator*> parts;
  for (const auto& part : p.split.parts) {
    parts.push_back(&part);
    factors.push_back(cache.get(part, 0.5 * h));
  }
  State s{p.u, 0.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(step_fscn(s, h, parts, factors));
}
BENCHMARK(BM_fscn_step)->Arg(33)->Arg(65);

}  // namespace

BENCHMARK_MAIN();
