#include <benchmark/benchmark.h>

#include <random>

#include "mpecpen/lcp_oracle.hpp"
#include "mpecpen/penalty_solver.hpp"
#include "mpecpen/problem_io.hpp"
#include "mpecpen/residuals.hpp"

using namespace mpecpen;

namespace {

MpecProblem fixture(const char* name) {
  return parse_problem_file(std::filesystem::path(MPECPEN_FIXTURE_DIR) / name);
}

LcpInstance random_lcp(int m, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix A(m, m);
  Vector q(m);
  for (int i = 0; i < m; ++i) {
    q[i] = u(gen);
    for (int j = 0; j < m; ++j) A(i, j) = u(gen);
  }
  return LcpInstance(A.transpose() * A + Matrix::Identity(m, m), q);
}

void BM_Enumerate(benchmark::State& state) {
  const LcpInstance lcp = random_lcp(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lcp_enumerate(lcp));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Enumerate)->DenseRange(4, 14, 2);

void BM_KktResidual(benchmark::State& state) {
  const auto p = fixture("lcp-param.mpec");
  const KktPoint z{Vector::Constant(1, 0.7), Vector::Constant(2, 0.3),
                   Vector::Constant(2, 0.1)};
  const ResidualSpec spec{ResidualKind::KktComposite, Norm::L2, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(penalized_objective(p, z, 4.0, spec));
}
BENCHMARK(BM_KktResidual);

void BM_SqrtGradient(benchmark::State& state) {
  const auto p = fixture("lcp-param.mpec");
  const KktPoint z{Vector::Constant(1, 0.7), Vector::Constant(2, 0.3),
                   Vector::Constant(2, 0.1)};
  for (auto _ : state) benchmark::DoNotOptimize(grad_penalized_sqrt(p, z, 4.0));
}
BENCHMARK(BM_SqrtGradient);

void BM_InnerMinimize(benchmark::State& state) {
  const auto p = fixture("lcp-param.mpec");
  const KktPoint z0 = default_start(p);
  const ResidualSpec spec{ResidualKind::KktComposite, Norm::L2, 0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(inner_minimize(p, 10.0, spec, z0, 1000, 1e-10));
  }
}
BENCHMARK(BM_InnerMinimize)->Unit(benchmark::kMillisecond);

void BM_Continuation(benchmark::State& state) {
  const auto p = fixture("lcp-param.mpec");
  for (auto _ : state) benchmark::DoNotOptimize(penalty_continuation(p, PenaltyConfig{}));
}
BENCHMARK(BM_Continuation)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
