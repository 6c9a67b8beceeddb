#include <benchmark/benchmark.h>

#include "sie/exceptional.hpp"
#include "sie/harness.hpp"
#include "sie/linalg.hpp"
#include "sie/multidim.hpp"
#include "sie/trig.hpp"

using namespace sie;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_BlockJacobiSweep(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  Mat C = Mat::Random(n, n) * 0.1 / n;
  C.diagonal().array() += 2.0;
  const BlockPartition part(C, 8);
  const Vec rhs = Vec::Ones(n);
  Vec x = Vec::Zero(n);
  for (auto _ : st) {
    x = st.range(1) ? block_jacobi_sweep(part, rhs, x) : block_jacobi_sweep_serial(part, rhs, x);
    benchmark::DoNotOptimize(x.data());
  }
}

void BM_MultiplierMatrix(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const rvec rows = shifted_nodes(n).angles();
  for (auto _ : st) {
    Mat M = multiplier_matrix(n, rows, [](int k) { return cplx(sign_mode(k)); }, 0.0, exec_of(st));
    benchmark::DoNotOptimize(M.data());
  }
}

void BM_AssembleGrid2D(benchmark::State& st) {
  const int N = static_cast<int>(st.range(0));
  Problem2D p = multidim_default_problem();
  p.f = [](double, double) { return cplx(1.0); };
  const Grid2D g = build_grid(N, 1.0, 1.0 / (N + 2), 1.0 / (N + 2));
  for (auto _ : st) {
    DenseSystem sys = assemble_grid(p, g, exec_of(st));
    benchmark::DoNotOptimize(sys.C.data());
  }
}

void BM_AssembleCircleExceptional(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  ExceptionalProblem p = exceptional_default_problem(Geometry::circle);
  p.f = [](double) { return cplx(1.0); };
  const ShiftedScheme sc = circle_scheme(n, pi / (4 * n));
  for (auto _ : st) {
    DenseSystem sys = assemble_circle_exceptional(p, sc, exec_of(st));
    benchmark::DoNotOptimize(sys.C.data());
  }
}

}  // namespace

// second argument: 0 serial reference, 1 OpenMP
BENCHMARK(BM_BlockJacobiSweep)->ArgsProduct({{256, 1024}, {0, 1}});
BENCHMARK(BM_MultiplierMatrix)->ArgsProduct({{32, 128}, {0, 1}});
BENCHMARK(BM_AssembleGrid2D)->ArgsProduct({{8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssembleCircleExceptional)->ArgsProduct({{64, 256}, {0, 1}});

BENCHMARK_MAIN();
