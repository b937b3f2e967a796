// Serial reference vs OpenMP path for the per-Fourier-slice kernels and one
// solver sweep. Run with OMP_NUM_THREADS set to compare scaling.
#include <mlcp/eval_data.hpp>
#include <mlcp/lrtc.hpp>
#include <mlcp/tensor_core.hpp>

#include <benchmark/benchmark.h>

using namespace mlcp;

namespace {

Exec exec_of(const benchmark::State &state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void label(benchmark::State &state) { state.SetLabel(state.range(1) ? "openmp" : "serial"); }

void BM_TProduct(benchmark::State &state) {
    const auto n = std::size_t(state.range(0));
    const auto a = gen_lowrank({n, n, n}, n / 2, 1), b = gen_lowrank({n, n, n}, n / 2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(t_product(a, b, exec_of(state)));
    label(state);
}

void BM_TSvd(benchmark::State &state) {
    const auto n = std::size_t(state.range(0));
    const auto a = gen_lowrank({n, n, n}, n, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(t_svd(a, exec_of(state)));
    label(state);
}

void BM_Prox(benchmark::State &state) {
    const auto n = std::size_t(state.range(0));
    const auto y = gen_lowrank({n, n, n}, n, 4);
    const Eigen::MatrixXd lb = Eigen::MatrixXd::Ones(Eigen::Index(n), Eigen::Index(n));
    for (auto _ : state)
        benchmark::DoNotOptimize(prox_ewt_lgamma(y, lb, 1e4, 1e-2, 1.0, ShrinkRule::strict, exec_of(state)));
    label(state);
}

void BM_CompletionSweep(benchmark::State &state) {
    const auto n = std::size_t(state.range(0));
    const auto t = gen_lowrank({n, n, n}, 3, 5);
    const auto mask = gen_mask(t.shape(), 0.3, 5);
    SolverConfig cfg;
    cfg.exec = exec_of(state);
    for (auto _ : state) {
        state.PauseTiming();
        LrtcState s = lrtc_init(t, mask, cfg);
        state.ResumeTiming();
        benchmark::DoNotOptimize(lrtc_sweep(s, cfg));
    }
    label(state);
}

void sizes(benchmark::internal::Benchmark *b) {
    for (int n : {16, 32, 64})
        for (int par : {0, 1})
            b->Args({n, par});
}

} // namespace

BENCHMARK(BM_TProduct)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TSvd)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Prox)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompletionSweep)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
