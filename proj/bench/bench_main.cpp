// Parallel kernels against their serial references.
//   meneuron_bench --benchmark_filter=Sweep
// Set OMP_NUM_THREADS to vary the parallel sweep.

#include <benchmark/benchmark.h>

#include "meneuron/characterization.hpp"
#include "meneuron/config.hpp"
#include "meneuron/integrator.hpp"
#include "meneuron/neuron.hpp"

using namespace meneuron;

namespace {

SweepOptions bench_options() {
    SweepOptions o = sweep_options(default_config());
    o.min_dwells = 50;
    return o;
}

const std::vector<double> kAxis{-0.2, 0.0, 0.2};

void BM_SweepSerial(benchmark::State& state) {
    const auto opt = bench_options();
    for (auto _ : state) benchmark::DoNotOptimize(sweep_grid_serial(kAxis, kAxis, default_config().device, opt));
    state.counters["cells"] = benchmark::Counter(9.0 * state.iterations(), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepParallel(benchmark::State& state) {
    auto opt = bench_options();
    opt.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_grid(kAxis, kAxis, default_config().device, opt));
    state.counters["cells"] = benchmark::Counter(9.0 * state.iterations(), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

// One Heun step through the fused kernel and through the reference llg_rhs.
void BM_HeunStepper(benchmark::State& state) {
    HeunStepper s(default_config().device, {0.1, 0.1}, 1e-13, 1);
    Vector3 m{0, 0, 1};
    long long k = 0;
    for (auto _ : state) {
        s.step(m, ++k);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_HeunStepper);

void BM_HeunStepReference(benchmark::State& state) {
    const DeviceParams p = default_config().device;
    GaussianStream noise(1);
    Vector3 m{0, 0, 1};
    for (auto _ : state) {
        m = heun_step(m, {0.1, 0.1}, 1e-13, noise, p);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_HeunStepReference);

NeuronLUT bench_lut() {
    const std::vector<double> a{-1.0, 1.0};
    return NeuronLUT(a, a, std::vector<double>(4, 7e-10), std::vector<double>(4, 7e-10));
}

// 1 us of simulated time in each model.
void BM_LlgMicrosecond(benchmark::State& state) {
    SimConfig sc = default_config().sim;
    sc.t_max = 1e-6;
    sc.record_stride = 1000;
    for (auto _ : state) benchmark::DoNotOptimize(run_trajectory(sc, {0, 0}, default_config().device));
}
BENCHMARK(BM_LlgMicrosecond)->Unit(benchmark::kMillisecond);

void BM_MarkovMicrosecond(benchmark::State& state) {
    const NeuronLUT lut = bench_lut();
    const std::vector<DriveSegment> drive{{0.0, 0.0, 0.0}};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate_spike_train(lut, drive, 1e-6, ++seed, 1e-11));
}
BENCHMARK(BM_MarkovMicrosecond)->Unit(benchmark::kMicrosecond);

void BM_MarkovStepwiseMicrosecond(benchmark::State& state) {
    const NeuronLUT lut = bench_lut();
    const std::vector<DriveSegment> drive{{0.0, 0.0, 0.0}};
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate_spike_train_stepwise(lut, drive, 1e-6, ++seed, 1e-11));
}
BENCHMARK(BM_MarkovStepwiseMicrosecond)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
