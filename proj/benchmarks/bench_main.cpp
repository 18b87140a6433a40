// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>

#include "iclab/evaluation.hpp"
#include "iclab/features.hpp"
#include "iclab/maxmargin.hpp"
#include "iclab/pretrain.hpp"

using namespace iclab;

namespace {

std::vector<PretrainTask> make_batch(std::size_t d, std::size_t b) {
    TaskParams p;
    p.dim = d;
    p.n_pretrain_tasks = b;
    p.pretrain_radius = 5.0 * std::sqrt(static_cast<double>(d));
    return gen_pretrain_batch(p, RngStream(0, stream_tag::pretrain), ContextStorage::discard);
}

void BM_Gram(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto batch = make_batch(d, d);
    for (auto _ : state) benchmark::DoNotOptimize(build_gram(batch));
}
BENCHMARK(BM_Gram)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TrainSteps(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto batch = make_batch(d, d);
    TrainConfig c;
    c.steps = 100;
    for (auto _ : state) benchmark::DoNotOptimize(train(c, batch));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_TrainSteps)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_DualSolve(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const auto batch = make_batch(d, d);
    for (auto _ : state) benchmark::DoNotOptimize(solve_max_margin(batch));
}
BENCHMARK(BM_DualSolve)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    TaskParams p;
    p.dim = d;
    p.test_radius = std::pow(static_cast<double>(d), 0.35);
    const Preconditioner w(Matrix::identity(d));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(w, p, 200, RngStream(0, stream_tag::evaluation)));
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
