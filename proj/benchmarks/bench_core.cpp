#include <benchmark/benchmark.h>

#include <random>

#include "ctx/drift.hpp"
#include "ctx/fingerprint.hpp"
#include "ctx/replay.hpp"
#include "ctx/scenario.hpp"
#include "ctx/similarity.hpp"

namespace {

ctx::ScenarioOutput three_segment_scenario() {
    ctx::ScenarioConfig cfg;
    cfg.segments = {{ctx::RobotContext::Robo1, 500},
                    {ctx::RobotContext::Robo2, 500},
                    {ctx::RobotContext::Robo1, 500}};
    cfg.seed = 42;
    return ctx::generate(cfg);
}

void BM_Fingerprint(benchmark::State& state) {
    const auto snapshot = ctx::build_snapshot(ctx::RobotContext::Robo1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ctx::fingerprint(snapshot));
    }
}
BENCHMARK(BM_Fingerprint);

void BM_Similarity(benchmark::State& state) {
    const auto a = ctx::build_snapshot(ctx::RobotContext::Robo1);
    const auto b = ctx::build_snapshot(ctx::RobotContext::Robo2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ctx::sim(a, b));
    }
}
BENCHMARK(BM_Similarity);

void BM_StumpTrain(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(7);
    std::vector<ctx::Sample> samples;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = ctx::uniform53(rng);
        samples.push_back({{x}, x < 0.4});
    }
    const ctx::Dataset data(std::move(samples));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ctx::train(data, ctx::ModelKind::ThresholdStump));
    }
}
BENCHMARK(BM_StumpTrain)->Arg(100)->Arg(1000)->Arg(10000);

void BM_DetectorUpdates(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::vector<bool> errors(10000);
    for (std::size_t i = 0; i < errors.size(); ++i) errors[i] = ctx::uniform53(rng) < 0.05;
    for (auto _ : state) {
        ctx::DdmDetector ddm;
        ctx::TwoWindowTest window;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            benchmark::DoNotOptimize(ddm.update(i, errors[i]));
            benchmark::DoNotOptimize(window.update(i, errors[i]));
        }
    }
    state.SetItemsProcessed(state.iterations() * errors.size());
}
BENCHMARK(BM_DetectorUpdates);

void BM_ScenarioGenerate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(three_segment_scenario());
    }
}
BENCHMARK(BM_ScenarioGenerate);

void BM_Replay(benchmark::State& state) {
    const auto out = three_segment_scenario();
    ctx::History history;
    for (const auto& snapshot : out.snapshots) history = history.append(snapshot);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ctx::replay(history, out.stream));
    }
    state.SetItemsProcessed(state.iterations() * out.stream.size());
}
BENCHMARK(BM_Replay);

}  // namespace

BENCHMARK_MAIN();
