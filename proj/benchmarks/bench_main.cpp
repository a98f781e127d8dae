#include "deslab/dataset.hpp"
#include "deslab/nn.hpp"
#include "deslab/plant.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace deslab;

namespace {

std::vector<WindowSample> make_samples(int count, int n, int width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<WindowSample> out;
    for (int i = 0; i < count; ++i) {
        WindowSample s;
        s.label.index = static_cast<int>(rng() % 8);
        for (int t = 0; t < n; ++t) {
            TimedIOVector v;
            v.t_rel = static_cast<double>(rng() % 2000) / 1000.0;
            for (int j = 0; j < width; ++j) v.values.push_back(rng() & 1);
            s.window.push_back(std::move(v));
        }
        out.push_back(std::move(s));
    }
    return out;
}

void bm_scan_step(benchmark::State& state) {
    PlantDescription plant = parse_plant(import_station_text());
    PlantState st = initial_state(plant, 1);
    ActiveFaultSet none;
    for (auto _ : state) {
        scan_step(plant, st, none);
        benchmark::DoNotOptimize(st.clock_ms);
    }
}
BENCHMARK(bm_scan_step);

void bm_run_scenario_10s(benchmark::State& state) {
    PlantDescription plant = parse_plant(import_station_text());
    for (auto _ : state) {
        ChangeLog log = run_scenario(plant, 10000, {}, 7);
        benchmark::DoNotOptimize(log.records.size());
    }
}
BENCHMARK(bm_run_scenario_10s);

void bm_forward_batch(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    ModelConfig cfg; // defaults: H=64, input 34, N=50
    Model m = init_model(cfg, 1);
    auto samples = make_samples(batch, cfg.window_length, cfg.input_dim - 1, 2);
    std::vector<const WindowSample*> ptrs;
    for (const auto& s : samples) ptrs.push_back(&s);
    Batch b = make_batch(m, ptrs);
    for (auto _ : state) {
        ForwardCache cache = forward_batch(m, b);
        benchmark::DoNotOptimize(cache.probs);
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(bm_forward_batch)->Arg(1)->Arg(32);

void bm_forward_backward_batch(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    ModelConfig cfg;
    Model m = init_model(cfg, 1);
    auto samples = make_samples(batch, cfg.window_length, cfg.input_dim - 1, 2);
    std::vector<const WindowSample*> ptrs;
    for (const auto& s : samples) ptrs.push_back(&s);
    Batch b = make_batch(m, ptrs);
    for (auto _ : state) {
        ForwardCache cache = forward_batch(m, b);
        Gradients g = backward_batch(m, b, cache);
        benchmark::DoNotOptimize(g.head_b);
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(bm_forward_backward_batch)->Arg(1)->Arg(32);

void bm_vectorize(benchmark::State& state) {
    PlantDescription plant = parse_plant(import_station_text());
    ChangeLog log = run_scenario(plant, 60000, {}, 7);
    for (auto _ : state) {
        auto vecs = vectorize(log);
        benchmark::DoNotOptimize(vecs.size());
    }
}
BENCHMARK(bm_vectorize);

} // namespace

BENCHMARK_MAIN();
