#include <benchmark/benchmark.h>

#include "oraclenet/baselines.hpp"
#include "oraclenet/bench.hpp"
#include "oraclenet/train.hpp"

using namespace oraclenet;

namespace {

std::string env_file(const char* name) {
    return std::string(ORACLENET_BENCH_DATA_DIR) + "/envs/" + name + ".json";
}

// One recurrent step at the widths of the architecture presets.
void BM_LstmStep(benchmark::State& state) {
    const int layers = static_cast<int>(state.range(0)), hidden = static_cast<int>(state.range(1));
    const auto env = Environment::gridworld(100);
    const auto net = LstmNet::initialized(2, std::vector<int>(layers, hidden), normalizer_for(env), 1);
    auto s = LstmState::zeros(net);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(advance(net, s, x));
    }
}
BENCHMARK(BM_LstmStep)->Args({2, 128})->Args({4, 256})->Args({6, 256})->Args({6, 400});

void BM_AStarSimple1(benchmark::State& state) {
    const auto env = load_environment(env_file("simple1"));
    const GridGraph g(env, static_cast<int>(state.range(0)));
    const auto queries = draw_queries(env, 32, 3);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& q = queries[i++ % queries.size()];
        benchmark::DoNotOptimize(astar(g, g.nearest_node(q.start), g.nearest_node(q.goal)));
    }
}
BENCHMARK(BM_AStarSimple1)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_SegmentFree(benchmark::State& state) {
    const auto env = load_environment(env_file("difficult4"));
    const auto queries = draw_queries(env, 64, 4);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& q = queries[i++ % queries.size()];
        benchmark::DoNotOptimize(env.segment_free(q.start, q.goal, 0.5));
    }
}
BENCHMARK(BM_SegmentFree);

void BM_ArmIsFree(benchmark::State& state) {
    const auto env = load_environment(env_file("arm6"));
    Rng rng(5);
    std::vector<Config> qs;
    for (int i = 0; i < 256; ++i) {
        Config q(env.dim());
        for (int j = 0; j < q.size(); ++j) q[j] = env.lower()[j] + uniform01(rng) * (env.upper()[j] - env.lower()[j]);
        qs.push_back(q);
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(env.is_free(qs[i++ % qs.size()]));
    }
}
BENCHMARK(BM_ArmIsFree);

}  // namespace

BENCHMARK_MAIN();
