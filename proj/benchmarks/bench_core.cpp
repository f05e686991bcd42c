#include <benchmark/benchmark.h>

#include <numeric>

#include "botgan/baselines.hpp"
#include "botgan/dataio.hpp"
#include "botgan/features.hpp"
#include "botgan/gan.hpp"
#include "botgan/nncore.hpp"

using namespace botgan;

namespace {

Dataset synth(std::size_t rows, std::size_t cols) {
    SynthConfig c;
    c.n_rows = rows;
    c.n_features = cols;
    c.seed = 1;
    return synth_generate(c);
}

nn::MlpParams discriminator_sized(Rng& rng) {
    return nn::init_mlp(nn::make_specs(100, {128, 128}, 2, nn::Activation::relu,
                                       nn::Activation::identity),
                        rng);
}

void BM_ForwardBackward(benchmark::State& state) {
    Rng rng(1);
    const auto net = discriminator_sized(rng);
    const auto batch = static_cast<Eigen::Index>(state.range(0));
    const nn::Matrix x = nn::Matrix::Random(batch, 100);
    const nn::Matrix grad = nn::Matrix::Ones(batch, 2);
    for (auto _ : state) {
        const auto fwd = nn::forward(net, x, true, 0.5, rng);
        benchmark::DoNotOptimize(nn::backward(net, fwd.cache, grad));
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardBackward)->Arg(32)->Arg(256);

void BM_AdamStep(benchmark::State& state) {
    Rng rng(2);
    auto net = discriminator_sized(rng);
    auto adam = nn::AdamState::for_params(net, 0.002);
    auto g = nn::Gradients::zeros_like(net);
    for (auto& w : g.weights) w.setConstant(1e-3);
    for (auto _ : state) nn::adam_step(net, g, adam);
}
BENCHMARK(BM_AdamStep);

void BM_InformationGain(benchmark::State& state) {
    const auto ds = synth(static_cast<std::size_t>(state.range(0)), 100);
    for (auto _ : state) benchmark::DoNotOptimize(information_gain(ds));
}
BENCHMARK(BM_InformationGain)->Arg(1000)->Arg(10000);

void BM_DecisionTree(benchmark::State& state) {
    const auto ds = synth(static_cast<std::size_t>(state.range(0)), 30);
    const nn::Matrix x = ds.to_matrix();
    std::vector<int> y;
    for (auto l : ds.labels) y.push_back(l == Label::bot ? 1 : 0);
    std::vector<std::size_t> rows(ds.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    baselines::TreeParams p;
    p.max_depth = 12;
    p.max_features = 6;
    for (auto _ : state) {
        Rng rng(3);
        benchmark::DoNotOptimize(baselines::train_decision_tree(x, y, rows, p, rng));
    }
}
BENCHMARK(BM_DecisionTree)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ConventionalEpoch(benchmark::State& state) {
    const auto ds = synth(2000, 100);
    gan::GanConfig c;
    c.epochs = 1;
    c.feature_dim = 100;
    for (auto _ : state) benchmark::DoNotOptimize(gan::train_conventional(ds, Dataset{}, c, 1));
}
BENCHMARK(BM_ConventionalEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
