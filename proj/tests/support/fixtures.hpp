#pragma once

// Small, fast training fixtures shared by the GAN test files.

#include "botgan/dataio.hpp"
#include "botgan/gan.hpp"
#include "botgan/rng.hpp"

namespace fixture {

struct Splits {
    botgan::Dataset train;
    botgan::Dataset val;
    botgan::Dataset test;
};

inline Splits small_splits(std::uint64_t seed = 3, std::size_t rows = 400, std::size_t cols = 8) {
    botgan::SynthConfig c;
    c.n_rows = rows;
    c.n_features = cols;
    c.seed = seed;
    const auto ds = botgan::synth_generate(c);
    botgan::Rng rng(botgan::derive_seed(seed, botgan::Stream::split));
    const auto idx = botgan::split_80_10_10(ds, rng);
    return {ds.subset(idx.train), ds.subset(idx.validation), ds.subset(idx.test)};
}

inline botgan::gan::GanConfig small_config(std::size_t cols = 8, std::size_t epochs = 4) {
    botgan::gan::GanConfig g;
    g.noise_dim = 8;
    g.hidden_widths = {16, 16};
    g.batch_size = 32;
    g.epochs = epochs;
    g.feature_dim = cols;
    return g;
}

}  // namespace fixture
