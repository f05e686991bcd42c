#pragma once

// One generator against k discriminators. Each epoch every discriminator
// draws u ~ U(0,1) and takes part iff u > keep_threshold; when nobody
// qualifies, one discriminator is picked uniformly. Active discriminators
// learn real-vs-fake on the rf head, and the generator minimizes the mean of
// their BCE(rf(G(z)), 1), one update per minibatch.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "botgan/gan.hpp"

namespace botgan::dropout {

struct DropoutGanConfig {
    gan::GanConfig base;
    std::size_t num_discriminators = 5;
    double keep_threshold = 0.5;
    /// Step active discriminators on worker threads. Results are identical to
    /// the sequential mode; the flag only changes scheduling.
    bool parallel = false;

    void validate() const;
};

struct DropoutGanBundle {
    gan::GeneratorNet generator;
    std::vector<gan::DiscriminatorNet> discriminators;
    DropoutGanConfig config;
    gan::AdversarialLog log;
    std::uint64_t seed = 0;
};

/// Indices of discriminators active this epoch; consumes k uniforms (plus one
/// index draw when none passes the threshold).
std::vector<std::size_t> draw_active_set(std::size_t k, double keep_threshold, Rng& rng);

/// Labels in `train_data` are ignored; every row counts as real. A non-null
/// `judge` (usually the conventional D*) classifies the probe batch each epoch.
DropoutGanBundle train_dropout(const Dataset& train_data, const DropoutGanConfig& config,
                               std::uint64_t seed, const gan::DiscriminatorNet* judge = nullptr);

struct RefineResult {
    gan::DiscriminatorNet discriminator;
    gan::TrainLog log;
};

/// Fine-tunes D* (both heads) against a frozen G*: per minibatch one
/// hb(real) + hb(G* samples, round(label unit)) + rf(real=1, G*=0) step.
/// `config` supplies batch size, learning rate, dropout and noise handling;
/// `val` (may be empty) feeds the log's accuracy column, `real` otherwise.
RefineResult refine_dstar(const gan::DiscriminatorNet& dstar, const gan::GeneratorNet& gstar,
                          const Dataset& real, std::size_t epochs, const gan::GanConfig& config,
                          std::uint64_t seed, const Dataset& val = {});

struct RealFakeScore {
    double rf_accuracy = 0.0;
    double rf_loss = 0.0;
};

/// rf-head accuracy (threshold 0.5) and BCE on `real_test` rows (target 1)
/// plus `n_generated` G* samples (target 0).
RealFakeScore evaluate_dstar_vs_gstar(const gan::DiscriminatorNet& dstar,
                                      const gan::GeneratorNet& gstar, const Dataset& real_test,
                                      std::size_t n_generated, Rng& rng);

struct SweepRow {
    std::size_t k = 0;
    RealFakeScore frozen;
    std::optional<RealFakeScore> refined;
};

struct SweepOptions {
    std::vector<std::size_t> k_values{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    /// 0 skips the refined-D* variant.
    std::size_t refine_epochs = 0;
    /// Train sweep cells concurrently (each cell keeps its own seed).
    bool parallel = false;
};

/// For each k: train a Dropout-GAN with seed derive_seed(seed, sweep, k) and
/// score the frozen D* (and optionally a refined copy) against its generator.
/// Rows come back ordered by k.
std::vector<SweepRow> sweep_discriminator_count(const Dataset& train_data,
                                                const Dataset& test_data,
                                                const gan::DiscriminatorNet& dstar,
                                                const DropoutGanConfig& config_base,
                                                const SweepOptions& options, std::uint64_t seed);

/// k, dstar_test_accuracy, dstar_test_loss
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool refined = false);

}  // namespace botgan::dropout
