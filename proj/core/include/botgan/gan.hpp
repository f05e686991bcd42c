#pragma once

// Conventional GAN for bot detection. The discriminator has two logit heads
// on a shared trunk: column 0 ("hb") classifies human (0) vs bot (1), column 1
// ("rf") classifies fake (0) vs real (1). The generator maps Gaussian noise to
// d sigmoid features plus one sigmoid label unit whose rounding gives the
// synthetic account's class.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "botgan/dataio.hpp"
#include "botgan/nncore.hpp"
#include "botgan/rng.hpp"

namespace botgan::gan {

inline constexpr Eigen::Index kHumanBotHead = 0;
inline constexpr Eigen::Index kRealFakeHead = 1;
inline constexpr std::size_t kProbeSamples = 1000;

struct GanConfig {
    std::size_t noise_dim = 100;
    double learning_rate = 0.002;
    std::size_t batch_size = 256;
    std::size_t epochs = 50;
    /// Inverted dropout on discriminator hidden layers during training.
    double dropout_rate = 0.5;
    std::vector<std::size_t> hidden_widths{128, 128};
    nn::Activation activation = nn::Activation::relu;
    std::size_t feature_dim = 100;

    /// Throws ConfigError on non-positive sizes or rates outside their ranges.
    void validate() const;
};

struct GeneratorNet {
    nn::MlpParams net;  // noise_dim -> feature_dim + 1 logits
    [[nodiscard]] std::size_t noise_dim() const { return net.in_dim(); }
    [[nodiscard]] std::size_t feature_dim() const { return net.out_dim() - 1; }
    friend bool operator==(const GeneratorNet&, const GeneratorNet&) = default;
};

struct DiscriminatorNet {
    nn::MlpParams net;  // feature_dim -> 2 logits
    [[nodiscard]] std::size_t feature_dim() const { return net.in_dim(); }
    friend bool operator==(const DiscriminatorNet&, const DiscriminatorNet&) = default;
};

GeneratorNet make_generator(const GanConfig& config, Rng& init_rng);
DiscriminatorNet make_discriminator(const GanConfig& config, Rng& init_rng);

/// Bots per human among classified samples. `infinite` is set (and `value`
/// is meaningless) when no sample was classified human.
struct BotHumanRatio {
    double value = 0.0;
    bool infinite = false;
    std::size_t bots = 0;
    std::size_t humans = 0;

    static BotHumanRatio from_counts(std::size_t bots, std::size_t humans);
    [[nodiscard]] bool at_least(double threshold) const { return infinite || value >= threshold; }
    friend bool operator==(const BotHumanRatio&, const BotHumanRatio&) = default;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double d_loss = 0.0;
    double g_loss = 0.0;
    BotHumanRatio bot_human_ratio;
    double val_accuracy = 0.0;
    friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

using TrainLog = std::vector<EpochRecord>;

struct GanBundle {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    GanConfig config;
    TrainLog log;
    std::uint64_t seed = 0;
};

/// Per epoch over shuffled minibatches: one discriminator step on
/// hb(real) + hb(fake, round(label unit)) + rf(real=1, fake=0), then one
/// generator step on rf(G(z)) -> 1 plus hb(G(z)) -> round(label unit).
/// Both datasets must be fully labeled; `val_data` may be empty.
GanBundle train_conventional(const Dataset& train_data, const Dataset& val_data,
                             const GanConfig& config, std::uint64_t seed);

struct GeneratedSamples {
    nn::Matrix features;      // n x d, each entry in [0,1]
    nn::Vector label_units;   // n, each entry in (0,1)
    [[nodiscard]] std::vector<Label> labels() const;
};

/// Draws standard-normal noise (row by row) from `rng`.
nn::Matrix sample_noise(std::size_t n, std::size_t noise_dim, Rng& rng);
GeneratedSamples generate_samples(const GeneratorNet& generator, std::size_t n, Rng& rng);
GeneratedSamples generate_from_noise(const GeneratorNet& generator, const nn::Matrix& noise);

/// hb-head decisions (logit > 0 means bot) on eval-mode forward passes.
std::vector<Label> classify_human_bot(const DiscriminatorNet& discriminator,
                                      const nn::Matrix& features);
BotHumanRatio mode_collapse_ratio(const DiscriminatorNet& discriminator,
                                  const nn::Matrix& samples);
/// Fraction of rows whose hb decision matches the label.
double human_bot_accuracy(const DiscriminatorNet& discriminator, const Dataset& data);

/// First epoch starting `patience` consecutive ratios at or above `threshold`
/// (infinite counts as above).
std::optional<std::size_t> detect_mode_collapse(std::span<const BotHumanRatio> ratios,
                                                double threshold = 10.0,
                                                std::size_t patience = 3);
std::optional<std::size_t> detect_mode_collapse(const TrainLog& log, double threshold = 10.0,
                                                std::size_t patience = 3);

/// Replaces ceil(fraction * n) seeded rows with generated samples labeled
/// round(label unit). Raw follower/post columns of replaced rows become 0.
Dataset augment_dataset(const Dataset& real, const GeneratorNet& generator,
                        double synthetic_fraction, Rng& rng);

// ---------------------------------------------------------------------------
// Real-vs-fake only training, shared with the multi-discriminator trainer.

struct AdversarialEpoch {
    std::size_t epoch = 0;
    /// rf BCE averaged over the epoch's minibatches; empty when inactive.
    std::vector<std::optional<double>> disc_losses;
    double g_loss = 0.0;
    std::vector<std::size_t> active;
    /// Class balance of the label units on the fixed probe batch.
    BotHumanRatio label_ratio;
    /// hb-head class balance of the same probe under a reference
    /// discriminator, when the trainer was given one.
    std::optional<BotHumanRatio> judged_ratio;
    friend bool operator==(const AdversarialEpoch&, const AdversarialEpoch&) = default;
};

using AdversarialLog = std::vector<AdversarialEpoch>;

struct RfGanResult {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    AdversarialLog log;
};

/// Plain one-discriminator GAN on the rf head only; labels are ignored.
/// Uses the same seed derivation as the multi-discriminator trainer's first
/// discriminator. A non-null `judge` fills each epoch's judged_ratio.
RfGanResult train_rf_only(const Dataset& train_data, const GanConfig& config, std::uint64_t seed,
                          const DiscriminatorNet* judge = nullptr);

/// Mean of the active discriminators' rf losses for one epoch.
double mean_active_loss(const AdversarialEpoch& epoch);

// ---------------------------------------------------------------------------
// CSV export

/// epoch, d_loss, g_loss, bot_human_ratio, val_acc. Infinite ratios print "inf".
void write_train_log_csv(std::ostream& out, const TrainLog& log);
/// epoch, g_loss, mean_active_d_loss, label_ratio, [judged_ratio,] active,
/// d0_loss .. d{k-1}_loss. judged_ratio appears when the log has one.
void write_adversarial_log_csv(std::ostream& out, const AdversarialLog& log);

}  // namespace botgan::gan
