#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "botgan/dataio.hpp"
#include "botgan/gan.hpp"

namespace botgan::eval {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

struct BinaryScores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// `bot` treats bot (1) as the positive class. `macro` averages precision and
/// recall over both classes and takes their harmonic mean as F1, so F1 stays
/// the harmonic mean of the reported precision and recall in both variants.
struct MetricsRecord {
    ConfusionMatrix counts;
    BinaryScores bot;
    BinaryScores macro;
};

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels);
MetricsRecord classification_metrics(std::span<const int> predictions, std::span<const int> labels);
/// Harmonic mean; 0 when both inputs are 0.
double f1_score(double precision, double recall);

struct ImpactRecord {
    double followers = 0.0;
    double posts = 0.0;
    double impact = 0.0;
};

struct ImpactScores {
    std::vector<ImpactRecord> records;
    /// Every F*P product was zero, so every impact is zero.
    bool degenerate = false;

    [[nodiscard]] std::vector<double> impacts() const;
};

ImpactScores impact_scores(std::span<const double> followers, std::span<const double> posts);

/// Sum of +impact over correct rows and -impact over wrong ones. All-zero
/// impacts give 0; otherwise impacts must sum to 1 within 1e-9.
double impact_mitigation(std::span<const int> predictions, std::span<const int> labels,
                         std::span<const double> impacts);

enum class BandMode { cumulative, disjoint };

struct PercentileRow {
    double band_upper_percentile = 0.0;
    std::size_t rows = 0;
    double f1 = 0.0;
};

/// Rows ordered oldest first by `created` (ties by row index). Band j covers
/// the first ceil(n * j*band/100) rows (cumulative) or only the rows added
/// by that step (disjoint). Empty bands report F1 = 0.
std::vector<PercentileRow> percentile_f1(std::span<const int> predictions,
                                         std::span<const int> labels,
                                         std::span<const double> created, double band_percent = 5.0,
                                         BandMode mode = BandMode::cumulative);

using PredictFn = std::function<std::vector<int>(const Eigen::MatrixXd&)>;

/// Predicts the whole test set once, then bands it on its creation column.
std::vector<PercentileRow> percentile_f1(const PredictFn& predict, const Dataset& test_data,
                                         double band_percent = 5.0,
                                         BandMode mode = BandMode::cumulative);

struct ClosenessRow {
    std::size_t feature_index = 0;
    std::string feature_name;
    std::size_t close_count = 0;
    double close_fraction = 0.0;
};

/// Per-feature mean over human rows.
std::vector<double> human_means(const Dataset& real);

/// x is close on feature f iff |x_f - mean_f| <= tolerance * max(|mean_f|, 1e-6).
/// Sorted by close_count descending, then feature index.
std::vector<ClosenessRow> closeness_from_samples(const Eigen::MatrixXd& samples,
                                                 const Dataset& real, double tolerance = 0.05);

std::vector<ClosenessRow> closeness_analysis(const gan::GeneratorNet& generator,
                                             const Dataset& real, double tolerance,
                                             std::size_t n_samples, Rng& rng);

struct HumanBotScore {
    double accuracy = 0.0;
    double loss = 0.0;
};

/// hb-head accuracy and BCE against the dataset's labels.
HumanBotScore evaluate_human_bot(const gan::DiscriminatorNet& discriminator, const Dataset& data);

/// Trains a D* on the given (augmented) training set with the given seed.
using DstarTrainer = std::function<gan::DiscriminatorNet(const Dataset&, std::uint64_t)>;

struct AugmentationRow {
    double fraction = 0.0;
    double test_accuracy = 0.0;
    double test_loss = 0.0;
    std::size_t repeats = 0;
};

struct AugmentationOptions {
    std::size_t repeats = 10;
    bool parallel = false;
};

/// Repeat r of every fraction uses seed derive_seed(seed, augment, r), so the
/// fractions are compared under common random numbers. Output is sorted by
/// fraction with duplicates removed.
std::vector<AugmentationRow> augmentation_sweep(const DstarTrainer& trainer, const Dataset& real,
                                                const Dataset& test,
                                                const gan::GeneratorNet& generator,
                                                std::vector<double> fractions,
                                                const AugmentationOptions& options,
                                                std::uint64_t seed);

}  // namespace botgan::eval
