#include "botgan/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "botgan/error.hpp"

namespace botgan::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void require_binary(std::span<const int> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 0 && values[i] != 1) {
            throw DomainError(std::string(what) + "[" + std::to_string(i) + "] is " +
                              std::to_string(values[i]) + ", expected 0 or 1");
        }
    }
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ShapeError(std::string(what) + ": lengths " + std::to_string(a) + " and " +
                         std::to_string(b) + " differ");
    }
}

std::vector<int> labels_of(const Dataset& data) {
    const auto y = data.label_vector();
    std::vector<int> out(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] > 0.5;
    return out;
}

}  // namespace

double f1_score(double precision, double recall) {
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels) {
    require_same_length(predictions.size(), labels.size(), "predictions vs labels");
    require_binary(predictions, "predictions");
    require_binary(labels, "labels");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool p = predictions[i] == 1;
        const bool t = labels[i] == 1;
        if (p && t) ++m.tp;
        else if (p) ++m.fp;
        else if (t) ++m.fn;
        else ++m.tn;
    }
    return m;
}

MetricsRecord classification_metrics(std::span<const int> predictions,
                                     std::span<const int> labels) {
    const ConfusionMatrix m = confusion(predictions, labels);
    if (labels.empty()) {
        throw DomainError("classification metrics need at least one row");
    }
    MetricsRecord r;
    r.counts = m;
    const double accuracy = ratio(m.tp + m.tn, labels.size());

    r.bot.accuracy = accuracy;
    r.bot.precision = ratio(m.tp, m.tp + m.fp);
    r.bot.recall = ratio(m.tp, m.tp + m.fn);
    r.bot.f1 = f1_score(r.bot.precision, r.bot.recall);

    const double human_precision = ratio(m.tn, m.tn + m.fn);
    const double human_recall = ratio(m.tn, m.tn + m.fp);
    r.macro.accuracy = accuracy;
    r.macro.precision = 0.5 * (r.bot.precision + human_precision);
    r.macro.recall = 0.5 * (r.bot.recall + human_recall);
    r.macro.f1 = f1_score(r.macro.precision, r.macro.recall);
    return r;
}

std::vector<double> ImpactScores::impacts() const {
    std::vector<double> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = records[i].impact;
    return out;
}

ImpactScores impact_scores(std::span<const double> followers, std::span<const double> posts) {
    require_same_length(followers.size(), posts.size(), "followers vs posts");
    ImpactScores out;
    out.records.resize(followers.size());
    double total = 0.0;
    for (std::size_t i = 0; i < followers.size(); ++i) {
        const double f = followers[i];
        const double p = posts[i];
        if (!(f >= 0.0) || !(p >= 0.0) || !std::isfinite(f) || !std::isfinite(p)) {
            throw DomainError("impact inputs must be finite and non-negative (row " +
                              std::to_string(i) + ")");
        }
        out.records[i].followers = f;
        out.records[i].posts = p;
        total += f * p;
    }
    if (!std::isfinite(total)) {
        throw NumericError("follower x post products overflow");
    }
    out.degenerate = total == 0.0;
    if (!out.degenerate) {
        for (auto& r : out.records) r.impact = r.followers * r.posts / total;
    }
    return out;
}

double impact_mitigation(std::span<const int> predictions, std::span<const int> labels,
                         std::span<const double> impacts) {
    require_same_length(predictions.size(), labels.size(), "predictions vs labels");
    require_same_length(predictions.size(), impacts.size(), "predictions vs impacts");
    double total = 0.0;
    for (double w : impacts) {
        if (!(w >= 0.0)) throw DomainError("impacts must be non-negative");
        total += w;
    }
    if (total == 0.0) {
        return 0.0;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DomainError("impacts sum to " + std::to_string(total) + ", expected 1");
    }
    double score = 0.0;
    for (std::size_t i = 0; i < impacts.size(); ++i) {
        score += predictions[i] == labels[i] ? impacts[i] : -impacts[i];
    }
    return std::clamp(score, -1.0, 1.0);
}

std::vector<PercentileRow> percentile_f1(std::span<const int> predictions,
                                         std::span<const int> labels,
                                         std::span<const double> created, double band_percent,
                                         BandMode mode) {
    require_same_length(predictions.size(), labels.size(), "predictions vs labels");
    require_same_length(predictions.size(), created.size(), "predictions vs creation dates");
    if (!(band_percent > 0.0 && band_percent <= 100.0)) {
        throw DomainError("band percent must lie in (0, 100]");
    }
    const double bands_real = 100.0 / band_percent;
    const auto n_bands = static_cast<std::size_t>(std::llround(bands_real));
    if (std::abs(bands_real - static_cast<double>(n_bands)) > 1e-9) {
        throw DomainError("band percent " + std::to_string(band_percent) + " does not divide 100");
    }

    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return created[a] < created[b]; });

    std::vector<PercentileRow> out;
    std::size_t previous_end = 0;
    for (std::size_t j = 1; j <= n_bands; ++j) {
        const double upper = band_percent * static_cast<double>(j);
        const auto end = j == n_bands
                             ? n
                             : std::min(n, static_cast<std::size_t>(std::ceil(
                                               static_cast<double>(n) * upper / 100.0 - 1e-9)));
        const std::size_t begin = mode == BandMode::cumulative ? 0 : previous_end;
        std::vector<int> p;
        std::vector<int> t;
        for (std::size_t i = begin; i < end; ++i) {
            p.push_back(predictions[order[i]]);
            t.push_back(labels[order[i]]);
        }
        PercentileRow row;
        row.band_upper_percentile = upper;
        row.rows = p.size();
        row.f1 = p.empty() ? 0.0 : classification_metrics(p, t).bot.f1;
        out.push_back(row);
        previous_end = end;
    }
    return out;
}

std::vector<PercentileRow> percentile_f1(const PredictFn& predict, const Dataset& test_data,
                                         double band_percent, BandMode mode) {
    if (!test_data.created_at_index) {
        throw DomainError("test data has no creation-date feature");
    }
    const auto labels = labels_of(test_data);
    const auto predictions = predict(test_data.to_matrix());
    std::vector<double> created(test_data.n_rows);
    for (std::size_t i = 0; i < test_data.n_rows; ++i) {
        created[i] = test_data.at(i, *test_data.created_at_index);
    }
    return percentile_f1(predictions, labels, created, band_percent, mode);
}

std::vector<double> human_means(const Dataset& real) {
    std::vector<double> sums(real.n_cols, 0.0);
    std::size_t humans = 0;
    for (std::size_t r = 0; r < real.n_rows && real.has_labels(); ++r) {
        if (real.labels[r] != Label::human) continue;
        ++humans;
        for (std::size_t c = 0; c < real.n_cols; ++c) sums[c] += real.at(r, c);
    }
    if (humans == 0) {
        throw DomainError("closeness analysis needs at least one human row");
    }
    for (double& s : sums) s /= static_cast<double>(humans);
    return sums;
}

std::vector<ClosenessRow> closeness_from_samples(const Eigen::MatrixXd& samples,
                                                 const Dataset& real, double tolerance) {
    if (!(tolerance >= 0.0)) {
        throw DomainError("closeness tolerance must be non-negative");
    }
    if (static_cast<std::size_t>(samples.cols()) != real.n_cols) {
        throw ShapeError("generated samples have " + std::to_string(samples.cols()) +
                         " features, real data has " + std::to_string(real.n_cols));
    }
    if (samples.rows() == 0) {
        throw DomainError("closeness analysis needs at least one generated sample");
    }
    const auto mu = human_means(real);
    std::vector<ClosenessRow> rows(real.n_cols);
    for (std::size_t f = 0; f < real.n_cols; ++f) {
        const double radius = tolerance * std::max(std::abs(mu[f]), 1e-6);
        std::size_t close = 0;
        for (Eigen::Index i = 0; i < samples.rows(); ++i) {
            close += std::abs(samples(i, static_cast<Eigen::Index>(f)) - mu[f]) <= radius ? 1 : 0;
        }
        rows[f].feature_index = f;
        rows[f].feature_name = f < real.feature_names.size() ? real.feature_names[f]
                                                             : "f" + std::to_string(f);
        rows[f].close_count = close;
        rows[f].close_fraction = static_cast<double>(close) / static_cast<double>(samples.rows());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ClosenessRow& a, const ClosenessRow& b) {
        return a.close_count > b.close_count;
    });
    return rows;
}

std::vector<ClosenessRow> closeness_analysis(const gan::GeneratorNet& generator,
                                             const Dataset& real, double tolerance,
                                             std::size_t n_samples, Rng& rng) {
    human_means(real);
    const auto samples = gan::generate_samples(generator, n_samples, rng);
    return closeness_from_samples(samples.features, real, tolerance);
}

HumanBotScore evaluate_human_bot(const gan::DiscriminatorNet& discriminator, const Dataset& data) {
    if (data.n_rows == 0) {
        throw DomainError("cannot evaluate on an empty dataset");
    }
    if (data.n_cols != discriminator.feature_dim()) {
        throw ShapeError("discriminator expects " + std::to_string(discriminator.feature_dim()) +
                         " features, data has " + std::to_string(data.n_cols));
    }
    const nn::Vector y = data.label_vector();
    const nn::Matrix logits = nn::predict(discriminator.net, data.to_matrix());
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        correct += (logits(i, gan::kHumanBotHead) > 0.0) == (y[i] > 0.5) ? 1 : 0;
    }
    HumanBotScore s;
    s.accuracy = static_cast<double>(correct) / static_cast<double>(y.size());
    s.loss = nn::bce_with_logits(logits.col(gan::kHumanBotHead), y).loss;
    return s;
}

std::vector<AugmentationRow> augmentation_sweep(const DstarTrainer& trainer, const Dataset& real,
                                                const Dataset& test,
                                                const gan::GeneratorNet& generator,
                                                std::vector<double> fractions,
                                                const AugmentationOptions& options,
                                                std::uint64_t seed) {
    if (fractions.empty()) {
        throw DomainError("augmentation sweep needs at least one fraction");
    }
    if (options.repeats == 0) {
        throw DomainError("augmentation sweep needs at least one repeat");
    }
    for (double f : fractions) {
        if (!(f >= 0.0 && f <= 1.0)) {
            throw DomainError("augmentation fraction " + std::to_string(f) + " outside [0,1]");
        }
    }
    std::sort(fractions.begin(), fractions.end());
    fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());

    auto run = [&](double fraction, std::size_t repeat) {
        const std::uint64_t run_seed = derive_seed(seed, Stream::augment, repeat);
        Rng rng(derive_seed(run_seed, Stream::augment));
        const Dataset augmented = gan::augment_dataset(real, generator, fraction, rng);
        return evaluate_human_bot(trainer(augmented, run_seed), test);
    };

    std::vector<AugmentationRow> rows;
    for (double fraction : fractions) {
        std::vector<HumanBotScore> scores;
        if (options.parallel && options.repeats > 1) {
            std::vector<std::future<HumanBotScore>> futures;
            for (std::size_t r = 0; r < options.repeats; ++r) {
                futures.push_back(std::async(std::launch::async, run, fraction, r));
            }
            for (auto& f : futures) scores.push_back(f.get());
        } else {
            for (std::size_t r = 0; r < options.repeats; ++r) scores.push_back(run(fraction, r));
        }
        AugmentationRow row;
        row.fraction = fraction;
        row.repeats = scores.size();
        for (const auto& s : scores) {
            row.test_accuracy += s.accuracy;
            row.test_loss += s.loss;
        }
        row.test_accuracy /= static_cast<double>(scores.size());
        row.test_loss /= static_cast<double>(scores.size());
        rows.push_back(row);
    }
    return rows;
}

}  // namespace botgan::eval
