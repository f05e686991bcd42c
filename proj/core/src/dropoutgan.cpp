#include "botgan/dropoutgan.hpp"

#include <algorithm>
#include <future>
#include <iomanip>
#include <limits>

#include "adversarial.hpp"
#include "botgan/error.hpp"

namespace botgan::dropout {

using gan::detail::DiscTrainee;

void DropoutGanConfig::validate() const {
    base.validate();
    if (num_discriminators < 1) {
        throw ConfigError("Dropout-GAN needs at least one discriminator");
    }
    if (!(keep_threshold >= 0.0 && keep_threshold < 1.0)) {
        throw ConfigError("keep_threshold must lie in [0,1)");
    }
}

std::vector<std::size_t> draw_active_set(std::size_t k, double keep_threshold, Rng& rng) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < k; ++i) {
        if (rng.uniform() > keep_threshold) {
            active.push_back(i);
        }
    }
    if (active.empty() && k > 0) {
        active.push_back(static_cast<std::size_t>(rng.uniform_index(k)));
    }
    return active;
}

DropoutGanBundle train_dropout(const Dataset& train_data, const DropoutGanConfig& config,
                               std::uint64_t seed, const gan::DiscriminatorNet* judge) {
    config.validate();
    train_data.validate();
    gan::detail::check_judge(judge, config.base);
    const auto& base = config.base;
    if (train_data.n_rows == 0) {
        throw DomainError("training data is empty");
    }
    if (train_data.n_cols != base.feature_dim) {
        throw ShapeError("training data has " + std::to_string(train_data.n_cols) +
                         " features but feature_dim is " + std::to_string(base.feature_dim));
    }

    const std::size_t k = config.num_discriminators;
    auto gen = gan::detail::make_gen_trainee(base, seed);
    std::vector<DiscTrainee> discs;
    discs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        discs.push_back(gan::detail::make_disc_trainee(base, seed, i));
    }
    Rng shuffle_rng(derive_seed(seed, Stream::shuffle));
    Rng noise_rng(derive_seed(seed, Stream::noise));
    Rng selection_rng(derive_seed(seed, Stream::selection));
    const nn::Matrix probe = gan::detail::probe_noise(base, seed);
    const nn::Matrix x = train_data.to_matrix();

    DropoutGanBundle bundle;
    bundle.config = config;
    bundle.seed = seed;
    for (std::size_t epoch = 0; epoch < base.epochs; ++epoch) {
        const auto active = draw_active_set(k, config.keep_threshold, selection_rng);
        std::vector<DiscTrainee*> active_discs;
        for (std::size_t i : active) active_discs.push_back(&discs[i]);

        std::vector<double> d_totals(k, 0.0);
        double g_total = 0.0;
        const auto batches = gan::detail::minibatches(train_data.n_rows, base.batch_size, shuffle_rng);
        for (const auto& rows : batches) {
            const nn::Matrix real = gan::detail::gather_rows(x, rows);
            const nn::Matrix z = gan::sample_noise(rows.size(), base.noise_dim, noise_rng);
            const auto pass = gan::detail::generator_pass(gen.model, z);
            if (config.parallel && active.size() > 1) {
                std::vector<std::future<double>> futures;
                for (DiscTrainee* disc : active_discs) {
                    futures.push_back(std::async(std::launch::async, [&, disc] {
                        return gan::detail::disc_rf_step(*disc, real, pass.features,
                                                         base.dropout_rate);
                    }));
                }
                for (std::size_t a = 0; a < active.size(); ++a) {
                    d_totals[active[a]] += futures[a].get();
                }
            } else {
                for (std::size_t a = 0; a < active.size(); ++a) {
                    d_totals[active[a]] += gan::detail::disc_rf_step(
                        *active_discs[a], real, pass.features, base.dropout_rate);
                }
            }
            g_total += gan::detail::generator_step(gen, pass, active_discs, base.dropout_rate,
                                                   false, config.parallel);
        }

        const double n_batches = static_cast<double>(batches.size());
        gan::AdversarialEpoch record;
        record.epoch = epoch;
        record.disc_losses.assign(k, std::nullopt);
        for (std::size_t i : active) record.disc_losses[i] = d_totals[i] / n_batches;
        record.g_loss = g_total / n_batches;
        record.active = active;
        gan::detail::record_probe_ratios(record, gen.model, probe, judge);
        bundle.log.push_back(std::move(record));
    }
    bundle.generator = std::move(gen.model);
    for (auto& d : discs) bundle.discriminators.push_back(std::move(d.model));
    return bundle;
}

RefineResult refine_dstar(const gan::DiscriminatorNet& dstar, const gan::GeneratorNet& gstar,
                          const Dataset& real, std::size_t epochs, const gan::GanConfig& config,
                          std::uint64_t seed, const Dataset& val) {
    if (dstar.feature_dim() != gstar.feature_dim()) {
        throw ShapeError("D* expects " + std::to_string(dstar.feature_dim()) +
                         " features but G* emits " + std::to_string(gstar.feature_dim()));
    }
    if (real.n_cols != dstar.feature_dim()) {
        throw ShapeError("refinement data has " + std::to_string(real.n_cols) +
                         " features, D* expects " + std::to_string(dstar.feature_dim()));
    }
    RefineResult result{dstar, {}};
    if (epochs == 0) {
        return result;
    }
    if (real.n_rows == 0) {
        throw DomainError("refinement data is empty");
    }
    const nn::Vector y = real.label_vector();
    const nn::Matrix x = real.to_matrix();

    DiscTrainee disc{dstar, nn::AdamState::for_params(dstar.net, config.learning_rate),
                     Rng(derive_seed(seed, Stream::dropout, 1))};
    Rng shuffle_rng(derive_seed(seed, Stream::shuffle));
    Rng noise_rng(derive_seed(seed, Stream::noise));
    gan::GanConfig probe_config = config;
    probe_config.noise_dim = gstar.noise_dim();
    const nn::Matrix probe = gan::detail::probe_noise(probe_config, seed);
    const Dataset& accuracy_set = val.n_rows > 0 ? val : real;

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        double d_total = 0.0;
        double g_total = 0.0;
        const auto batches = gan::detail::minibatches(real.n_rows, config.batch_size, shuffle_rng);
        for (const auto& rows : batches) {
            const nn::Matrix batch = gan::detail::gather_rows(x, rows);
            const nn::Vector labels = gan::detail::gather(y, rows);
            const nn::Matrix z = gan::sample_noise(rows.size(), gstar.noise_dim(), noise_rng);
            const auto samples = gan::generate_from_noise(gstar, z);
            const auto losses = gan::detail::disc_conventional_step(
                disc, batch, labels, samples.features,
                gan::detail::rounded_labels(samples.label_units), config.dropout_rate);
            d_total += losses.total;
            g_total += losses.generator_view;
        }
        gan::EpochRecord record;
        record.epoch = epoch;
        record.d_loss = d_total / static_cast<double>(batches.size());
        record.g_loss = g_total / static_cast<double>(batches.size());
        record.bot_human_ratio =
            gan::mode_collapse_ratio(disc.model, gan::generate_from_noise(gstar, probe).features);
        record.val_accuracy = gan::human_bot_accuracy(disc.model, accuracy_set);
        result.log.push_back(record);
    }
    result.discriminator = std::move(disc.model);
    return result;
}

RealFakeScore evaluate_dstar_vs_gstar(const gan::DiscriminatorNet& dstar,
                                      const gan::GeneratorNet& gstar, const Dataset& real_test,
                                      std::size_t n_generated, Rng& rng) {
    if (real_test.n_rows == 0) {
        throw DomainError("D*-vs-G* evaluation needs a non-empty test set");
    }
    if (n_generated == 0) {
        throw DomainError("D*-vs-G* evaluation needs at least one generated sample");
    }
    if (real_test.n_cols != dstar.feature_dim() || gstar.feature_dim() != dstar.feature_dim()) {
        throw ShapeError("D*, G* and test data disagree on the feature dimension");
    }
    const auto samples = gan::generate_samples(gstar, n_generated, rng);
    const nn::Matrix stacked = gan::detail::stack_rows(real_test.to_matrix(), samples.features);
    const nn::Matrix logits = nn::predict(dstar.net, stacked);
    const auto n_real = static_cast<Eigen::Index>(real_test.n_rows);
    nn::Vector targets(stacked.rows());
    targets.head(n_real).setOnes();
    targets.tail(stacked.rows() - n_real).setZero();

    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < stacked.rows(); ++i) {
        const bool says_real = nn::sigmoid(logits(i, gan::kRealFakeHead)) > 0.5;
        correct += says_real == (targets[i] == 1.0) ? 1 : 0;
    }
    RealFakeScore score;
    score.rf_accuracy = static_cast<double>(correct) / static_cast<double>(stacked.rows());
    score.rf_loss = nn::bce_with_logits(logits.col(gan::kRealFakeHead), targets).loss;
    return score;
}

std::vector<SweepRow> sweep_discriminator_count(const Dataset& train_data,
                                                const Dataset& test_data,
                                                const gan::DiscriminatorNet& dstar,
                                                const DropoutGanConfig& config_base,
                                                const SweepOptions& options, std::uint64_t seed) {
    if (options.k_values.empty()) {
        throw DomainError("discriminator-count sweep needs at least one k");
    }
    std::vector<std::size_t> ks = options.k_values;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    auto run_cell = [&](std::size_t k) {
        const std::uint64_t cell_seed = derive_seed(seed, Stream::sweep, k);
        DropoutGanConfig config = config_base;
        config.num_discriminators = k;
        const auto bundle = train_dropout(train_data, config, cell_seed);
        SweepRow row;
        row.k = k;
        Rng eval_rng(derive_seed(cell_seed, Stream::eval));
        row.frozen = evaluate_dstar_vs_gstar(dstar, bundle.generator, test_data,
                                             test_data.n_rows, eval_rng);
        if (options.refine_epochs > 0) {
            const auto refined = refine_dstar(dstar, bundle.generator, train_data,
                                              options.refine_epochs, config.base, cell_seed);
            Rng refined_rng(derive_seed(cell_seed, Stream::eval));
            row.refined = evaluate_dstar_vs_gstar(refined.discriminator, bundle.generator,
                                                  test_data, test_data.n_rows, refined_rng);
        }
        return row;
    };

    std::vector<SweepRow> rows;
    if (options.parallel && ks.size() > 1) {
        std::vector<std::future<SweepRow>> futures;
        for (std::size_t k : ks) futures.push_back(std::async(std::launch::async, run_cell, k));
        for (auto& f : futures) rows.push_back(f.get());
    } else {
        for (std::size_t k : ks) rows.push_back(run_cell(k));
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool refined) {
    out << "k,dstar_test_accuracy,dstar_test_loss\n" << std::setprecision(6) << std::fixed;
    for (const auto& row : rows) {
        const RealFakeScore& score = refined && row.refined ? *row.refined : row.frozen;
        out << row.k << ',' << score.rf_accuracy << ',' << score.rf_loss << '\n';
    }
    out.unsetf(std::ios::fixed);
}

}  // namespace botgan::dropout
