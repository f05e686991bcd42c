#include "botgan/gan.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <numeric>

#include "adversarial.hpp"
#include "botgan/error.hpp"

namespace botgan::gan {

void GanConfig::validate() const {
    if (noise_dim == 0) throw ConfigError("noise_dim must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (epochs == 0) throw ConfigError("epochs must be at least 1");
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw ConfigError("dropout_rate must lie in [0,1)");
    }
    if (feature_dim == 0) throw ConfigError("feature_dim must be positive");
    for (std::size_t w : hidden_widths) {
        if (w == 0) throw ConfigError("hidden widths must be positive");
    }
}

GeneratorNet make_generator(const GanConfig& config, Rng& init_rng) {
    config.validate();
    return {nn::init_mlp(nn::make_specs(config.noise_dim, config.hidden_widths,
                                        config.feature_dim + 1, config.activation,
                                        nn::Activation::identity),
                         init_rng)};
}

DiscriminatorNet make_discriminator(const GanConfig& config, Rng& init_rng) {
    config.validate();
    return {nn::init_mlp(nn::make_specs(config.feature_dim, config.hidden_widths, 2,
                                        config.activation, nn::Activation::identity),
                         init_rng)};
}

BotHumanRatio BotHumanRatio::from_counts(std::size_t bots, std::size_t humans) {
    BotHumanRatio r;
    r.bots = bots;
    r.humans = humans;
    if (humans == 0) {
        r.infinite = true;
        r.value = 0.0;
    } else {
        r.value = static_cast<double>(bots) / static_cast<double>(humans);
    }
    return r;
}

std::vector<Label> GeneratedSamples::labels() const {
    std::vector<Label> out(static_cast<std::size_t>(label_units.size()));
    for (Eigen::Index i = 0; i < label_units.size(); ++i) {
        out[static_cast<std::size_t>(i)] = label_units[i] >= 0.5 ? Label::bot : Label::human;
    }
    return out;
}

namespace detail {

DiscTrainee make_disc_trainee(const GanConfig& config, std::uint64_t seed, std::size_t index) {
    Rng init(derive_seed(seed, Stream::init, 1 + index));
    DiscriminatorNet disc = make_discriminator(config, init);
    nn::AdamState adam = nn::AdamState::for_params(disc.net, config.learning_rate);
    return {std::move(disc), std::move(adam), Rng(derive_seed(seed, Stream::dropout, 1 + index))};
}

GenTrainee make_gen_trainee(const GanConfig& config, std::uint64_t seed) {
    Rng init(derive_seed(seed, Stream::init, 0));
    GeneratorNet gen = make_generator(config, init);
    nn::AdamState adam = nn::AdamState::for_params(gen.net, config.learning_rate);
    return {std::move(gen), std::move(adam), Rng(derive_seed(seed, Stream::dropout, 0))};
}

GeneratorPass generator_pass(const GeneratorNet& generator, const nn::Matrix& noise) {
    // The generator runs without dropout, so the stream is never drawn from.
    Rng unused(0);
    GeneratorPass pass{nn::forward(generator.net, noise, false, 0.0, unused), {}, {}};
    const Eigen::Index d = static_cast<Eigen::Index>(generator.feature_dim());
    const auto& logits = pass.forward.outputs;
    pass.features = logits.leftCols(d).unaryExpr([](double x) { return nn::sigmoid(x); });
    pass.label_units = logits.col(d).unaryExpr([](double x) { return nn::sigmoid(x); });
    return pass;
}

nn::Vector rounded_labels(const nn::Vector& label_units) {
    return label_units.unaryExpr([](double l) { return l >= 0.5 ? 1.0 : 0.0; });
}

nn::Matrix stack_rows(const nn::Matrix& real, const nn::Matrix& fake) {
    nn::Matrix stacked(real.rows() + fake.rows(), real.cols());
    stacked.topRows(real.rows()) = real;
    stacked.bottomRows(fake.rows()) = fake;
    return stacked;
}

namespace {

nn::Vector rf_targets(Eigen::Index n_real, Eigen::Index n_fake) {
    nn::Vector t(n_real + n_fake);
    t.head(n_real).setOnes();
    t.tail(n_fake).setZero();
    return t;
}

}  // namespace

double disc_rf_step(DiscTrainee& disc, const nn::Matrix& real, const nn::Matrix& fake,
                    double dropout_rate) {
    const nn::Matrix stacked = stack_rows(real, fake);
    auto fwd = nn::forward(disc.model.net, stacked, true, dropout_rate, disc.dropout_rng);
    const auto rf = nn::bce_with_logits(fwd.outputs.col(kRealFakeHead),
                                        rf_targets(real.rows(), fake.rows()));
    nn::Matrix out_grad = nn::Matrix::Zero(stacked.rows(), 2);
    out_grad.col(kRealFakeHead) = rf.grad;
    const auto grads = nn::backward(disc.model.net, fwd.cache, out_grad);
    nn::adam_step(disc.model.net, grads, disc.adam);
    return rf.loss;
}

ConventionalDiscLosses disc_conventional_step(DiscTrainee& disc, const nn::Matrix& real,
                                              const nn::Vector& real_labels,
                                              const nn::Matrix& fake,
                                              const nn::Vector& fake_labels,
                                              double dropout_rate) {
    const Eigen::Index n_real = real.rows();
    const Eigen::Index n_fake = fake.rows();
    const nn::Matrix stacked = stack_rows(real, fake);
    auto fwd = nn::forward(disc.model.net, stacked, true, dropout_rate, disc.dropout_rng);
    const auto& logits = fwd.outputs;

    const auto hb_real = nn::bce_with_logits(logits.col(kHumanBotHead).head(n_real), real_labels);
    const auto hb_fake = nn::bce_with_logits(logits.col(kHumanBotHead).tail(n_fake), fake_labels);
    const auto rf =
        nn::bce_with_logits(logits.col(kRealFakeHead), rf_targets(n_real, n_fake));

    nn::Matrix out_grad(stacked.rows(), 2);
    out_grad.col(kHumanBotHead).head(n_real) = hb_real.grad;
    out_grad.col(kHumanBotHead).tail(n_fake) = hb_fake.grad;
    out_grad.col(kRealFakeHead) = rf.grad;
    const auto grads = nn::backward(disc.model.net, fwd.cache, out_grad);
    nn::adam_step(disc.model.net, grads, disc.adam);

    ConventionalDiscLosses losses;
    losses.total = hb_real.loss + hb_fake.loss + rf.loss;
    losses.generator_view =
        nn::bce_with_logits(logits.col(kRealFakeHead).tail(n_fake), nn::Vector::Ones(n_fake)).loss +
        hb_fake.loss;
    return losses;
}

double generator_step(GenTrainee& gen, const GeneratorPass& pass,
                      std::span<DiscTrainee* const> discs, double dropout_rate,
                      bool with_label_term, bool parallel) {
    if (discs.empty()) {
        throw DomainError("generator step needs at least one discriminator");
    }
    const Eigen::Index n = pass.features.rows();
    const nn::Vector fake_labels = rounded_labels(pass.label_units);

    struct Contribution {
        double loss = 0.0;
        nn::Matrix input_grad;
    };
    auto contribute = [&](DiscTrainee& disc) {
        auto fwd = nn::forward(disc.model.net, pass.features, true, dropout_rate, disc.dropout_rng);
        const auto rf = nn::bce_with_logits(fwd.outputs.col(kRealFakeHead), nn::Vector::Ones(n));
        nn::Matrix out_grad = nn::Matrix::Zero(n, 2);
        out_grad.col(kRealFakeHead) = rf.grad;
        Contribution c;
        c.loss = rf.loss;
        if (with_label_term) {
            const auto hb = nn::bce_with_logits(fwd.outputs.col(kHumanBotHead), fake_labels);
            out_grad.col(kHumanBotHead) = hb.grad;
            c.loss += hb.loss;
        }
        c.input_grad = nn::backward(disc.model.net, fwd.cache, out_grad).input;
        return c;
    };

    std::vector<Contribution> parts;
    parts.reserve(discs.size());
    if (parallel && discs.size() > 1) {
        std::vector<std::future<Contribution>> futures;
        for (DiscTrainee* disc : discs) {
            futures.push_back(std::async(std::launch::async, contribute, std::ref(*disc)));
        }
        for (auto& f : futures) parts.push_back(f.get());
    } else {
        for (DiscTrainee* disc : discs) parts.push_back(contribute(*disc));
    }

    nn::Matrix feature_grad = nn::Matrix::Zero(n, pass.features.cols());
    double loss = 0.0;
    for (const auto& part : parts) {
        feature_grad += part.input_grad;
        loss += part.loss;
    }
    const double scale = 1.0 / static_cast<double>(parts.size());
    feature_grad *= scale;
    loss *= scale;

    // Chain through the output sigmoids; the label unit receives no gradient.
    const Eigen::Index d = pass.features.cols();
    nn::Matrix out_grad = nn::Matrix::Zero(n, d + 1);
    out_grad.leftCols(d) = feature_grad.cwiseProduct(
        pass.features.cwiseProduct((1.0 - pass.features.array()).matrix()));
    const auto grads = nn::backward(gen.model.net, pass.forward.cache, out_grad);
    nn::adam_step(gen.model.net, grads, gen.adam);
    return loss;
}

nn::Matrix probe_noise(const GanConfig& config, std::uint64_t seed) {
    Rng probe(derive_seed(seed, Stream::probe));
    return sample_noise(kProbeSamples, config.noise_dim, probe);
}

void record_probe_ratios(AdversarialEpoch& record, const GeneratorNet& generator,
                         const nn::Matrix& noise, const DiscriminatorNet* judge) {
    const auto samples = generate_from_noise(generator, noise);
    std::size_t bots = 0;
    for (Eigen::Index i = 0; i < samples.label_units.size(); ++i) {
        bots += samples.label_units[i] >= 0.5 ? 1 : 0;
    }
    record.label_ratio = BotHumanRatio::from_counts(bots, static_cast<std::size_t>(noise.rows()) - bots);
    if (judge) record.judged_ratio = mode_collapse_ratio(*judge, samples.features);
}

void check_judge(const DiscriminatorNet* judge, const GanConfig& config) {
    if (judge && judge->feature_dim() != config.feature_dim) {
        throw ShapeError("judge discriminator expects " + std::to_string(judge->feature_dim()) +
                         " features but feature_dim is " + std::to_string(config.feature_dim));
    }
}

std::vector<std::vector<std::size_t>> minibatches(std::size_t n, std::size_t batch_size,
                                                  Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return batches;
}

nn::Matrix gather_rows(const nn::Matrix& source, std::span<const std::size_t> rows) {
    nn::Matrix out(static_cast<Eigen::Index>(rows.size()), source.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = source.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

nn::Vector gather(const nn::Vector& source, std::span<const std::size_t> rows) {
    nn::Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = source[static_cast<Eigen::Index>(rows[i])];
    }
    return out;
}

}  // namespace detail

namespace {

void require_trainable(const Dataset& data, const GanConfig& config, bool need_both_classes) {
    data.validate();
    if (data.n_rows == 0) {
        throw DomainError("training data is empty");
    }
    if (data.n_cols != config.feature_dim) {
        throw ShapeError("training data has " + std::to_string(data.n_cols) +
                         " features but feature_dim is " + std::to_string(config.feature_dim));
    }
    if (need_both_classes) {
        if (data.count(Label::human) == 0 || data.count(Label::bot) == 0) {
            throw DomainError("training data must contain both human and bot rows");
        }
        if (data.count(Label::unlabeled) != 0) {
            throw DomainError("conventional GAN training needs fully labeled rows");
        }
    }
}

}  // namespace

GanBundle train_conventional(const Dataset& train_data, const Dataset& val_data,
                             const GanConfig& config, std::uint64_t seed) {
    config.validate();
    require_trainable(train_data, config, true);
    if (val_data.n_rows > 0 && val_data.n_cols != config.feature_dim) {
        throw ShapeError("validation data width does not match feature_dim");
    }

    auto gen = detail::make_gen_trainee(config, seed);
    auto disc = detail::make_disc_trainee(config, seed, 0);
    Rng shuffle_rng(derive_seed(seed, Stream::shuffle));
    Rng noise_rng(derive_seed(seed, Stream::noise));
    const nn::Matrix probe = detail::probe_noise(config, seed);
    const nn::Matrix x = train_data.to_matrix();
    const nn::Vector y = train_data.label_vector();
    detail::DiscTrainee* const discs[] = {&disc};

    GanBundle bundle;
    bundle.config = config;
    bundle.seed = seed;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double d_total = 0.0;
        double g_total = 0.0;
        const auto batches = detail::minibatches(train_data.n_rows, config.batch_size, shuffle_rng);
        for (const auto& rows : batches) {
            const nn::Matrix real = detail::gather_rows(x, rows);
            const nn::Vector labels = detail::gather(y, rows);
            const nn::Matrix z = sample_noise(rows.size(), config.noise_dim, noise_rng);
            const auto pass = detail::generator_pass(gen.model, z);
            d_total += detail::disc_conventional_step(disc, real, labels, pass.features,
                                                      detail::rounded_labels(pass.label_units),
                                                      config.dropout_rate)
                           .total;
            g_total += detail::generator_step(gen, pass, discs, config.dropout_rate, true);
        }
        EpochRecord record;
        record.epoch = epoch;
        record.d_loss = d_total / static_cast<double>(batches.size());
        record.g_loss = g_total / static_cast<double>(batches.size());
        record.bot_human_ratio =
            mode_collapse_ratio(disc.model, generate_from_noise(gen.model, probe).features);
        record.val_accuracy = val_data.n_rows > 0 ? human_bot_accuracy(disc.model, val_data)
                                                  : std::numeric_limits<double>::quiet_NaN();
        bundle.log.push_back(record);
    }
    bundle.generator = std::move(gen.model);
    bundle.discriminator = std::move(disc.model);
    return bundle;
}

RfGanResult train_rf_only(const Dataset& train_data, const GanConfig& config, std::uint64_t seed,
                          const DiscriminatorNet* judge) {
    config.validate();
    require_trainable(train_data, config, false);
    detail::check_judge(judge, config);

    auto gen = detail::make_gen_trainee(config, seed);
    auto disc = detail::make_disc_trainee(config, seed, 0);
    Rng shuffle_rng(derive_seed(seed, Stream::shuffle));
    Rng noise_rng(derive_seed(seed, Stream::noise));
    const nn::Matrix probe = detail::probe_noise(config, seed);
    const nn::Matrix x = train_data.to_matrix();
    detail::DiscTrainee* const discs[] = {&disc};

    RfGanResult result;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        double d_total = 0.0;
        double g_total = 0.0;
        const auto batches = detail::minibatches(train_data.n_rows, config.batch_size, shuffle_rng);
        for (const auto& rows : batches) {
            const nn::Matrix real = detail::gather_rows(x, rows);
            const nn::Matrix z = sample_noise(rows.size(), config.noise_dim, noise_rng);
            const auto pass = detail::generator_pass(gen.model, z);
            d_total += detail::disc_rf_step(disc, real, pass.features, config.dropout_rate);
            g_total += detail::generator_step(gen, pass, discs, config.dropout_rate, false);
        }
        const double n_batches = static_cast<double>(batches.size());
        AdversarialEpoch record;
        record.epoch = epoch;
        record.disc_losses = {d_total / n_batches};
        record.g_loss = g_total / n_batches;
        record.active = {0};
        detail::record_probe_ratios(record, gen.model, probe, judge);
        result.log.push_back(std::move(record));
    }
    result.generator = std::move(gen.model);
    result.discriminator = std::move(disc.model);
    return result;
}

double mean_active_loss(const AdversarialEpoch& epoch) {
    double total = 0.0;
    std::size_t active = 0;
    for (const auto& loss : epoch.disc_losses) {
        if (loss) {
            total += *loss;
            ++active;
        }
    }
    return active > 0 ? total / static_cast<double>(active)
                      : std::numeric_limits<double>::quiet_NaN();
}

nn::Matrix sample_noise(std::size_t n, std::size_t noise_dim, Rng& rng) {
    nn::Matrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(noise_dim));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            z(r, c) = rng.normal();
        }
    }
    return z;
}

GeneratedSamples generate_from_noise(const GeneratorNet& generator, const nn::Matrix& noise) {
    const nn::Matrix logits = nn::predict(generator.net, noise);
    const Eigen::Index d = static_cast<Eigen::Index>(generator.feature_dim());
    GeneratedSamples out;
    out.features = logits.leftCols(d).unaryExpr([](double x) { return nn::sigmoid(x); });
    out.label_units = logits.col(d).unaryExpr([](double x) { return nn::sigmoid(x); });
    return out;
}

GeneratedSamples generate_samples(const GeneratorNet& generator, std::size_t n, Rng& rng) {
    if (n == 0) {
        throw DomainError("generate_samples needs n >= 1");
    }
    return generate_from_noise(generator, sample_noise(n, generator.noise_dim(), rng));
}

std::vector<Label> classify_human_bot(const DiscriminatorNet& discriminator,
                                      const nn::Matrix& features) {
    const nn::Matrix logits = nn::predict(discriminator.net, features);
    std::vector<Label> out(static_cast<std::size_t>(logits.rows()));
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        out[static_cast<std::size_t>(i)] =
            logits(i, kHumanBotHead) > 0.0 ? Label::bot : Label::human;
    }
    return out;
}

BotHumanRatio mode_collapse_ratio(const DiscriminatorNet& discriminator,
                                  const nn::Matrix& samples) {
    if (samples.rows() == 0) {
        throw DomainError("mode collapse ratio of an empty sample set");
    }
    const auto decisions = classify_human_bot(discriminator, samples);
    const auto bots = static_cast<std::size_t>(
        std::count(decisions.begin(), decisions.end(), Label::bot));
    return BotHumanRatio::from_counts(bots, decisions.size() - bots);
}

double human_bot_accuracy(const DiscriminatorNet& discriminator, const Dataset& data) {
    if (data.n_rows == 0) {
        throw DomainError("accuracy of an empty dataset");
    }
    const auto decisions = classify_human_bot(discriminator, data.to_matrix());
    std::size_t correct = 0;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        correct += decisions[i] == data.labels.at(i) ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(decisions.size());
}

std::optional<std::size_t> detect_mode_collapse(std::span<const BotHumanRatio> ratios,
                                                double threshold, std::size_t patience) {
    if (patience == 0) {
        patience = 1;
    }
    std::size_t run = 0;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        run = ratios[i].at_least(threshold) ? run + 1 : 0;
        if (run == patience) {
            return i + 1 - patience;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> detect_mode_collapse(const TrainLog& log, double threshold,
                                                std::size_t patience) {
    std::vector<BotHumanRatio> ratios;
    ratios.reserve(log.size());
    for (const auto& r : log) ratios.push_back(r.bot_human_ratio);
    return detect_mode_collapse(ratios, threshold, patience);
}

Dataset augment_dataset(const Dataset& real, const GeneratorNet& generator,
                        double synthetic_fraction, Rng& rng) {
    if (!(synthetic_fraction >= 0.0 && synthetic_fraction <= 1.0)) {
        throw DomainError("synthetic fraction must lie in [0,1]");
    }
    real.validate();
    if (generator.feature_dim() != real.n_cols) {
        throw ShapeError("generator emits " + std::to_string(generator.feature_dim()) +
                         " features, dataset has " + std::to_string(real.n_cols));
    }
    const std::size_t n = real.n_rows;
    // The small offset keeps products like 0.1 * 30 from rounding up past the integer.
    const auto replaced = std::min(
        n, static_cast<std::size_t>(std::ceil(synthetic_fraction * static_cast<double>(n) - 1e-9)));
    Dataset out = real;
    if (replaced == 0) {
        return out;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < replaced; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(order[i], order[j]);
    }
    const auto samples = generate_samples(generator, replaced, rng);
    const auto labels = samples.labels();
    if (out.labels.empty()) {
        out.labels.assign(n, Label::unlabeled);
    }
    for (std::size_t i = 0; i < replaced; ++i) {
        const std::size_t row = order[i];
        for (std::size_t c = 0; c < real.n_cols; ++c) {
            out.features[row * real.n_cols + c] = static_cast<float>(
                samples.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
        }
        out.labels[row] = labels[i];
        if (out.has_raw_aux()) {
            out.followers_raw[row] = 0.0;
            out.posts_raw[row] = 0.0;
        }
    }
    return out;
}

namespace {

void write_ratio(std::ostream& out, const BotHumanRatio& ratio) {
    if (ratio.infinite) {
        out << "inf";
    } else {
        out << ratio.value;
    }
}

}  // namespace

void write_train_log_csv(std::ostream& out, const TrainLog& log) {
    out << "epoch,d_loss,g_loss,bot_human_ratio,val_acc\n" << std::setprecision(10);
    for (const auto& r : log) {
        out << r.epoch << ',' << r.d_loss << ',' << r.g_loss << ',';
        write_ratio(out, r.bot_human_ratio);
        out << ',' << r.val_accuracy << '\n';
    }
}

void write_adversarial_log_csv(std::ostream& out, const AdversarialLog& log) {
    const std::size_t k = log.empty() ? 0 : log.front().disc_losses.size();
    const bool judged = !log.empty() && log.front().judged_ratio.has_value();
    out << "epoch,g_loss,mean_active_d_loss,label_ratio," << (judged ? "judged_ratio," : "")
        << "active";
    for (std::size_t i = 0; i < k; ++i) out << ",d" << i << "_loss";
    out << '\n' << std::setprecision(10);
    for (const auto& r : log) {
        out << r.epoch << ',' << r.g_loss << ',' << mean_active_loss(r) << ',';
        write_ratio(out, r.label_ratio);
        out << ',';
        if (judged) {
            if (r.judged_ratio) write_ratio(out, *r.judged_ratio);
            out << ',';
        }
        for (std::size_t i = 0; i < r.active.size(); ++i) {
            out << (i ? ";" : "") << r.active[i];
        }
        for (const auto& loss : r.disc_losses) {
            out << ',';
            if (loss) out << *loss;
        }
        out << '\n';
    }
}

}  // namespace botgan::gan
