#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "botgan/baselines.hpp"
#include "botgan/checkpoint.hpp"
#include "botgan/dataio.hpp"
#include "botgan/dropoutgan.hpp"
#include "botgan/error.hpp"
#include "botgan/evalmetrics.hpp"
#include "botgan/features.hpp"
#include "botgan/gan.hpp"

namespace botgan::cli {

using nlohmann::json;
using report::Cell;
using report::Table;

std::filesystem::path Context::artifact(const std::string& name) {
    const auto p = out_dir / name;
    outputs.push_back(p.string());
    return p;
}

void Context::write_report(const std::string& stem, const Table& table) {
    const auto path = artifact(stem + "." + std::string(report::to_string(format)));
    report::Meta meta{command, seed, cfg.json().dump()};
    report::write_table(path, table, meta, format);
}

namespace {

constexpr OptionKind kUint = OptionKind::uint;
constexpr OptionKind kReal = OptionKind::real;
constexpr OptionKind kText = OptionKind::text;
constexpr OptionKind kFlag = OptionKind::flag;

std::vector<OptionDef> common_options(json data_default = nullptr) {
    return {
        {"seed", kUint, "root seed; falls back to BOTGAN_SEED", nullptr},
        {"data", kText, "dataset path (BDF unless stated otherwise)", std::move(data_default)},
        {"out", kText, "output directory", "."},
        {"format", kText, "report format: csv or json", "csv"},
        {"sequential", kFlag, "run single-threaded", false},
    };
}

std::vector<OptionDef> selection_options() {
    return {
        {"top-k", kUint, "keep the k highest-information-gain features (0 keeps all)", 100},
        {"ig-bins", kUint, "equal-width bins for information gain", 10},
    };
}

std::vector<OptionDef> gan_options() {
    return {
        {"epochs", kUint, "training epochs", 50},
        {"batch-size", kUint, "minibatch size", 256},
        {"learning-rate", kReal, "Adam learning rate", 0.002},
        {"noise-dim", kUint, "generator noise width", 100},
        {"dropout", kReal, "discriminator dropout rate", 0.5},
        {"hidden", OptionKind::uint_list, "hidden layer widths, e.g. 128,128",
         json::array({128, 128})},
        {"activation", kText, "hidden activation: relu, leaky_relu, sigmoid, identity", "relu"},
    };
}

std::vector<OptionDef> dropout_options() {
    return {
        {"discriminators", kUint, "number of discriminators k", 5},
        {"keep-threshold", kReal, "discriminator takes part iff u > threshold", 0.5},
    };
}

std::vector<OptionDef> concat(std::initializer_list<std::vector<OptionDef>> groups) {
    std::vector<OptionDef> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
}

gan::GanConfig gan_config(const Resolved& cfg, std::size_t feature_dim) {
    gan::GanConfig c;
    c.epochs = cfg.size("epochs");
    c.batch_size = cfg.size("batch-size");
    c.learning_rate = cfg.d("learning-rate");
    c.noise_dim = cfg.size("noise-dim");
    c.dropout_rate = cfg.d("dropout");
    c.hidden_widths = cfg.sizes("hidden");
    c.activation = nn::activation_from_string(cfg.s("activation"));
    c.feature_dim = feature_dim;
    c.validate();
    return c;
}

dropout::DropoutGanConfig dropout_config(const Resolved& cfg, std::size_t feature_dim) {
    dropout::DropoutGanConfig c;
    c.base = gan_config(cfg, feature_dim);
    c.num_discriminators = cfg.size("discriminators");
    c.keep_threshold = cfg.d("keep-threshold");
    c.parallel = !cfg.b("sequential");
    c.validate();
    return c;
}

std::vector<int> binary_labels(const Dataset& data) {
    const auto y = data.label_vector();
    std::vector<int> out(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] > 0.5;
    return out;
}

std::vector<int> to_ints(const std::vector<Label>& labels) {
    std::vector<int> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] == Label::bot;
    return out;
}

Cell cell(double v) { return v; }
Cell cell(std::size_t v) { return static_cast<std::int64_t>(v); }
Cell cell(std::string v) { return v; }

Cell ratio_cell(const gan::BotHumanRatio& r) {
    return r.infinite ? std::numeric_limits<double>::infinity() : r.value;
}

// ---------------------------------------------------------------------------
// Data preparation shared by the training and evaluation commands.

struct Prepared {
    Dataset full;
    Dataset train;
    Dataset val;
    Dataset test;
    Dataset test_full;
    std::vector<std::size_t> features;
    std::uint64_t split_seed = 0;

    [[nodiscard]] json info() const {
        json names = json::array();
        for (std::size_t f : features) names.push_back(full.feature_names.at(f));
        return {{"source_dim", full.n_cols},
                {"feature_indices", features},
                {"feature_names", names},
                {"split_seed", split_seed}};
    }
};

Dataset load_dataset(const Resolved& cfg) {
    return read_bdf(cfg.path("data"));
}

Prepared split_and_select(Dataset full, std::uint64_t split_seed,
                          std::optional<std::vector<std::size_t>> features, std::size_t top_k,
                          std::size_t bins) {
    Prepared p;
    p.split_seed = split_seed;
    Rng split_rng(split_seed);
    const auto split = split_80_10_10(full, split_rng);
    const Dataset train_full = full.subset(split.train);
    if (features) {
        p.features = std::move(*features);
    } else if (top_k == 0 || top_k >= full.n_cols) {
        p.features.resize(full.n_cols);
        for (std::size_t i = 0; i < full.n_cols; ++i) p.features[i] = i;
    } else {
        p.features = top_k_indices(information_gain(train_full, bins), top_k);
    }
    p.train = select_columns(train_full, p.features);
    p.val = select_columns(full.subset(split.validation), p.features);
    p.test_full = full.subset(split.test);
    p.test = select_columns(p.test_full, p.features);
    p.full = std::move(full);
    return p;
}

Prepared prepare_from_seed(const Context& ctx) {
    return split_and_select(load_dataset(ctx.cfg), derive_seed(ctx.seed, Stream::split),
                            std::nullopt, ctx.cfg.size("top-k"), ctx.cfg.size("ig-bins"));
}

json checkpoint_data_info(const checkpoint::Checkpoint& ck, const std::string& path) {
    try {
        return json::parse(ck.config_json).at("data");
    } catch (const json::exception& e) {
        throw FormatError(path + ": checkpoint header lacks data selection info (" + e.what() + ")");
    }
}

Prepared prepare_from_checkpoint(const Context& ctx, const checkpoint::Checkpoint& ck,
                                 const std::string& ck_path) {
    const json info = checkpoint_data_info(ck, ck_path);
    Dataset full = load_dataset(ctx.cfg);
    const auto source_dim = info.at("source_dim").get<std::size_t>();
    if (full.n_cols != source_dim) {
        throw ShapeError(ck_path + " was trained on data with " + std::to_string(source_dim) +
                         " features, but " + ctx.cfg.s("data") + " has " +
                         std::to_string(full.n_cols));
    }
    auto features = info.at("feature_indices").get<std::vector<std::size_t>>();
    return split_and_select(std::move(full), info.at("split_seed").get<std::uint64_t>(),
                            std::move(features), 0, 10);
}

checkpoint::Checkpoint load_checkpoint(const Resolved& cfg, const std::string& key) {
    return checkpoint::load(cfg.path(key));
}

void save_checkpoint(Context& ctx, const std::string& file, const std::string& kind,
                     std::vector<checkpoint::NetworkEntry> networks, const json& data_info,
                     std::size_t epochs) {
    checkpoint::Checkpoint ck;
    ck.model_kind = kind;
    ck.networks = std::move(networks);
    ck.config_json = json{{"run", ctx.cfg.json()}, {"data", data_info}}.dump();
    ck.seed = ctx.seed;
    ck.epochs_done = epochs;
    checkpoint::save(ck, ctx.artifact(file));
}

void require_dim(const nn::MlpParams& net, std::size_t dim, const std::string& what) {
    if (net.in_dim() != dim) {
        throw ShapeError(what + " expects " + std::to_string(net.in_dim()) +
                         " features, selected data has " + std::to_string(dim));
    }
}

Table metrics_table(const eval::MetricsRecord& m) {
    Table t{{"metric", "value"}, {}};
    t.add_row({cell(std::string("accuracy")), cell(m.bot.accuracy)});
    t.add_row({cell(std::string("precision")), cell(m.bot.precision)});
    t.add_row({cell(std::string("recall")), cell(m.bot.recall)});
    t.add_row({cell(std::string("f1")), cell(m.bot.f1)});
    t.add_row({cell(std::string("macro_precision")), cell(m.macro.precision)});
    t.add_row({cell(std::string("macro_recall")), cell(m.macro.recall)});
    t.add_row({cell(std::string("macro_f1")), cell(m.macro.f1)});
    t.add_row({cell(std::string("tp")), cell(m.counts.tp)});
    t.add_row({cell(std::string("fp")), cell(m.counts.fp)});
    t.add_row({cell(std::string("fn")), cell(m.counts.fn)});
    t.add_row({cell(std::string("tn")), cell(m.counts.tn)});
    return t;
}

Table train_log_table(const gan::TrainLog& log) {
    Table t{{"epoch", "d_loss", "g_loss", "bot_human_ratio", "val_acc"}, {}};
    for (const auto& e : log) {
        t.add_row({cell(e.epoch), cell(e.d_loss), cell(e.g_loss), ratio_cell(e.bot_human_ratio),
                   cell(e.val_accuracy)});
    }
    return t;
}

Table adversarial_table(const gan::AdversarialLog& log, std::size_t k) {
    const bool judged = !log.empty() && log.front().judged_ratio.has_value();
    Table t{{"epoch", "g_loss", "mean_active_d_loss", "label_ratio"}, {}};
    if (judged) t.columns.push_back("judged_ratio");
    t.columns.push_back("active");
    for (std::size_t i = 0; i < k; ++i) t.columns.push_back("d" + std::to_string(i) + "_loss");
    for (const auto& e : log) {
        std::string active;
        for (std::size_t a : e.active) active += (active.empty() ? "" : ";") + std::to_string(a);
        std::vector<Cell> row{cell(e.epoch), cell(e.g_loss), cell(gan::mean_active_loss(e)),
                              ratio_cell(e.label_ratio)};
        if (judged) row.push_back(e.judged_ratio ? ratio_cell(*e.judged_ratio) : Cell{});
        row.push_back(cell(active));
        for (const auto& d : e.disc_losses) row.push_back(d ? Cell(*d) : Cell{});
        t.add_row(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Commands

void run_synth(Context& ctx) {
    SynthConfig sc;
    sc.n_rows = ctx.cfg.size("rows");
    sc.n_features = ctx.cfg.size("features");
    sc.cluster_separation = ctx.cfg.d("separation");
    sc.bot_fraction = ctx.cfg.d("bot-fraction");
    sc.boolean_feature_fraction = ctx.cfg.d("boolean-fraction");
    sc.cluster_spread = ctx.cfg.d("spread");
    sc.seed = ctx.seed;
    const Dataset ds = synth_generate(sc);
    const auto data = ctx.cfg.s("data");
    if (data.empty()) {
        write_bdf(ds, ctx.artifact("dataset.bdf"));
    } else {
        ctx.outputs.push_back(data);
        write_bdf(ds, data);
    }
}

std::vector<std::string> comma_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::optional<std::string> optional_text(const Resolved& cfg, const std::string& key) {
    if (!cfg.has(key) || cfg.s(key).empty()) return std::nullopt;
    return cfg.s(key);
}

void run_prepare(Context& ctx) {
    CsvManifest manifest;
    manifest.feature_columns = comma_list(ctx.cfg.s("feature-columns"));
    manifest.label_column = ctx.cfg.s("label-column");
    manifest.followers_column = optional_text(ctx.cfg, "followers-column");
    manifest.posts_column = optional_text(ctx.cfg, "posts-column");
    manifest.created_column = optional_text(ctx.cfg, "created-column");
    Dataset ds = import_csv(ctx.cfg.path("data"), manifest);
    json scaling = nullptr;
    if (!ctx.cfg.b("no-scale")) {
        auto [scaled, record] = minmax_scale(ds);
        ds = std::move(scaled);
        scaling = {{"feature_names", ds.feature_names}, {"min", record.min}, {"max", record.max}};
    }
    write_bdf(ds, ctx.artifact("dataset.bdf"));
    std::ofstream(ctx.artifact("scaling.json")) << scaling.dump(2) << '\n';
}

void run_rank_features(Context& ctx) {
    const Dataset full = load_dataset(ctx.cfg);
    Rng split_rng(derive_seed(ctx.seed, Stream::split));
    const auto split = split_80_10_10(full, split_rng);
    const Dataset train = full.subset(split.train);
    const auto ranking = information_gain(train, ctx.cfg.size("ig-bins"));
    Table t{{"feature_index", "feature_name", "information_gain", "rank"}, {}};
    for (std::size_t r = 0; r < ranking.order.size(); ++r) {
        const std::size_t f = ranking.order[r];
        t.add_row({cell(f), cell(full.feature_names.at(f)), cell(ranking.scores[f]), cell(r + 1)});
    }
    ctx.write_report("feature_ranking", t);
}

void run_train_gan(Context& ctx) {
    const Prepared p = prepare_from_seed(ctx);
    const auto config = gan_config(ctx.cfg, p.train.n_cols);
    const auto bundle = gan::train_conventional(p.train, p.val, config, ctx.seed);
    save_checkpoint(ctx, "gan.dgck", "gan",
                    {{"generator", bundle.generator.net}, {"discriminator", bundle.discriminator.net}},
                    p.info(), config.epochs);
    ctx.write_report("train_log", train_log_table(bundle.log));

    const auto predictions = to_ints(gan::classify_human_bot(bundle.discriminator, p.test.to_matrix()));
    auto table = metrics_table(eval::classification_metrics(predictions, binary_labels(p.test)));
    const auto collapse = gan::detect_mode_collapse(bundle.log);
    table.add_row({cell(std::string("mode_collapse_epoch")),
                   collapse ? cell(*collapse) : Cell{}});
    ctx.write_report("test_metrics", table);
}

void run_train_dropout_gan(Context& ctx) {
    const Prepared p = prepare_from_seed(ctx);
    const auto config = dropout_config(ctx.cfg, p.train.n_cols);
    std::optional<gan::DiscriminatorNet> judge;
    if (ctx.cfg.has("judge")) {
        const auto judge_ck = load_checkpoint(ctx.cfg, "judge");
        if (checkpoint_data_info(judge_ck, ctx.cfg.s("judge")).at("feature_indices") !=
            p.info().at("feature_indices")) {
            throw ShapeError("--judge checkpoint was trained on different features");
        }
        judge = gan::DiscriminatorNet{judge_ck.network("discriminator")};
    }
    const gan::DiscriminatorNet* judge_ptr = judge ? &*judge : nullptr;
    const auto bundle = dropout::train_dropout(p.train, config, ctx.seed, judge_ptr);
    std::vector<checkpoint::NetworkEntry> nets{{"generator", bundle.generator.net}};
    for (std::size_t i = 0; i < bundle.discriminators.size(); ++i) {
        nets.push_back({"discriminator_" + std::to_string(i), bundle.discriminators[i].net});
    }
    save_checkpoint(ctx, "dropout_gan.dgck", "dropout_gan", std::move(nets), p.info(),
                    config.base.epochs);
    ctx.write_report("adversarial_log", adversarial_table(bundle.log, config.num_discriminators));
    if (ctx.cfg.b("compare-rf")) {
        const auto rf = gan::train_rf_only(p.train, config.base, ctx.seed, judge_ptr);
        ctx.write_report("rf_only_log", adversarial_table(rf.log, 1));
    }
}

void run_refine(Context& ctx) {
    const auto dstar_ck = load_checkpoint(ctx.cfg, "dstar");
    const auto gstar_ck = load_checkpoint(ctx.cfg, "gstar");
    const Prepared p = prepare_from_checkpoint(ctx, dstar_ck, ctx.cfg.s("dstar"));
    if (checkpoint_data_info(gstar_ck, ctx.cfg.s("gstar")).at("feature_indices") !=
        checkpoint_data_info(dstar_ck, ctx.cfg.s("dstar")).at("feature_indices")) {
        throw ShapeError("--gstar and --dstar checkpoints were trained on different features");
    }
    const gan::DiscriminatorNet dstar{dstar_ck.network("discriminator")};
    const gan::GeneratorNet gstar{gstar_ck.network("generator")};
    require_dim(dstar.net, p.train.n_cols, "D*");
    auto config = gan_config(ctx.cfg, p.train.n_cols);
    config.noise_dim = gstar.noise_dim();
    const auto epochs = ctx.cfg.size("refine-epochs");
    const auto refined = dropout::refine_dstar(dstar, gstar, p.train, epochs, config, ctx.seed, p.val);
    save_checkpoint(ctx, "refined.dgck", "refined_dstar", {{"discriminator", refined.discriminator.net}},
                    p.info(), epochs);
    ctx.write_report("refine_log", train_log_table(refined.log));
}

void run_evaluate(Context& ctx) {
    const auto ck = load_checkpoint(ctx.cfg, "checkpoint");
    const Prepared p = prepare_from_checkpoint(ctx, ck, ctx.cfg.s("checkpoint"));
    const gan::DiscriminatorNet disc{ck.network("discriminator")};
    require_dim(disc.net, p.test.n_cols, ctx.cfg.s("checkpoint"));
    const auto predictions = to_ints(gan::classify_human_bot(disc, p.test.to_matrix()));
    const auto labels = binary_labels(p.test);
    auto table = metrics_table(eval::classification_metrics(predictions, labels));

    std::vector<double> followers;
    std::vector<double> posts;
    std::string source = "none";
    const auto& tf = p.test_full;
    if (tf.has_raw_aux()) {
        followers = tf.followers_raw;
        posts = tf.posts_raw;
        source = "raw";
    } else if (auto fname = optional_text(ctx.cfg, "followers-feature")) {
        const auto pname = optional_text(ctx.cfg, "posts-feature");
        if (!pname) throw UsageError("--followers-feature needs --posts-feature");
        auto column = [&](const std::string& name) {
            for (std::size_t c = 0; c < tf.n_cols; ++c) {
                if (tf.feature_names[c] != name) continue;
                std::vector<double> v(tf.n_rows);
                for (std::size_t r = 0; r < tf.n_rows; ++r) v[r] = tf.at(r, c);
                return v;
            }
            throw ConfigError("dataset has no feature named '" + name + "'");
        };
        followers = column(*fname);
        posts = column(*pname);
        source = "scaled-impact";
    }
    if (source != "none") {
        const auto impacts = eval::impact_scores(followers, posts);
        table.add_row({cell(std::string("impact_mitigation")),
                       cell(eval::impact_mitigation(predictions, labels, impacts.impacts()))});
        table.add_row({cell(std::string("impact_degenerate")),
                       cell(std::string(impacts.degenerate ? "true" : "false"))});
    }
    table.add_row({cell(std::string("impact_source")), cell(source)});
    ctx.write_report("evaluation", table);
}

void run_sweep_k(Context& ctx) {
    const auto ck = load_checkpoint(ctx.cfg, "dstar");
    const Prepared p = prepare_from_checkpoint(ctx, ck, ctx.cfg.s("dstar"));
    const gan::DiscriminatorNet dstar{ck.network("discriminator")};
    require_dim(dstar.net, p.train.n_cols, "D*");
    auto config = dropout_config(ctx.cfg, p.train.n_cols);
    dropout::SweepOptions options;
    options.k_values = ctx.cfg.sizes("k");
    options.refine_epochs = ctx.cfg.size("refine-epochs");
    options.parallel = !ctx.cfg.b("sequential");
    config.parallel = false;
    const auto rows = dropout::sweep_discriminator_count(p.train, p.test, dstar, config, options,
                                                         ctx.seed);
    auto table = [&](bool refined) {
        Table t{{"k", "dstar_test_accuracy", "dstar_test_loss"}, {}};
        for (const auto& r : rows) {
            const auto& s = refined ? *r.refined : r.frozen;
            t.add_row({cell(r.k), cell(s.rf_accuracy), cell(s.rf_loss)});
        }
        return t;
    };
    ctx.write_report("sweep_k", table(false));
    if (options.refine_epochs > 0) ctx.write_report("sweep_k_refined", table(true));
}

void run_sweep_augmentation(Context& ctx) {
    const auto ck = load_checkpoint(ctx.cfg, "gstar");
    const Prepared p = prepare_from_checkpoint(ctx, ck, ctx.cfg.s("gstar"));
    const gan::GeneratorNet gstar{ck.network("generator")};
    if (gstar.feature_dim() != p.train.n_cols) {
        throw ShapeError("G* emits " + std::to_string(gstar.feature_dim()) +
                         " features, selected data has " + std::to_string(p.train.n_cols));
    }
    const auto config = gan_config(ctx.cfg, p.train.n_cols);
    eval::AugmentationOptions options;
    options.repeats = ctx.cfg.size("repeats");
    options.parallel = !ctx.cfg.b("sequential");
    const Dataset& val = p.val;
    const eval::DstarTrainer trainer = [&](const Dataset& train, std::uint64_t seed) {
        return gan::train_conventional(train, val, config, seed).discriminator;
    };
    const auto rows = eval::augmentation_sweep(trainer, p.train, p.test, gstar,
                                               ctx.cfg.reals("fractions"), options, ctx.seed);
    Table t{{"fraction", "test_accuracy", "test_loss", "repeats"}, {}};
    for (const auto& r : rows) {
        t.add_row({cell(r.fraction), cell(r.test_accuracy), cell(r.test_loss), cell(r.repeats)});
    }
    ctx.write_report("augmentation", t);
}

void run_percentile_eval(Context& ctx) {
    const auto ck = load_checkpoint(ctx.cfg, "checkpoint");
    const Prepared p = prepare_from_checkpoint(ctx, ck, ctx.cfg.s("checkpoint"));
    const gan::DiscriminatorNet disc{ck.network("discriminator")};
    require_dim(disc.net, p.test.n_cols, ctx.cfg.s("checkpoint"));
    const auto& tf = p.test_full;
    if (!tf.created_at_index) {
        throw DomainError(ctx.cfg.s("data") + " has no creation-date feature");
    }
    std::vector<double> created(tf.n_rows);
    for (std::size_t r = 0; r < tf.n_rows; ++r) created[r] = tf.at(r, *tf.created_at_index);
    const auto predictions = to_ints(gan::classify_human_bot(disc, p.test.to_matrix()));
    const auto mode = ctx.cfg.b("disjoint") ? eval::BandMode::disjoint : eval::BandMode::cumulative;
    const auto rows = eval::percentile_f1(predictions, binary_labels(p.test), created,
                                          ctx.cfg.d("band"), mode);
    Table t{{"band_upper_percentile", "rows", "f1"}, {}};
    for (const auto& r : rows) {
        t.add_row({cell(r.band_upper_percentile), cell(r.rows), cell(r.f1)});
    }
    ctx.write_report("percentile_f1", t);
}

void run_closeness(Context& ctx) {
    const auto ck = load_checkpoint(ctx.cfg, "gstar");
    const Prepared p = prepare_from_checkpoint(ctx, ck, ctx.cfg.s("gstar"));
    const gan::GeneratorNet gstar{ck.network("generator")};
    if (gstar.feature_dim() != p.train.n_cols) {
        throw ShapeError("G* emits " + std::to_string(gstar.feature_dim()) +
                         " features, selected data has " + std::to_string(p.train.n_cols));
    }
    Rng rng(derive_seed(ctx.seed, Stream::eval));
    const auto rows = eval::closeness_analysis(gstar, p.train, ctx.cfg.d("tolerance"),
                                               ctx.cfg.size("samples"), rng);
    Table t{{"feature_index", "feature_name", "close_count", "close_fraction"}, {}};
    for (const auto& r : rows) {
        t.add_row({cell(r.feature_index), cell(r.feature_name), cell(r.close_count),
                   cell(r.close_fraction)});
    }
    ctx.write_report("closeness", t);
}

void run_baseline(Context& ctx) {
    const Prepared p = prepare_from_seed(ctx);
    baselines::BaselineParams params;
    params.knn_k = ctx.cfg.size("knn-k");
    params.svm_lambda = ctx.cfg.d("svm-lambda");
    params.svm_passes = ctx.cfg.size("svm-passes");
    params.mlp_epochs = ctx.cfg.size("mlp-epochs");
    params.rf_trees = ctx.cfg.size("rf-trees");
    params.rf_max_depth = ctx.cfg.size("rf-max-depth");
    params.rf_max_features = ctx.cfg.size("rf-max-features");

    std::vector<baselines::BaselineKind> kinds;
    const auto requested = ctx.cfg.s("kind");
    if (requested == "all") {
        kinds = {baselines::BaselineKind::knn, baselines::BaselineKind::linear_svm,
                 baselines::BaselineKind::mlp, baselines::BaselineKind::random_forest};
    } else {
        for (const auto& name : comma_list(requested)) {
            try {
                kinds.push_back(baselines::kind_from_string(name));
            } catch (const ConfigError& e) {
                throw UsageError(std::string("--kind: ") + e.what());
            }
        }
    }
    const auto x = p.test.to_matrix();
    const auto labels = binary_labels(p.test);
    Table t{{"kind", "accuracy", "precision", "recall", "f1", "macro_precision", "macro_recall",
             "macro_f1"},
            {}};
    for (auto kind : kinds) {
        const auto model = baselines::train_baseline(kind, p.train, params, ctx.seed);
        const auto m = eval::classification_metrics(baselines::predict(model, x), labels);
        t.add_row({cell(std::string(baselines::to_string(kind))), cell(m.bot.accuracy),
                   cell(m.bot.precision), cell(m.bot.recall), cell(m.bot.f1),
                   cell(m.macro.precision), cell(m.macro.recall), cell(m.macro.f1)});
    }
    ctx.write_report("baselines", t);
}

}  // namespace

const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> specs = [] {
        std::vector<CommandSpec> out;
        out.push_back({"prepare", "import a CSV, min-max scale it and write a BDF dataset",
                       concat({common_options(),
                               {{"feature-columns", kText, "comma-separated feature columns (empty: all)", ""},
                                {"label-column", kText, "label column", "label"},
                                {"followers-column", kText, "raw follower count column", ""},
                                {"posts-column", kText, "raw post count column", ""},
                                {"created-column", kText, "creation-date feature column", ""},
                                {"no-scale", kFlag, "skip min-max scaling", false}}}),
                       run_prepare});
        out.push_back({"synth", "generate a seeded two-cluster synthetic dataset",
                       concat({common_options(""),
                               {{"rows", kUint, "number of accounts", 10000},
                                {"features", kUint, "number of features", 100},
                                {"separation", kReal, "distance between class means", 0.8},
                                {"bot-fraction", kReal, "fraction of bot rows", 0.27},
                                {"boolean-fraction", kReal, "fraction of 0/1 features", 0.2},
                                {"spread", kReal, "per-feature cluster standard deviation", 0.15}}}),
                       run_synth});
        out.push_back({"rank-features", "rank features by information gain on the training split",
                       concat({common_options(), {{"ig-bins", kUint, "equal-width bins", 10}}}),
                       run_rank_features});
        out.push_back({"train-gan", "train the conventional two-head GAN",
                       concat({common_options(), selection_options(), gan_options()}),
                       run_train_gan});
        out.push_back({"train-dropout-gan", "train one generator against k dropped-out discriminators",
                       concat({common_options(), selection_options(), gan_options(),
                               dropout_options(),
                               {{"compare-rf", kFlag, "also log a single-discriminator rf-only run", false},
                                {"judge", kText, "GAN checkpoint whose discriminator classifies the probe batch", nullptr}}}),
                       run_train_dropout_gan});
        out.push_back({"refine", "fine-tune D* against a frozen G*",
                       concat({common_options(), gan_options(),
                               {{"dstar", kText, "conventional GAN checkpoint", nullptr},
                                {"gstar", kText, "Dropout-GAN checkpoint", nullptr},
                                {"refine-epochs", kUint, "refinement epochs", 10}}}),
                       run_refine});
        out.push_back({"evaluate", "score a discriminator checkpoint on the test split",
                       concat({common_options(),
                               {{"checkpoint", kText, "checkpoint with a discriminator", nullptr},
                                {"followers-feature", kText, "feature used as followers when no raw column exists", ""},
                                {"posts-feature", kText, "feature used as posts when no raw column exists", ""}}}),
                       run_evaluate});
        out.push_back({"sweep-k", "D* accuracy against generators trained with k discriminators",
                       concat({common_options(), gan_options(), dropout_options(),
                               {{"dstar", kText, "conventional GAN checkpoint", nullptr},
                                {"k", OptionKind::uint_list, "discriminator counts, e.g. 1..10",
                                 json::array({1, 2, 3, 4, 5, 6, 7, 8, 9, 10})},
                                {"refine-epochs", kUint, "also report a refined D* (0 skips)", 0}}}),
                       run_sweep_k});
        out.push_back({"sweep-augmentation", "D* accuracy and loss versus synthetic data fraction",
                       concat({common_options(), gan_options(),
                               {{"gstar", kText, "Dropout-GAN checkpoint", nullptr},
                                {"fractions", OptionKind::real_list, "synthetic fractions",
                                 json::array({0.0, 0.25, 0.5, 0.75, 1.0})},
                                {"repeats", kUint, "seeded runs per fraction", 10}}}),
                       run_sweep_augmentation});
        out.push_back({"percentile-eval", "F1 over creation-date percentile bands",
                       concat({common_options(),
                               {{"checkpoint", kText, "checkpoint with a discriminator", nullptr},
                                {"band", kReal, "band width in percent", 5.0},
                                {"disjoint", kFlag, "evaluate each band alone instead of cumulatively", false}}}),
                       run_percentile_eval});
        out.push_back({"closeness", "count generated samples near the human feature means",
                       concat({common_options(),
                               {{"gstar", kText, "checkpoint with a generator", nullptr},
                                {"tolerance", kReal, "relative tolerance", 0.05},
                                {"samples", kUint, "generated samples", 1000}}}),
                       run_closeness});
        out.push_back({"baseline", "train and score k-NN, linear SVM, MLP and random forest",
                       concat({common_options(), selection_options(),
                               {{"kind", kText, "all, or a comma list of knn,svm,mlp,rf", "all"},
                                {"knn-k", kUint, "neighbours", 5},
                                {"svm-lambda", kReal, "L2 strength", 1e-4},
                                {"svm-passes", kUint, "passes over the data", 20},
                                {"mlp-epochs", kUint, "MLP epochs", 30},
                                {"rf-trees", kUint, "trees", 100},
                                {"rf-max-depth", kUint, "maximum depth (0: unlimited)", 12},
                                {"rf-max-features", kUint, "features per split (0: ceil(sqrt(d)))", 0}}}),
                       run_baseline});
        return out;
    }();
    return specs;
}

}  // namespace botgan::cli
