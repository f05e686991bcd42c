// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any required criterion fails. Artifacts (training logs) land in
// ./acceptance_artifacts relative to the working directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "botgan/baselines.hpp"
#include "botgan/checkpoint.hpp"
#include "botgan/dataio.hpp"
#include "botgan/dropoutgan.hpp"
#include "botgan/evalmetrics.hpp"
#include "botgan/features.hpp"
#include "botgan/gan.hpp"
#include "botgan/nncore.hpp"
#include "oracles.hpp"

using namespace botgan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const fs::path kArtifacts = "acceptance_artifacts";

// The shared synthetic fixture: 10000 x 100, separation 0.8, seed 42, split
// and (all-column) selection exactly as the command-line pipeline does it.
struct Fixture {
    Dataset train;
    Dataset val;
    Dataset test;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        SynthConfig c;
        c.n_rows = 10000;
        c.n_features = 100;
        c.cluster_separation = 0.8;
        c.seed = 42;
        const Dataset full = synth_generate(c);
        Rng rng(derive_seed(42, Stream::split));
        const auto idx = split_80_10_10(full, rng);
        return Fixture{full.subset(idx.train), full.subset(idx.validation), full.subset(idx.test)};
    }();
    return f;
}

gan::GanConfig default_config() {
    gan::GanConfig c;  // noise 100, lr 0.002, batch 256, 50 epochs, dropout 0.5, 128x128 relu
    c.feature_dim = 100;
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool logs_identical(const gan::TrainLog& a, const gan::TrainLog& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].epoch != b[i].epoch || !same_bits(a[i].d_loss, b[i].d_loss) ||
            !same_bits(a[i].g_loss, b[i].g_loss) ||
            !(a[i].bot_human_ratio == b[i].bot_human_ratio) ||
            !same_bits(a[i].val_accuracy, b[i].val_accuracy)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

Outcome gradient_oracle() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1);
    double worst = 0.0;
    std::size_t entries = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto net = oracle::random_network(rng, 32);
        const auto n = static_cast<Eigen::Index>(1 + rng.uniform_index(16));
        const nn::Matrix x = oracle::random_matrix(rng, n, static_cast<Eigen::Index>(net.in_dim()));
        const nn::Matrix coeffs =
            oracle::random_matrix(rng, n, static_cast<Eigen::Index>(net.out_dim()));
        const bool train = trial % 2 == 1;
        const std::uint64_t mask_seed = 1000 + static_cast<std::uint64_t>(trial);
        Rng mask(mask_seed);
        const auto fwd = nn::forward(net, x, train, 0.3, mask);
        const auto grads = nn::backward(net, fwd.cache, coeffs);
        const auto check = oracle::check_against_fd(net, x, coeffs, grads, train, 0.3, mask_seed);
        worst = std::max(worst, check.max_relative_error);
        entries += check.checked;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-4 && seconds <= 30.0,
            fmt("50 networks, %.0f entries, max rel err %.2e, %.1f s", static_cast<double>(entries),
                worst, seconds)};
}

Outcome adam_closed_form() {
    nn::MlpParams p;
    p.layers = {{1, 1, nn::Activation::identity}};
    p.weights = {nn::Matrix::Constant(1, 1, 0.3)};
    p.biases = {nn::Vector::Zero(1)};
    auto state = nn::AdamState::for_params(p, 0.002);
    auto g = nn::Gradients::zeros_like(p);
    g.weights[0](0, 0) = 1.0;
    nn::adam_step(p, g, state);
    // m = 0.1, v = 0.001; bias correction gives m_hat = v_hat = 1.
    const double m_hat = (0.1 * 1.0) / (1.0 - 0.9);
    const double v_hat = (0.001 * 1.0) / (1.0 - 0.999);
    const double expected = 0.3 - 0.002 * m_hat / (std::sqrt(v_hat) + 1e-8);
    const double err = std::abs(p.weights[0](0, 0) - expected);
    return {err <= 1e-12, fmt("|w - w_expected| = %.2e", err)};
}

Outcome bce_stability() {
    bool finite = true;
    for (double x : {-1e3, -100.0, 0.0, 100.0, 1e3}) {
        for (double t : {0.0, 0.5, 1.0}) {
            const auto r = nn::bce_with_logits(nn::Vector::Constant(1, x), nn::Vector::Constant(1, t));
            finite = finite && std::isfinite(r.loss) && std::isfinite(r.grad[0]);
        }
    }
    const auto at_zero = nn::bce_with_logits(nn::Vector::Zero(1), nn::Vector::Ones(1));
    const double err = std::abs(at_zero.loss - std::log(2.0));
    return {finite && err <= 1e-12,
            std::string(finite ? "all 15 cells finite" : "non-finite cell") +
                fmt(", |loss(0,1) - ln 2| = %.2e", err)};
}

Outcome information_gain_oracle() {
    Rng rng(4);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = 2 + rng.uniform_index(999);
        const std::size_t levels = 1 + rng.uniform_index(16);
        std::vector<int> codes(rows);
        std::vector<int> labels(rows);
        std::vector<float> values(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            codes[r] = static_cast<int>(rng.uniform_index(levels));
            labels[r] = rng.uniform() < 0.15 + 0.05 * codes[r] ? 1 : 0;
            values[r] = static_cast<float>((codes[r] + 0.5) / 16.0);  // bin centres
        }
        labels[0] = 0;
        labels[1] = 1;
        const auto ds = oracle::make_dataset(rows, 1, values, labels);
        worst = std::max(worst, std::abs(information_gain(ds, 16).scores[0] -
                                         oracle::mutual_information_bits(codes, labels)));
    }
    const auto boolean =
        oracle::make_dataset(6, 1, {1, 1, 1, 0, 0, 0}, {1, 1, 1, 0, 0, 0});
    const double one_bit = information_gain(boolean).scores[0];
    return {worst <= 1e-12 && one_bit == 1.0,
            fmt("100 tables, max |diff| %.2e; boolean case %.17g bits", worst, one_bit)};
}

Outcome metrics_oracles() {
    const std::vector<int> p{1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
    const std::vector<int> y{1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
    const auto m = eval::classification_metrics(p, y);
    const bool hand = m.bot.accuracy == 0.8 && m.bot.precision == 2.0 / 3.0 &&
                      m.bot.recall == 2.0 / 3.0 && m.bot.f1 == 2.0 / 3.0;

    const std::vector<double> followers{3, 1};
    const std::vector<double> posts{1, 1};
    const auto impacts = eval::impact_scores(followers, posts).impacts();
    const double mitigation = eval::impact_mitigation(std::vector<int>{1, 1},
                                                      std::vector<int>{1, 0}, impacts);
    const bool impact_hand = impacts == std::vector<double>{0.75, 0.25} && mitigation == 0.5;

    Rng rng(5);
    bool bounded = true;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(50);
        std::vector<double> f(n);
        std::vector<double> q(n);
        std::vector<int> pred(n);
        std::vector<int> truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] = std::floor(rng.uniform() * 1e6);
            q[i] = std::floor(rng.uniform() * 1e4);
            pred[i] = rng.uniform() < 0.5;
            truth[i] = rng.uniform() < 0.5;
        }
        const double s = eval::impact_mitigation(pred, truth, eval::impact_scores(f, q).impacts());
        bounded = bounded && s >= -1.0 && s <= 1.0;
    }
    return {hand && impact_hand && bounded,
            fmt("acc %.17g, P=R=F1 %.17g; mitigation %.17g; 10000 fuzz cases ", m.bot.accuracy,
                m.bot.f1, mitigation) +
                (bounded ? "in [-1,1]" : "OUT OF RANGE")};
}

// The conventional run's D* also classifies the Dropout-GAN probes in 7 and 8.
const gan::GanBundle& conventional_reference() {
    static const gan::GanBundle b =
        gan::train_conventional(fixture().train, fixture().val, default_config(), 42);
    return b;
}

Outcome end_to_end_training() {
    const auto& f = fixture();
    const auto start = std::chrono::steady_clock::now();
    const auto& bundle = conventional_reference();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double accuracy = gan::human_bot_accuracy(bundle.discriminator, f.test);
    fs::create_directories(kArtifacts);
    std::ofstream log(kArtifacts / "conventional_train_log.csv");
    gan::write_train_log_csv(log, bundle.log);
    return {accuracy >= 0.95 && seconds <= 300.0,
            fmt("D* test accuracy %.4f, training %.1f s", accuracy, seconds)};
}

// Criteria 7 and 8 share the single-discriminator rf-only reference run.
const gan::RfGanResult& rf_reference() {
    static const gan::RfGanResult r = [] {
        auto c = default_config();
        c.epochs = 100;
        return gan::train_rf_only(fixture().train, c, 42, &conventional_reference().discriminator);
    }();
    return r;
}

Outcome dropout_balance() {
    dropout::DropoutGanConfig c;
    c.base = default_config();
    c.base.epochs = 100;
    c.num_discriminators = 5;
    c.keep_threshold = 0.5;
    const auto bundle =
        dropout::train_dropout(fixture().train, c, 42, &conventional_reference().discriminator);
    fs::create_directories(kArtifacts);
    {
        std::ofstream out(kArtifacts / "dropout_gan_k5_log.csv");
        gan::write_adversarial_log_csv(out, bundle.log);
        std::ofstream ref(kArtifacts / "rf_only_k1_log.csv");
        gan::write_adversarial_log_csv(ref, rf_reference().log);
    }
    // Both checks cover the final 20 epochs. The bot/human ratio is the probe
    // batch as classified by D*'s hb head; whole-run infinities (D* and the
    // untrained label unit) are reported alongside.
    const std::size_t window = bundle.log.size() - 20;
    double worst_factor = 1.0;
    std::size_t infinite = 0;
    std::size_t unjudged = 0;
    std::size_t run_infinite = 0;
    std::size_t label_infinite = 0;
    for (std::size_t e = 0; e < bundle.log.size(); ++e) {
        const auto& r = bundle.log[e];
        const bool inf = r.judged_ratio && r.judged_ratio->infinite;
        run_infinite += inf ? 1 : 0;
        label_infinite += r.label_ratio.infinite ? 1 : 0;
        if (e < window) continue;
        const double g = r.g_loss;
        const double d = gan::mean_active_loss(r);
        worst_factor = std::max(worst_factor, std::max(g / d, d / g));
        infinite += inf ? 1 : 0;
        unjudged += r.judged_ratio ? 0 : 1;
    }
    const auto& last = bundle.log.back();
    const auto& ref_last = rf_reference().log.back();
    return {worst_factor <= 3.0 && infinite == 0 && unjudged == 0,
            fmt("last 20 epochs: worst g/d factor %.3f, infinite D* ratios %.0f; ", worst_factor,
                static_cast<double>(infinite)) +
                fmt("whole run: infinite D* ratios %.0f, label-unit %.0f; ",
                    static_cast<double>(run_infinite), static_cast<double>(label_infinite)) +
                fmt("final ratio %.3f; ", last.judged_ratio ? last.judged_ratio->value : std::nan("")) +
                fmt("final g %.3f d %.3f (k=1 reference: g %.3f)", last.g_loss,
                    gan::mean_active_loss(last), ref_last.g_loss)};
}

Outcome degenerate_equivalence() {
    dropout::DropoutGanConfig c;
    c.base = default_config();
    c.base.epochs = 100;
    c.num_discriminators = 1;
    c.keep_threshold = 0.0;
    const auto bundle =
        dropout::train_dropout(fixture().train, c, 42, &conventional_reference().discriminator);
    const auto& ref = rf_reference();
    const bool same = bundle.log == ref.log && bundle.generator == ref.generator &&
                      bundle.discriminators.size() == 1 &&
                      bundle.discriminators[0] == ref.discriminator;
    return {same, fmt("%.0f epochs compared; logs and parameters %s",
                      static_cast<double>(ref.log.size())) +
                      (same ? "bit-identical" : "DIFFER")};
}

Outcome determinism_and_persistence() {
    const auto& f = fixture();
    auto c = default_config();
    c.epochs = 5;
    const auto a = gan::train_conventional(f.train, f.val, c, 7);
    const auto b = gan::train_conventional(f.train, f.val, c, 7);
    const bool conventional_same = logs_identical(a.log, b.log) && a.discriminator == b.discriminator;

    dropout::DropoutGanConfig dc;
    dc.base = c;
    const auto da = dropout::train_dropout(f.train, dc, 7);
    const auto db = dropout::train_dropout(f.train, dc, 7);
    const bool dropout_same = da.log == db.log && da.generator == db.generator;

    // Checkpoint: logits within 1e-5 wherever |logit| <= 10.
    checkpoint::Checkpoint ck;
    ck.model_kind = "gan";
    ck.networks = {{"generator", a.generator.net}, {"discriminator", a.discriminator.net}};
    const auto restored = checkpoint::decode(checkpoint::encode(ck));
    const nn::Matrix x = f.test.to_matrix();
    const nn::Matrix before = nn::predict(a.discriminator.net, x);
    const nn::Matrix after = nn::predict(restored.network("discriminator"), x);
    Rng rng(3);
    const nn::Matrix z = gan::sample_noise(500, c.noise_dim, rng);
    const nn::Matrix g_before = nn::predict(a.generator.net, z);
    const nn::Matrix g_after = nn::predict(restored.network("generator"), z);
    double worst = 0.0;
    std::size_t compared = 0;
    auto compare = [&](const nn::Matrix& p, const nn::Matrix& q) {
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            if (std::abs(p.data()[i]) > 10.0) continue;
            worst = std::max(worst, std::abs(p.data()[i] - q.data()[i]));
            ++compared;
        }
    };
    compare(before, after);
    compare(g_before, g_after);

    SynthConfig sc;
    sc.n_rows = 500;
    sc.n_features = 20;
    sc.seed = 9;
    Dataset ds = synth_generate(sc);
    ds.labels[3] = Label::unlabeled;
    const bool bdf_exact = decode_bdf(encode_bdf(ds)) == ds;

    const bool pass = conventional_same && dropout_same && worst <= 1e-5 && compared > 0 && bdf_exact;
    return {pass, std::string("5-epoch logs ") +
                      (conventional_same && dropout_same ? "bit-identical" : "DIFFER") +
                      fmt("; checkpoint max |logit diff| %.2e over %.0f logits; ", worst,
                          static_cast<double>(compared)) +
                      "BDF round trip " + (bdf_exact ? "exact" : "NOT exact")};
}

Outcome percentile_and_closeness() {
    // Twenty accounts in creation order as (prediction, label); the table
    // below holds cumulative TP, FP, FN and F1 = 2TP / (2TP + FP + FN).
    const int seq[20][2] = {{1, 1}, {0, 0}, {1, 0}, {0, 1}, {1, 1}, {1, 1}, {0, 0},
                            {0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}, {1, 1}, {0, 0},
                            {1, 1}, {1, 0}, {0, 0}, {0, 1}, {1, 1}, {0, 0}};
    const double expected[20] = {1.0,       1.0,       2.0 / 3.0,  0.5,        2.0 / 3.0,
                                 0.75,      0.75,      0.75,       2.0 / 3.0,  8.0 / 11.0,
                                 2.0 / 3.0, 2.0 / 3.0, 5.0 / 7.0,  5.0 / 7.0,  0.75,
                                 12.0 / 17, 12.0 / 17, 2.0 / 3.0,  0.7,        0.7};
    // Stored out of order: row r was created at step 7r mod 20.
    std::vector<int> pred(20);
    std::vector<int> label(20);
    std::vector<double> created(20);
    for (int r = 0; r < 20; ++r) {
        const int step = (7 * r) % 20;
        created[static_cast<std::size_t>(r)] = 1000.0 + step;
        pred[static_cast<std::size_t>(r)] = seq[step][0];
        label[static_cast<std::size_t>(r)] = seq[step][1];
    }
    const auto rows = eval::percentile_f1(pred, label, created, 5.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < 20; ++j) worst = std::max(worst, std::abs(rows[j].f1 - expected[j]));
    const bool table_ok = rows.size() == 20 && worst <= 1e-15;

    const auto real = oracle::make_dataset(2, 1, {0.5F, 0.5F}, {0, 0});
    Eigen::MatrixXd near(1, 1);
    near << 0.52;
    Eigen::MatrixXd far(1, 1);
    far << 0.53;
    const bool boundary = eval::closeness_from_samples(near, real, 0.05)[0].close_count == 1 &&
                          eval::closeness_from_samples(far, real, 0.05)[0].close_count == 0;

    Rng rng(10);
    SynthConfig sc;
    sc.n_rows = 400;
    sc.n_features = 10;
    sc.seed = 2;
    const Dataset ds = synth_generate(sc);
    const Eigen::MatrixXd samples = oracle::random_matrix(rng, 300, 10, 0.2).array() + 0.5;
    std::vector<double> tolerances(20);
    for (auto& t : tolerances) t = rng.uniform() * 0.5;
    std::sort(tolerances.begin(), tolerances.end());
    std::vector<std::size_t> previous(10, 0);
    bool monotone = true;
    for (double t : tolerances) {
        std::vector<std::size_t> counts(10);
        for (const auto& row : eval::closeness_from_samples(samples, ds, t)) {
            counts[row.feature_index] = row.close_count;
        }
        for (std::size_t k = 0; k < 10; ++k) monotone = monotone && counts[k] >= previous[k];
        previous = counts;
    }
    return {table_ok && boundary && monotone,
            fmt("20-band table max |diff| %.1e; ", worst) +
                (boundary ? "0.52 close / 0.53 not" : "boundary WRONG") + "; " +
                (monotone ? "monotone over 20 tolerances" : "NOT monotone")};
}

Outcome baseline_sanity() {
    const auto& f = fixture();
    const nn::Matrix x = f.test.to_matrix();
    std::vector<int> truth;
    for (auto l : f.test.labels) truth.push_back(l == Label::bot ? 1 : 0);
    std::string detail;
    bool all = true;
    for (auto kind : {baselines::BaselineKind::knn, baselines::BaselineKind::linear_svm,
                      baselines::BaselineKind::mlp, baselines::BaselineKind::random_forest}) {
        const auto model = baselines::train_baseline(kind, f.train, baselines::BaselineParams{}, 42);
        const double acc =
            eval::classification_metrics(baselines::predict(model, x), truth).bot.accuracy;
        all = all && acc >= 0.90;
        detail += std::string(baselines::to_string(kind)) + fmt(" %.4f, ", acc);
    }

    baselines::BaselineParams p;
    p.rf_trees = 1;
    p.rf_bootstrap = false;
    p.rf_max_depth = 0;
    p.rf_max_features = f.train.n_cols;
    const auto forest = baselines::train_baseline(baselines::BaselineKind::random_forest, f.train, p, 42);
    const nn::Matrix tx = f.train.to_matrix();
    std::vector<int> ty;
    for (auto l : f.train.labels) ty.push_back(l == Label::bot ? 1 : 0);
    std::vector<std::size_t> rows(f.train.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Rng rng(derive_seed(42, Stream::baseline, 0));
    const auto tree = baselines::train_decision_tree(tx, ty, rows, baselines::TreeParams{}, rng);
    const auto& trees = std::get<baselines::ForestModel>(forest.model).trees;
    const bool same_tree = trees.size() == 1 && trees[0] == tree;
    detail += fmt("single-tree forest vs plain tree (%.0f nodes): ",
                  static_cast<double>(tree.nodes.size())) +
              (same_tree ? "identical" : "DIFFERENT");
    return {all && same_tree, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient oracle", gradient_oracle},
        {2, "Adam closed form", adam_closed_form},
        {3, "BCE stability", bce_stability},
        {4, "information-gain oracle", information_gain_oracle},
        {5, "metrics oracles", metrics_oracles},
        {6, "end-to-end synthetic training", end_to_end_training},
        {7, "Dropout-GAN balance", dropout_balance},
        {8, "degenerate equivalence", degenerate_equivalence},
        {9, "determinism and persistence", determinism_and_persistence},
        {10, "percentile and closeness oracles", percentile_and_closeness},
        {11, "baseline sanity", baseline_sanity},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %2d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("SKIP criterion 12 (reference-dataset reproduction): optional, needs the MGTAB "
                "dataset, which is not available here\n");
    std::printf("%d of %zu required criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
