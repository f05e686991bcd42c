#include "botgan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "botgan/error.hpp"

namespace botgan::baselines {

std::string_view to_string(BaselineKind kind) noexcept {
    switch (kind) {
        case BaselineKind::knn: return "knn";
        case BaselineKind::linear_svm: return "svm";
        case BaselineKind::mlp: return "mlp";
        case BaselineKind::random_forest: return "rf";
    }
    return "knn";
}

BaselineKind kind_from_string(std::string_view name) {
    if (name == "knn") return BaselineKind::knn;
    if (name == "svm" || name == "linear_svm") return BaselineKind::linear_svm;
    if (name == "mlp") return BaselineKind::mlp;
    if (name == "rf" || name == "random_forest") return BaselineKind::random_forest;
    throw ConfigError("unknown baseline '" + std::string(name) + "'");
}

namespace {

std::vector<int> binary_labels(const Dataset& data) {
    const nn::Vector y = data.label_vector();
    std::vector<int> out(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] > 0.5;
    return out;
}

double gini(std::size_t bots, std::size_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(bots) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
}

// ---------------------------------------------------------------------------
// k-NN

KnnModel train_knn(const nn::Matrix& x, std::vector<int> y, std::size_t k) {
    if (k == 0) throw ConfigError("k-NN needs k >= 1");
    return {k, x, std::move(y)};
}

std::vector<double> knn_scores(const KnnModel& model, const nn::Matrix& queries) {
    std::vector<double> out(static_cast<std::size_t>(queries.rows()));
    const auto n = static_cast<std::size_t>(model.points.rows());
    const std::size_t k = std::min(model.k, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        const Eigen::VectorXd d2 = (model.points.rowwise() - queries.row(q)).rowwise().squaredNorm();
        for (std::size_t i = 0; i < n; ++i) dist[i] = {d2[static_cast<Eigen::Index>(i)], i};
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::size_t bots = 0;
        for (std::size_t j = 0; j < k; ++j) bots += model.labels[dist[j].second] == 1 ? 1 : 0;
        out[static_cast<std::size_t>(q)] = static_cast<double>(bots) / static_cast<double>(k);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Linear SVM, primal stochastic subgradient on the hinge loss.

LinearSvmModel train_svm(const nn::Matrix& x, const std::vector<int>& y,
                         const BaselineParams& params, Rng& rng) {
    if (!(params.svm_lambda > 0.0) || !(params.svm_initial_rate > 0.0)) {
        throw ConfigError("SVM lambda and initial rate must be positive");
    }
    LinearSvmModel m;
    m.weights = nn::Vector::Zero(x.cols());
    m.objective_trace.push_back(svm_objective(m.weights, m.bias, x, y, params.svm_lambda));

    std::vector<std::size_t> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);

    const double lambda = params.svm_lambda;
    const double eta0 = params.svm_initial_rate;
    std::size_t t = 0;
    for (std::size_t pass = 0; pass < params.svm_passes; ++pass) {
        for (std::size_t i : order) {
            const double eta = eta0 / (1.0 + eta0 * lambda * static_cast<double>(t++));
            const auto row = x.row(static_cast<Eigen::Index>(i));
            const double sign = y[i] == 1 ? 1.0 : -1.0;
            const double margin = sign * (row.dot(m.weights) + m.bias);
            m.weights *= (1.0 - eta * lambda);
            if (margin < 1.0) {
                m.weights += eta * sign * row.transpose();
                m.bias += eta * sign;
            }
        }
        m.objective_trace.push_back(svm_objective(m.weights, m.bias, x, y, lambda));
    }
    return m;
}

// ---------------------------------------------------------------------------
// MLP on the shared nncore.

MlpModel train_mlp(const nn::Matrix& x, const std::vector<int>& y, const BaselineParams& params,
                   std::uint64_t seed) {
    Rng init(derive_seed(seed, Stream::init));
    Rng shuffle(derive_seed(seed, Stream::shuffle));
    Rng unused(derive_seed(seed, Stream::dropout));
    MlpModel m{nn::init_mlp(nn::make_specs(static_cast<std::size_t>(x.cols()), params.mlp_hidden, 1,
                                           nn::Activation::relu, nn::Activation::identity),
                            init)};
    auto adam = nn::AdamState::for_params(m.net, params.mlp_learning_rate);
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t batch = std::max<std::size_t>(1, params.mlp_batch_size);
    for (std::size_t epoch = 0; epoch < params.mlp_epochs; ++epoch) {
        shuffle.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t end = std::min(n, start + batch);
            nn::Matrix xb(static_cast<Eigen::Index>(end - start), x.cols());
            nn::Vector yb(static_cast<Eigen::Index>(end - start));
            for (std::size_t i = start; i < end; ++i) {
                xb.row(static_cast<Eigen::Index>(i - start)) = x.row(static_cast<Eigen::Index>(order[i]));
                yb[static_cast<Eigen::Index>(i - start)] = y[order[i]];
            }
            auto fwd = nn::forward(m.net, xb, true, 0.0, unused);
            const auto bce = nn::bce_with_logits(fwd.outputs.col(0), yb);
            const auto grads = nn::backward(m.net, fwd.cache, bce.grad);
            nn::adam_step(m.net, grads, adam);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Trees

struct TreeBuilder {
    const nn::Matrix& x;
    const std::vector<int>& y;
    const TreeParams& params;
    Rng& rng;
    DecisionTree tree;
    std::vector<std::size_t> candidates;

    int build(std::vector<std::size_t>& rows, std::size_t depth) {
        const std::size_t n = rows.size();
        std::size_t bots = 0;
        for (std::size_t r : rows) bots += static_cast<std::size_t>(y[r]);

        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[static_cast<std::size_t>(index)].bot_fraction =
            n > 0 ? static_cast<double>(bots) / static_cast<double>(n) : 0.0;

        const bool pure = bots == 0 || bots == n;
        const bool depth_reached = params.max_depth > 0 && depth >= params.max_depth;
        if (pure || depth_reached || n < std::max<std::size_t>(2, params.min_samples_split)) {
            return index;
        }

        const std::size_t d = static_cast<std::size_t>(x.cols());
        const std::size_t m = params.max_features == 0 ? d : std::min(params.max_features, d);
        std::iota(candidates.begin(), candidates.end(), std::size_t{0});
        if (m < d) {
            for (std::size_t i = 0; i < m; ++i) {
                const auto j = i + static_cast<std::size_t>(rng.uniform_index(d - i));
                std::swap(candidates[i], candidates[j]);
            }
            std::sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(m));
        }

        const double parent = gini(bots, n);
        double best_impurity = parent;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, int>> column(n);
        for (std::size_t ci = 0; ci < m; ++ci) {
            const std::size_t f = candidates[ci];
            for (std::size_t i = 0; i < n; ++i) {
                column[i] = {x(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(f)),
                             y[rows[i]]};
            }
            std::sort(column.begin(), column.end());
            std::size_t left_bots = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left_bots += static_cast<std::size_t>(column[i].second);
                if (column[i].first == column[i + 1].first) continue;
                const std::size_t nl = i + 1;
                const std::size_t nr = n - nl;
                const double impurity =
                    (static_cast<double>(nl) * gini(left_bots, nl) +
                     static_cast<double>(nr) * gini(bots - left_bots, nr)) /
                    static_cast<double>(n);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = static_cast<int>(f);
                    best_threshold = 0.5 * (column[i].first + column[i + 1].first);
                }
            }
        }
        if (best_feature < 0) {
            return index;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t r : rows) {
            (x(static_cast<Eigen::Index>(r), best_feature) <= best_threshold ? left : right)
                .push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int l = build(left, depth + 1);
        const int r = build(right, depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(index)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = l;
        node.right = r;
        return index;
    }
};

}  // namespace

double DecisionTree::score(const double* row, Eigen::Index stride) const {
    std::size_t at = 0;
    while (nodes[at].feature >= 0) {
        const double v = row[static_cast<Eigen::Index>(nodes[at].feature) * stride];
        at = static_cast<std::size_t>(v <= nodes[at].threshold ? nodes[at].left : nodes[at].right);
    }
    return nodes[at].bot_fraction;
}

DecisionTree train_decision_tree(const nn::Matrix& x, const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows, const TreeParams& params,
                                 Rng& rng) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
        throw ShapeError("tree training rows and labels differ in length");
    }
    if (rows.empty()) {
        throw DomainError("decision tree needs at least one row");
    }
    TreeBuilder builder{x, y, params, rng, {}, std::vector<std::size_t>(static_cast<std::size_t>(x.cols()))};
    std::vector<std::size_t> working = rows;
    builder.build(working, 0);
    return std::move(builder.tree);
}

double svm_objective(const nn::Vector& weights, double bias, const nn::Matrix& x,
                     const std::vector<int>& y, double lambda) {
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double sign = y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - sign * (x.row(i).dot(weights) + bias));
    }
    const double n = static_cast<double>(std::max<Eigen::Index>(1, x.rows()));
    return 0.5 * lambda * weights.squaredNorm() + hinge / n;
}

BaselineModel train_baseline(BaselineKind kind, const Dataset& train_data,
                             const BaselineParams& params, std::uint64_t seed) {
    train_data.validate();
    if (train_data.count(Label::human) == 0 || train_data.count(Label::bot) == 0) {
        throw DomainError("baseline training needs both human and bot rows");
    }
    const nn::Matrix x = train_data.to_matrix();
    const std::vector<int> y = binary_labels(train_data);

    BaselineModel model;
    model.kind = kind;
    model.dim = train_data.n_cols;
    model.seed = seed;
    switch (kind) {
        case BaselineKind::knn:
            model.model = train_knn(x, y, params.knn_k);
            break;
        case BaselineKind::linear_svm: {
            Rng rng(derive_seed(seed, Stream::baseline));
            model.model = train_svm(x, y, params, rng);
            break;
        }
        case BaselineKind::mlp:
            model.model = train_mlp(x, y, params, seed);
            break;
        case BaselineKind::random_forest: {
            if (params.rf_trees == 0) throw ConfigError("random forest needs at least one tree");
            const std::size_t d = train_data.n_cols;
            TreeParams tree_params;
            tree_params.max_depth = params.rf_max_depth;
            tree_params.max_features =
                params.rf_max_features > 0
                    ? params.rf_max_features
                    : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
            tree_params.min_samples_split = params.rf_min_samples_split;
            ForestModel forest;
            const std::size_t n = train_data.n_rows;
            for (std::size_t t = 0; t < params.rf_trees; ++t) {
                Rng rng(derive_seed(seed, Stream::baseline, t));
                std::vector<std::size_t> rows(n);
                if (params.rf_bootstrap) {
                    for (auto& r : rows) r = static_cast<std::size_t>(rng.uniform_index(n));
                } else {
                    std::iota(rows.begin(), rows.end(), std::size_t{0});
                }
                forest.trees.push_back(train_decision_tree(x, y, rows, tree_params, rng));
            }
            model.model = std::move(forest);
            break;
        }
    }
    return model;
}

std::vector<double> predict_scores(const BaselineModel& model, const nn::Matrix& features) {
    if (features.rows() == 0) {
        return {};
    }
    if (static_cast<std::size_t>(features.cols()) != model.dim) {
        throw ShapeError("baseline trained on " + std::to_string(model.dim) +
                         " features, got " + std::to_string(features.cols()));
    }
    return std::visit(
        [&](const auto& m) -> std::vector<double> {
            using M = std::decay_t<decltype(m)>;
            std::vector<double> out(static_cast<std::size_t>(features.rows()));
            if constexpr (std::is_same_v<M, KnnModel>) {
                return knn_scores(m, features);
            } else if constexpr (std::is_same_v<M, LinearSvmModel>) {
                const nn::Vector margin = (features * m.weights).array() + m.bias;
                for (Eigen::Index i = 0; i < margin.size(); ++i) {
                    out[static_cast<std::size_t>(i)] = nn::sigmoid(margin[i]);
                }
            } else if constexpr (std::is_same_v<M, MlpModel>) {
                const nn::Matrix logits = nn::predict(m.net, features);
                for (Eigen::Index i = 0; i < logits.rows(); ++i) {
                    out[static_cast<std::size_t>(i)] = nn::sigmoid(logits(i, 0));
                }
            } else {
                for (Eigen::Index i = 0; i < features.rows(); ++i) {
                    std::size_t votes = 0;
                    for (const auto& tree : m.trees) {
                        votes += tree.score(&features(i, 0), features.rows()) > 0.5 ? 1 : 0;
                    }
                    out[static_cast<std::size_t>(i)] =
                        static_cast<double>(votes) / static_cast<double>(m.trees.size());
                }
            }
            return out;
        },
        model.model);
}

std::vector<int> predict(const BaselineModel& model, const nn::Matrix& features) {
    const auto scores = predict_scores(model, features);
    std::vector<int> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] > 0.5 ? 1 : 0;
    return out;
}

}  // namespace botgan::baselines
