#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "botgan/baselines.hpp"
#include "botgan/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace botgan;
using namespace botgan::baselines;

namespace {

BaselineParams fast_params() {
    BaselineParams p;
    p.mlp_hidden = {16};
    p.mlp_epochs = 5;
    p.rf_trees = 10;
    p.svm_passes = 5;
    return p;
}

const BaselineKind kAll[] = {BaselineKind::knn, BaselineKind::linear_svm, BaselineKind::mlp,
                             BaselineKind::random_forest};

}  // namespace

TEST(BaselineKind, NamesRoundTrip) {
    for (auto k : kAll) EXPECT_EQ(kind_from_string(to_string(k)), k);
    EXPECT_EQ(kind_from_string("random_forest"), BaselineKind::random_forest);
    EXPECT_EQ(kind_from_string("linear_svm"), BaselineKind::linear_svm);
    EXPECT_THROW(kind_from_string("xgboost"), ConfigError);
}

TEST(Knn, OneNeighbourMemorizesTrainingSet) {
    const auto s = fixture::small_splits();
    BaselineParams p;
    p.knn_k = 1;
    const auto model = train_baseline(BaselineKind::knn, s.train, p, 1);
    const auto pred = predict(model, s.train.to_matrix());
    const auto y = s.train.label_vector();
    for (std::size_t i = 0; i < pred.size(); ++i) {
        EXPECT_EQ(pred[i], y[static_cast<Eigen::Index>(i)] > 0.5 ? 1 : 0) << "row " << i;
    }
}

TEST(Knn, ScoresMatchBruteForceNeighbourVote) {
    Rng rng(6);
    const Eigen::Index n = 60;
    const nn::Matrix x = oracle::random_matrix(rng, n, 3);
    std::vector<float> values;
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) values.push_back(static_cast<float>(x(i, j)));
        labels.push_back(x(i, 0) + 0.3 * rng.normal() > 0 ? 1 : 0);
    }
    const auto ds = oracle::make_dataset(static_cast<std::size_t>(n), 3, values, labels);
    BaselineParams p;
    p.knn_k = 3;
    const auto model = train_baseline(BaselineKind::knn, ds, p, 1);
    const nn::Matrix queries = oracle::random_matrix(rng, 15, 3);
    const auto scores = predict_scores(model, queries);
    const nn::Matrix stored = ds.to_matrix();
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
        std::vector<std::pair<double, int>> d;
        for (Eigen::Index i = 0; i < n; ++i) {
            d.emplace_back((stored.row(i) - queries.row(q)).squaredNorm(), labels[static_cast<std::size_t>(i)]);
        }
        std::sort(d.begin(), d.end());
        const double expected = (d[0].second + d[1].second + d[2].second) / 3.0;
        EXPECT_DOUBLE_EQ(scores[static_cast<std::size_t>(q)], expected);
    }
}

TEST(Knn, LoneBotRowWithKOne) {
    const auto ds = oracle::make_dataset(2, 1, {0.0F, 1.0F}, {0, 1});
    BaselineParams p;
    p.knn_k = 1;
    const auto model = train_baseline(BaselineKind::knn, ds, p, 1);
    nn::Matrix q(3, 1);
    q << 0.9, 0.6, 0.2;
    EXPECT_EQ(predict(model, q), (std::vector<int>{1, 1, 0}));
}

TEST(Svm, ScoreIsSigmoidOfMargin) {
    BaselineModel m;
    m.kind = BaselineKind::linear_svm;
    m.dim = 2;
    LinearSvmModel svm;
    svm.weights = nn::Vector::Zero(2);
    svm.bias = 1.0;
    m.model = svm;
    const auto scores = predict_scores(m, nn::Matrix::Ones(2, 2));
    EXPECT_NEAR(scores[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
    EXPECT_NEAR(scores[0], 0.7310585786, 1e-9);
    EXPECT_EQ(predict(m, nn::Matrix::Ones(2, 2)), (std::vector<int>{1, 1}));
}

TEST(Svm, ObjectiveHandValue) {
    nn::Matrix x(2, 2);
    x << 1, 0, 0, 1;
    nn::Vector w(2);
    w << 2, -1;
    // margins: +1 * 2.5 -> 0 hinge; -1 * (-1 + 0.5) = 0.5 -> hinge 0.5
    EXPECT_DOUBLE_EQ(svm_objective(w, 0.5, x, {1, 0}, 0.1), 0.05 * 5.0 + 0.25);
}

TEST(Svm, TrainingLowersObjective) {
    const auto s = fixture::small_splits();
    const auto model = train_baseline(BaselineKind::linear_svm, s.train, BaselineParams{}, 3);
    const auto& svm = std::get<LinearSvmModel>(model.model);
    ASSERT_EQ(svm.objective_trace.size(), BaselineParams{}.svm_passes + 1);
    EXPECT_LT(svm.objective_trace.back(), svm.objective_trace.front());
    EXPECT_DOUBLE_EQ(svm.objective_trace.front(), 1.0);  // w = 0, b = 0: every hinge is 1
}

TEST(Tree, ObviousSplitAtMidpoint) {
    nn::Matrix x(4, 1);
    x << 0.1, 0.2, 0.8, 0.9;
    Rng rng(1);
    const auto tree = train_decision_tree(x, {0, 0, 1, 1}, {0, 1, 2, 3}, TreeParams{}, rng);
    ASSERT_EQ(tree.nodes.size(), 3u);
    EXPECT_EQ(tree.nodes[0].feature, 0);
    EXPECT_DOUBLE_EQ(tree.nodes[0].threshold, 0.5);
    const double low = 0.3;
    const double high = 0.7;
    EXPECT_EQ(tree.score(&low, 1), 0.0);
    EXPECT_EQ(tree.score(&high, 1), 1.0);
}

TEST(Tree, PureOrUnsplittableDataIsALeaf) {
    nn::Matrix x(3, 1);
    x << 0.5, 0.5, 0.5;
    Rng rng(1);
    const auto tree = train_decision_tree(x, {0, 1, 1}, {0, 1, 2}, TreeParams{}, rng);
    ASSERT_EQ(tree.nodes.size(), 1u);
    EXPECT_NEAR(tree.nodes[0].bot_fraction, 2.0 / 3.0, 1e-15);
}

TEST(Forest, SingleUnbaggedTreeEqualsPlainTree) {
    const auto s = fixture::small_splits();
    BaselineParams p;
    p.rf_trees = 1;
    p.rf_bootstrap = false;
    p.rf_max_depth = 0;
    p.rf_max_features = s.train.n_cols;
    const std::uint64_t seed = 13;
    const auto forest = train_baseline(BaselineKind::random_forest, s.train, p, seed);

    const nn::Matrix x = s.train.to_matrix();
    std::vector<int> y;
    for (auto l : s.train.labels) y.push_back(l == Label::bot ? 1 : 0);
    std::vector<std::size_t> rows(s.train.n_rows);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Rng rng(derive_seed(seed, Stream::baseline, 0));
    const auto tree = train_decision_tree(x, y, rows, TreeParams{}, rng);

    const auto& trees = std::get<ForestModel>(forest.model).trees;
    ASSERT_EQ(trees.size(), 1u);
    EXPECT_EQ(trees[0], tree);
    const nn::Matrix t = s.test.to_matrix();
    const auto scores = predict_scores(forest, t);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const nn::Vector row = t.row(i).transpose();
        EXPECT_EQ(scores[static_cast<std::size_t>(i)], tree.score(row.data(), 1) > 0.5 ? 1.0 : 0.0);
    }
}

TEST(Baselines, DeterministicForEveryKind) {
    const auto s = fixture::small_splits();
    const nn::Matrix t = s.test.to_matrix();
    for (auto kind : kAll) {
        const auto a = predict_scores(train_baseline(kind, s.train, fast_params(), 4), t);
        const auto b = predict_scores(train_baseline(kind, s.train, fast_params(), 4), t);
        EXPECT_EQ(a, b) << to_string(kind);
        for (double v : a) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Baselines, SeparableFixtureIsLearned) {
    const auto s = fixture::small_splits(3, 1000);
    const nn::Matrix t = s.test.to_matrix();
    const auto y = s.test.label_vector();
    BaselineParams params;  // defaults, with a smaller forest
    params.rf_trees = 20;
    for (auto kind : kAll) {
        const auto pred = predict(train_baseline(kind, s.train, params, 2), t);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            correct += pred[i] == (y[static_cast<Eigen::Index>(i)] > 0.5 ? 1 : 0);
        }
        EXPECT_GE(static_cast<double>(correct) / static_cast<double>(pred.size()), 0.85)
            << to_string(kind);
    }
}

TEST(Baselines, ErrorsAndEmptyInput) {
    const auto s = fixture::small_splits();
    for (auto kind : kAll) {
        const auto model = train_baseline(kind, s.train, fast_params(), 1);
        EXPECT_TRUE(predict_scores(model, nn::Matrix(0, 8)).empty());
        EXPECT_THROW(predict_scores(model, nn::Matrix::Zero(2, 5)), ShapeError);
    }
    auto one_class = s.train;
    for (auto& l : one_class.labels) l = Label::human;
    EXPECT_THROW(train_baseline(BaselineKind::knn, one_class, fast_params(), 1), DomainError);
}
