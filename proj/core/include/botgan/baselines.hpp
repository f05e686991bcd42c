#pragma once

// Reference classifiers sharing one train/predict contract. Scores are bot
// probabilities in [0,1]; hard predictions are bot iff score > 0.5.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "botgan/dataio.hpp"
#include "botgan/nncore.hpp"
#include "botgan/rng.hpp"

namespace botgan::baselines {

enum class BaselineKind { knn, linear_svm, mlp, random_forest };

std::string_view to_string(BaselineKind kind) noexcept;
/// Accepts knn, svm / linear_svm, mlp, rf / random_forest.
BaselineKind kind_from_string(std::string_view name);

struct BaselineParams {
    std::size_t knn_k = 5;

    double svm_lambda = 1e-4;
    std::size_t svm_passes = 20;
    double svm_initial_rate = 0.01;

    std::vector<std::size_t> mlp_hidden{128, 128};
    std::size_t mlp_epochs = 30;
    std::size_t mlp_batch_size = 256;
    double mlp_learning_rate = 0.002;

    std::size_t rf_trees = 100;
    /// 0 grows until leaves are pure or too small to split.
    std::size_t rf_max_depth = 12;
    bool rf_bootstrap = true;
    /// 0 means ceil(sqrt(d)).
    std::size_t rf_max_features = 0;
    std::size_t rf_min_samples_split = 2;
};

struct KnnModel {
    std::size_t k = 5;
    nn::Matrix points;
    std::vector<int> labels;
};

struct LinearSvmModel {
    nn::Vector weights;
    double bias = 0.0;
    /// Regularized hinge objective after each pass (index 0 is the start).
    std::vector<double> objective_trace;
};

struct MlpModel {
    nn::MlpParams net;
};

struct TreeNode {
    /// -1 for leaves.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double bot_fraction = 0.0;

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    [[nodiscard]] double score(const double* row, Eigen::Index stride) const;
    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct TreeParams {
    std::size_t max_depth = 0;
    std::size_t max_features = 0;  // 0 means all features
    std::size_t min_samples_split = 2;
};

/// CART with Gini impurity. Candidate features are sampled per node (sorted
/// ascending); thresholds are midpoints between distinct sorted values and
/// rows go left when x <= threshold. Ties keep the first candidate found.
DecisionTree train_decision_tree(const nn::Matrix& x, const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows, const TreeParams& params,
                                 Rng& rng);

struct ForestModel {
    std::vector<DecisionTree> trees;
};

struct BaselineModel {
    BaselineKind kind = BaselineKind::knn;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::variant<KnnModel, LinearSvmModel, MlpModel, ForestModel> model;
};

/// Tree `t` of a forest uses Rng(derive_seed(seed, baseline, t)) for its
/// bootstrap draw and then for its feature sampling.
BaselineModel train_baseline(BaselineKind kind, const Dataset& train_data,
                             const BaselineParams& params, std::uint64_t seed);

std::vector<double> predict_scores(const BaselineModel& model, const nn::Matrix& features);
std::vector<int> predict(const BaselineModel& model, const nn::Matrix& features);

/// Regularized hinge objective of a linear model on labels in {0,1}.
double svm_objective(const nn::Vector& weights, double bias, const nn::Matrix& x,
                     const std::vector<int>& y, double lambda);

}  // namespace botgan::baselines
