#pragma once

// Dense feed-forward networks in 64-bit precision: initialization, forward and
// backward passes with inverted dropout, binary cross-entropy on logits and
// the Adam optimizer. Batches are row-major in the sense that each row of a
// batch matrix is one sample.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "botgan/rng.hpp"

namespace botgan::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { identity, sigmoid, relu, leaky_relu };

std::string_view to_string(Activation a) noexcept;
/// Throws ConfigError on unknown names.
Activation activation_from_string(std::string_view name);

inline constexpr double kDefaultLeakySlope = 0.01;

struct LayerSpec {
    std::size_t in_dim = 1;
    std::size_t out_dim = 1;
    Activation activation = Activation::identity;
    double leaky_slope = kDefaultLeakySlope;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Throws ShapeError unless every dim is positive and layers chain.
void validate_specs(const std::vector<LayerSpec>& specs);

/// Builds `[in, hidden..., out]` with `hidden_activation` on hidden layers.
std::vector<LayerSpec> make_specs(std::size_t in_dim, const std::vector<std::size_t>& hidden,
                                  std::size_t out_dim, Activation hidden_activation,
                                  Activation output_activation);

struct MlpParams {
    std::vector<LayerSpec> layers;
    std::vector<Matrix> weights;  // out_dim x in_dim
    std::vector<Vector> biases;   // out_dim

    [[nodiscard]] std::size_t in_dim() const { return layers.front().in_dim; }
    [[nodiscard]] std::size_t out_dim() const { return layers.back().out_dim; }
    [[nodiscard]] std::size_t parameter_count() const;

    /// Exact (bitwise on values) equality of specs and parameters.
    friend bool operator==(const MlpParams& a, const MlpParams& b);
};

/// Same layout as MlpParams, used for gradients and Adam moments.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
    /// d(loss)/d(input batch), n x in_dim. Needed to chain networks (generator
    /// through discriminator).
    Matrix input;

    static Gradients zeros_like(const MlpParams& params);
    Gradients& operator+=(const Gradients& other);
    Gradients& operator*=(double factor);
};

struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;   // per layer, n x out_dim
    std::vector<Matrix> post;  // per layer, after activation and dropout
    /// 0/1 keep masks for hidden layers that had dropout applied.
    std::vector<std::optional<Matrix>> masks;
    double dropout_scale = 1.0;
};

struct ForwardResult {
    Matrix outputs;
    ForwardCache cache;
};

/// He-scaled normal weights for relu/leaky_relu layers, Xavier-scaled
/// (sqrt(1/in)) normal weights for sigmoid/identity layers, zero biases.
MlpParams init_mlp(const std::vector<LayerSpec>& specs, Rng& rng);

/// Output-layer activations are applied as specified, so an identity output
/// layer yields logits. Dropout only touches hidden layers and only in train
/// mode; kept units are scaled by 1/(1-rate). Masks consume `rng` row by row.
ForwardResult forward(const MlpParams& params, const Matrix& batch, bool train_mode,
                      double dropout_rate, Rng& rng);

/// Eval-mode forward without a cache.
Matrix predict(const MlpParams& params, const Matrix& batch);

struct BceResult {
    double loss = 0.0;
    Vector grad;
};

/// Mean binary cross-entropy on logits, stable for any finite logit:
///   loss_i = max(x,0) - x*t + log1p(exp(-|x|)),  grad_i = (sigmoid(x) - t) / n
BceResult bce_with_logits(const Vector& logits, const Vector& targets);

double sigmoid(double x) noexcept;

/// Exact gradient of the loss whose derivative w.r.t. the outputs is
/// `output_grad` (so a mean-reduced loss must already carry its 1/n).
Gradients backward(const MlpParams& params, const ForwardCache& cache, const Matrix& output_grad);

struct AdamState {
    std::vector<Matrix> m_weights;
    std::vector<Vector> m_biases;
    std::vector<Matrix> v_weights;
    std::vector<Vector> v_biases;
    std::size_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double learning_rate = 0.002;

    static AdamState for_params(const MlpParams& params, double learning_rate);
};

/// In-place Adam update with bias correction. Throws NumericError naming the
/// layer when a gradient entry is not finite; parameters are left untouched.
void adam_step(MlpParams& params, const Gradients& grads, AdamState& state);

}  // namespace botgan::nn
