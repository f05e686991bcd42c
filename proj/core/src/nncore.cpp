#include "botgan/nncore.hpp"

#include <cmath>
#include <string>

#include "botgan/error.hpp"

namespace botgan::nn {

std::string_view to_string(Activation a) noexcept {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::sigmoid: return "sigmoid";
        case Activation::relu: return "relu";
        case Activation::leaky_relu: return "leaky_relu";
    }
    return "identity";
}

Activation activation_from_string(std::string_view name) {
    if (name == "identity") return Activation::identity;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "relu") return Activation::relu;
    if (name == "leaky_relu") return Activation::leaky_relu;
    throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void validate_specs(const std::vector<LayerSpec>& specs) {
    if (specs.empty()) {
        throw ShapeError("network needs at least one layer");
    }
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (specs[i].in_dim == 0 || specs[i].out_dim == 0) {
            throw ShapeError("layer " + std::to_string(i) + " has a zero dimension");
        }
        if (i > 0 && specs[i - 1].out_dim != specs[i].in_dim) {
            throw ShapeError("layer " + std::to_string(i) + " expects in_dim " +
                             std::to_string(specs[i].in_dim) + " but layer " +
                             std::to_string(i - 1) + " produces " +
                             std::to_string(specs[i - 1].out_dim));
        }
    }
}

std::vector<LayerSpec> make_specs(std::size_t in_dim, const std::vector<std::size_t>& hidden,
                                  std::size_t out_dim, Activation hidden_activation,
                                  Activation output_activation) {
    std::vector<LayerSpec> specs;
    std::size_t prev = in_dim;
    for (std::size_t width : hidden) {
        specs.push_back({prev, width, hidden_activation, kDefaultLeakySlope});
        prev = width;
    }
    specs.push_back({prev, out_dim, output_activation, kDefaultLeakySlope});
    validate_specs(specs);
    return specs;
}

std::size_t MlpParams::parameter_count() const {
    std::size_t total = 0;
    for (const auto& l : layers) {
        total += l.in_dim * l.out_dim + l.out_dim;
    }
    return total;
}

bool operator==(const MlpParams& a, const MlpParams& b) {
    if (a.layers != b.layers || a.weights.size() != b.weights.size()) {
        return false;
    }
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) {
            return false;
        }
    }
    return true;
}

Gradients Gradients::zeros_like(const MlpParams& params) {
    Gradients g;
    for (const auto& spec : params.layers) {
        g.weights.push_back(Matrix::Zero(static_cast<Eigen::Index>(spec.out_dim),
                                         static_cast<Eigen::Index>(spec.in_dim)));
        g.biases.push_back(Vector::Zero(static_cast<Eigen::Index>(spec.out_dim)));
    }
    return g;
}

Gradients& Gradients::operator+=(const Gradients& other) {
    if (other.weights.size() != weights.size()) {
        throw ShapeError("gradient layer count mismatch");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] += other.weights[l];
        biases[l] += other.biases[l];
    }
    if (input.size() == other.input.size()) {
        input += other.input;
    }
    return *this;
}

Gradients& Gradients::operator*=(double factor) {
    for (std::size_t l = 0; l < weights.size(); ++l) {
        weights[l] *= factor;
        biases[l] *= factor;
    }
    input *= factor;
    return *this;
}

double sigmoid(double x) noexcept {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

Matrix activate(const Matrix& pre, const LayerSpec& spec) {
    switch (spec.activation) {
        case Activation::identity:
            return pre;
        case Activation::sigmoid:
            return pre.unaryExpr([](double x) { return sigmoid(x); });
        case Activation::relu:
            return pre.cwiseMax(0.0);
        case Activation::leaky_relu: {
            const double slope = spec.leaky_slope;
            return pre.unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; });
        }
    }
    return pre;
}

// Multiplies `upstream` by the activation derivative evaluated at `pre`.
Matrix activation_backward(const Matrix& upstream, const Matrix& pre, const LayerSpec& spec) {
    switch (spec.activation) {
        case Activation::identity:
            return upstream;
        case Activation::sigmoid: {
            const Matrix s = pre.unaryExpr([](double x) { return sigmoid(x); });
            return upstream.cwiseProduct(s.cwiseProduct((1.0 - s.array()).matrix()));
        }
        case Activation::relu:
            return upstream.cwiseProduct(
                pre.unaryExpr([](double x) { return x > 0.0 ? 1.0 : 0.0; }));
        case Activation::leaky_relu: {
            const double slope = spec.leaky_slope;
            return upstream.cwiseProduct(
                pre.unaryExpr([slope](double x) { return x > 0.0 ? 1.0 : slope; }));
        }
    }
    return upstream;
}

void check_batch(const MlpParams& params, const Matrix& batch) {
    if (params.layers.empty()) {
        throw ShapeError("network has no layers");
    }
    if (static_cast<std::size_t>(batch.cols()) != params.in_dim()) {
        throw ShapeError("batch width " + std::to_string(batch.cols()) +
                         " does not match network input " + std::to_string(params.in_dim()));
    }
    if (!batch.allFinite()) {
        throw NumericError("non-finite value in network input batch");
    }
}

}  // namespace

MlpParams init_mlp(const std::vector<LayerSpec>& specs, Rng& rng) {
    validate_specs(specs);
    MlpParams params;
    params.layers = specs;
    for (const auto& spec : specs) {
        const bool rectifier =
            spec.activation == Activation::relu || spec.activation == Activation::leaky_relu;
        const double scale = std::sqrt((rectifier ? 2.0 : 1.0) / static_cast<double>(spec.in_dim));
        Matrix w(static_cast<Eigen::Index>(spec.out_dim), static_cast<Eigen::Index>(spec.in_dim));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = scale * rng.normal();
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(Vector::Zero(static_cast<Eigen::Index>(spec.out_dim)));
    }
    return params;
}

ForwardResult forward(const MlpParams& params, const Matrix& batch, bool train_mode,
                      double dropout_rate, Rng& rng) {
    check_batch(params, batch);
    if (!(dropout_rate >= 0.0 && dropout_rate <= 1.0)) {
        throw DomainError("dropout rate must lie in [0,1]");
    }
    const bool use_dropout = train_mode && dropout_rate > 0.0;

    ForwardResult result;
    ForwardCache& cache = result.cache;
    cache.input = batch;
    cache.dropout_scale = dropout_rate < 1.0 ? 1.0 / (1.0 - dropout_rate) : 0.0;
    const std::size_t n_layers = params.layers.size();
    cache.pre.reserve(n_layers);
    cache.post.reserve(n_layers);
    cache.masks.assign(n_layers, std::nullopt);

    const Matrix* current = &cache.input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        Matrix pre = (*current) * params.weights[l].transpose();
        pre.rowwise() += params.biases[l].transpose();
        Matrix post = activate(pre, params.layers[l]);
        const bool hidden = l + 1 < n_layers;
        if (use_dropout && hidden) {
            Matrix mask(post.rows(), post.cols());
            for (Eigen::Index r = 0; r < mask.rows(); ++r) {
                for (Eigen::Index c = 0; c < mask.cols(); ++c) {
                    mask(r, c) = rng.uniform() >= dropout_rate ? 1.0 : 0.0;
                }
            }
            post = post.cwiseProduct(mask) * cache.dropout_scale;
            cache.masks[l] = std::move(mask);
        }
        cache.pre.push_back(std::move(pre));
        cache.post.push_back(std::move(post));
        current = &cache.post.back();
    }
    result.outputs = cache.post.back();
    return result;
}

Matrix predict(const MlpParams& params, const Matrix& batch) {
    check_batch(params, batch);
    Matrix current = batch;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Matrix pre = current * params.weights[l].transpose();
        pre.rowwise() += params.biases[l].transpose();
        current = activate(pre, params.layers[l]);
    }
    return current;
}

BceResult bce_with_logits(const Vector& logits, const Vector& targets) {
    if (logits.size() == 0) {
        throw DomainError("binary cross-entropy of an empty batch");
    }
    if (logits.size() != targets.size()) {
        throw ShapeError("logit/target length mismatch");
    }
    const auto n = static_cast<double>(logits.size());
    BceResult out;
    out.grad.resize(logits.size());
    double total = 0.0;
    for (Eigen::Index i = 0; i < logits.size(); ++i) {
        const double x = logits[i];
        const double t = targets[i];
        if (!(t >= 0.0 && t <= 1.0)) {
            throw DomainError("BCE target outside [0,1]");
        }
        total += std::max(x, 0.0) - x * t + std::log1p(std::exp(-std::abs(x)));
        out.grad[i] = (sigmoid(x) - t) / n;
    }
    out.loss = total / n;
    return out;
}

Gradients backward(const MlpParams& params, const ForwardCache& cache, const Matrix& output_grad) {
    const std::size_t n_layers = params.layers.size();
    if (cache.pre.size() != n_layers || cache.post.size() != n_layers ||
        cache.masks.size() != n_layers) {
        throw ShapeError("forward cache does not match network depth");
    }
    if (output_grad.rows() != cache.input.rows() ||
        static_cast<std::size_t>(output_grad.cols()) != params.out_dim()) {
        throw ShapeError("output gradient shape does not match forward outputs");
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
        if (static_cast<std::size_t>(cache.pre[l].cols()) != params.layers[l].out_dim) {
            throw ShapeError("forward cache layer " + std::to_string(l) +
                             " does not match network");
        }
    }

    Gradients grads;
    grads.weights.resize(n_layers);
    grads.biases.resize(n_layers);
    Matrix upstream = output_grad;
    for (std::size_t li = n_layers; li-- > 0;) {
        if (cache.masks[li]) {
            upstream = upstream.cwiseProduct(*cache.masks[li]) * cache.dropout_scale;
        }
        const Matrix delta = activation_backward(upstream, cache.pre[li], params.layers[li]);
        const Matrix& layer_input = li == 0 ? cache.input : cache.post[li - 1];
        grads.weights[li] = delta.transpose() * layer_input;
        grads.biases[li] = delta.colwise().sum().transpose();
        upstream = delta * params.weights[li];
    }
    grads.input = std::move(upstream);
    return grads;
}

AdamState AdamState::for_params(const MlpParams& params, double learning_rate) {
    AdamState state;
    state.learning_rate = learning_rate;
    const Gradients z = Gradients::zeros_like(params);
    state.m_weights = z.weights;
    state.m_biases = z.biases;
    state.v_weights = z.weights;
    state.v_biases = z.biases;
    return state;
}

void adam_step(MlpParams& params, const Gradients& grads, AdamState& state) {
    const std::size_t n_layers = params.layers.size();
    if (grads.weights.size() != n_layers || grads.biases.size() != n_layers ||
        state.m_weights.size() != n_layers || state.v_weights.size() != n_layers) {
        throw ShapeError("Adam state/gradient layer count does not match network");
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
        if (grads.weights[l].rows() != params.weights[l].rows() ||
            grads.weights[l].cols() != params.weights[l].cols() ||
            grads.biases[l].size() != params.biases[l].size()) {
            throw ShapeError("gradient shape mismatch at layer " + std::to_string(l));
        }
        if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite()) {
            throw NumericError("non-finite gradient at layer " + std::to_string(l));
        }
    }

    state.t += 1;
    const double b1 = state.beta1;
    const double b2 = state.beta2;
    const double correction1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
    const double correction2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
    const double lr = state.learning_rate;
    const double eps = state.epsilon;

    auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        param.array() -= lr * (m.array() / correction1) /
                         ((v.array() / correction2).sqrt() + eps);
    };
    for (std::size_t l = 0; l < n_layers; ++l) {
        update(params.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l]);
        update(params.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l]);
    }
}

}  // namespace botgan::nn
