#pragma once

// Independent reference computations used by unit and acceptance tests.
// Nothing here calls the code under test except to evaluate forward passes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "botgan/dataio.hpp"
#include "botgan/nncore.hpp"
#include "botgan/rng.hpp"

namespace oracle {

using botgan::nn::Matrix;
using botgan::nn::MlpParams;

/// Random network with 1..3 layers, widths 1..max_dim and mixed activations.
inline MlpParams random_network(botgan::Rng& rng, std::size_t max_dim = 32) {
    using botgan::nn::Activation;
    const std::size_t depth = 1 + rng.uniform_index(3);
    std::vector<botgan::nn::LayerSpec> specs;
    std::size_t in = 1 + rng.uniform_index(max_dim);
    const Activation acts[] = {Activation::identity, Activation::sigmoid, Activation::relu,
                               Activation::leaky_relu};
    for (std::size_t l = 0; l < depth; ++l) {
        botgan::nn::LayerSpec s;
        s.in_dim = in;
        s.out_dim = 1 + rng.uniform_index(max_dim);
        s.activation = acts[rng.uniform_index(4)];
        s.leaky_slope = 0.1;
        specs.push_back(s);
        in = s.out_dim;
    }
    MlpParams p = botgan::nn::init_mlp(specs, rng);
    for (auto& b : p.biases) {
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.normal(0.0, 0.5);
    }
    return p;
}

inline Matrix random_matrix(botgan::Rng& rng, Eigen::Index rows, Eigen::Index cols,
                            double sd = 1.0) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
    }
    return m;
}

/// Scalar objective sum(coeffs .* outputs) evaluated with a fixed dropout
/// mask (the mask generator is re-seeded for every evaluation).
struct LinearProbe {
    const Matrix& input;
    const Matrix& coeffs;
    bool train_mode;
    double rate;
    std::uint64_t mask_seed;

    [[nodiscard]] double value(const MlpParams& p, const Matrix& x) const {
        botgan::Rng rng(mask_seed);
        return (botgan::nn::forward(p, x, train_mode, rate, rng).outputs.array() * coeffs.array())
            .sum();
    }

    /// Signs of all pre-activations; a change means a perturbation crossed a kink.
    [[nodiscard]] std::vector<bool> pattern(const MlpParams& p, const Matrix& x) const {
        botgan::Rng rng(mask_seed);
        const auto res = botgan::nn::forward(p, x, train_mode, rate, rng);
        std::vector<bool> out;
        for (const auto& pre : res.cache.pre) {
            for (Eigen::Index i = 0; i < pre.size(); ++i) out.push_back(pre.data()[i] > 0.0);
        }
        return out;
    }
};

inline double relative_error(double analytic, double numeric) {
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    return std::abs(analytic - numeric) / scale;
}

/// Central difference of one scalar slot. Steps that flip an activation
/// pattern are shrunk, since a one-sided kink makes the quotient meaningless.
template <typename Eval, typename Pattern>
double central_difference(double& slot, Eval&& eval, Pattern&& pattern) {
    const double original = slot;
    const auto base = pattern();
    double h = 1e-5 * std::max(1.0, std::abs(original));
    for (int attempt = 0; attempt < 6; ++attempt, h /= 10.0) {
        slot = original + h;
        const double up = eval();
        const bool up_same = pattern() == base;
        slot = original - h;
        const double down = eval();
        const bool down_same = pattern() == base;
        slot = original;
        if (up_same && down_same) return (up - down) / (2.0 * h);
    }
    slot = original;
    return std::nan("");
}

struct GradCheck {
    double max_relative_error = 0.0;
    std::size_t checked = 0;
};

/// Compares `analytic` (from backward) against central differences on every
/// weight, bias and input entry.
inline GradCheck check_against_fd(MlpParams params, Matrix input, const Matrix& coeffs,
                                  const botgan::nn::Gradients& analytic, bool train_mode,
                                  double rate, std::uint64_t mask_seed) {
    GradCheck out;
    const LinearProbe probe{input, coeffs, train_mode, rate, mask_seed};
    auto eval = [&] { return probe.value(params, input); };
    auto pattern = [&] { return probe.pattern(params, input); };
    auto record = [&](double a, double n) {
        out.max_relative_error = std::max(out.max_relative_error,
                                          std::isnan(n) ? 1.0 : relative_error(a, n));
        ++out.checked;
    };
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        for (Eigen::Index i = 0; i < params.weights[l].size(); ++i) {
            record(analytic.weights[l].data()[i],
                   central_difference(params.weights[l].data()[i], eval, pattern));
        }
        for (Eigen::Index i = 0; i < params.biases[l].size(); ++i) {
            record(analytic.biases[l][i], central_difference(params.biases[l][i], eval, pattern));
        }
    }
    for (Eigen::Index i = 0; i < input.size(); ++i) {
        record(analytic.input.data()[i], central_difference(input.data()[i], eval, pattern));
    }
    return out;
}

/// Mutual information sum p(x,y) log2(p(x,y) / (p(x) p(y))) from joint counts
/// of discrete values and binary labels.
inline double mutual_information_bits(const std::vector<int>& values,
                                      const std::vector<int>& labels) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> px;
    std::map<int, double> py;
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        joint[{values[i], labels[i]}] += 1.0;
        px[values[i]] += 1.0;
        py[labels[i]] += 1.0;
    }
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        const double pxy = count / n;
        mi += pxy * std::log2(pxy / ((px[key.first] / n) * (py[key.second] / n)));
    }
    return std::max(mi, 0.0);
}

/// Dataset with the given columns (row-major values) and 0/1 labels.
inline botgan::Dataset make_dataset(std::size_t rows, std::size_t cols,
                                    const std::vector<float>& values,
                                    const std::vector<int>& labels) {
    botgan::Dataset ds;
    ds.n_rows = rows;
    ds.n_cols = cols;
    ds.features = values;
    for (int y : labels) ds.labels.push_back(y ? botgan::Label::bot : botgan::Label::human);
    for (std::size_t c = 0; c < cols; ++c) ds.feature_names.push_back("c" + std::to_string(c));
    return ds;
}

}  // namespace oracle
