#include "botgan/features.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <numeric>

#include "botgan/error.hpp"

namespace botgan {

double entropy_bits(const std::vector<std::size_t>& counts) {
    const double total =
        static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
    if (total == 0.0) {
        return 0.0;
    }
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

std::size_t bin_of(float value, std::size_t bins) {
    const double v = std::clamp(static_cast<double>(value), 0.0, 1.0);
    return std::min(static_cast<std::size_t>(v * static_cast<double>(bins)), bins - 1);
}

}  // namespace

FeatureRanking information_gain(const Dataset& dataset, std::size_t bins) {
    dataset.validate();
    if (bins < 2) {
        throw DomainError("information gain needs at least 2 bins");
    }
    const auto rows = dataset.labeled_rows();
    if (rows.size() < 2) {
        throw DomainError("information gain needs at least 2 labeled rows");
    }
    std::vector<std::size_t> class_counts(2, 0);
    for (std::size_t r : rows) {
        class_counts[static_cast<std::size_t>(dataset.labels[r])] += 1;
    }
    if (class_counts[0] == 0 || class_counts[1] == 0) {
        throw DomainError("information gain needs both human and bot rows");
    }
    const double h_label = entropy_bits(class_counts);
    const double n = static_cast<double>(rows.size());

    FeatureRanking ranking;
    ranking.bin_count = bins;
    ranking.scores.assign(dataset.n_cols, 0.0);
    std::vector<std::size_t> joint;  // bin * 2 + label
    for (std::size_t f = 0; f < dataset.n_cols; ++f) {
        const bool boolean = std::all_of(rows.begin(), rows.end(), [&](std::size_t r) {
            const float v = dataset.at(r, f);
            return v == 0.0F || v == 1.0F;
        });
        const std::size_t n_bins = boolean ? 2 : bins;
        joint.assign(n_bins * 2, 0);
        for (std::size_t r : rows) {
            const float v = dataset.at(r, f);
            const std::size_t b = boolean ? static_cast<std::size_t>(v) : bin_of(v, bins);
            joint[b * 2 + static_cast<std::size_t>(dataset.labels[r])] += 1;
        }
        double conditional = 0.0;
        for (std::size_t b = 0; b < n_bins; ++b) {
            const std::size_t in_bin = joint[b * 2] + joint[b * 2 + 1];
            if (in_bin == 0) continue;
            conditional += static_cast<double>(in_bin) / n *
                           entropy_bits({joint[b * 2], joint[b * 2 + 1]});
        }
        // Rounding can push the difference a hair outside [0, H(Y)].
        ranking.scores[f] = std::clamp(h_label - conditional, 0.0, h_label);
    }

    ranking.order.resize(dataset.n_cols);
    std::iota(ranking.order.begin(), ranking.order.end(), std::size_t{0});
    std::stable_sort(ranking.order.begin(), ranking.order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return ranking.scores[a] > ranking.scores[b];
                     });
    return ranking;
}

std::vector<std::size_t> top_k_indices(const FeatureRanking& ranking, std::size_t k) {
    if (k < 1 || k > ranking.order.size()) {
        throw DomainError("top-k selection needs 1 <= k <= " +
                          std::to_string(ranking.order.size()) + ", got " + std::to_string(k));
    }
    return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k)};
}

Dataset select_columns(const Dataset& dataset, const std::vector<std::size_t>& columns) {
    Dataset out;
    out.n_rows = dataset.n_rows;
    out.n_cols = columns.size();
    out.labels = dataset.labels;
    out.followers_raw = dataset.followers_raw;
    out.posts_raw = dataset.posts_raw;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] >= dataset.n_cols) {
            throw ShapeError("column " + std::to_string(columns[i]) + " out of range (dataset has " +
                             std::to_string(dataset.n_cols) + " features)");
        }
        out.feature_names.push_back(dataset.feature_names[columns[i]]);
        if (dataset.created_at_index && *dataset.created_at_index == columns[i]) {
            out.created_at_index = i;
        }
    }
    out.features.reserve(out.n_rows * out.n_cols);
    for (std::size_t r = 0; r < dataset.n_rows; ++r) {
        for (std::size_t c : columns) {
            out.features.push_back(dataset.at(r, c));
        }
    }
    return out;
}

Dataset select_top_k(const Dataset& dataset, const FeatureRanking& ranking, std::size_t k) {
    if (ranking.order.size() != dataset.n_cols) {
        throw ShapeError("ranking covers " + std::to_string(ranking.order.size()) +
                         " features, dataset has " + std::to_string(dataset.n_cols));
    }
    Dataset out = select_columns(dataset, top_k_indices(ranking, k));
    if (dataset.created_at_index && !out.created_at_index) {
        std::clog << "warning: creation-time feature '"
                  << dataset.feature_names[*dataset.created_at_index]
                  << "' is not among the top " << k << " features; dropping it\n";
    }
    return out;
}

void write_ranking_csv(std::ostream& out, const Dataset& dataset, const FeatureRanking& ranking) {
    out << "feature_index,feature_name,information_gain,rank\n";
    out << std::setprecision(9);
    for (std::size_t rank = 0; rank < ranking.order.size(); ++rank) {
        const std::size_t f = ranking.order[rank];
        std::string name = dataset.feature_names.at(f);
        if (name.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char ch : name) {
                if (ch == '"') quoted += '"';
                quoted += ch;
            }
            name = quoted + "\"";
        }
        out << f << ',' << name << ',' << ranking.scores[f] << ',' << rank + 1 << '\n';
    }
}

}  // namespace botgan
