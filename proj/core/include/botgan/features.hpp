#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "botgan/dataio.hpp"

namespace botgan {

/// Per-feature information gain (bits) with indices in descending-score order.
/// Equal scores keep the lower feature index first.
struct FeatureRanking {
    std::vector<double> scores;
    std::vector<std::size_t> order;
    std::size_t bin_count = 10;
};

/// Shannon entropy in bits of a label count table; 0 log 0 is 0.
double entropy_bits(const std::vector<std::size_t>& counts);

/// IG(f) = H(Y) - sum_b p(b) H(Y | b) over labeled rows. Numerical features
/// are cut into `bins` equal-width bins on [0,1] (values outside are clamped
/// to the edge bins); features taking only the values 0 and 1 use two bins.
/// Throws DomainError when fewer than two labeled rows or one class only.
FeatureRanking information_gain(const Dataset& dataset, std::size_t bins = 10);

/// Keeps the top-k ranked features, ordered by rank. `created_at_index` is
/// remapped, or cleared when the creation column is not selected.
Dataset select_top_k(const Dataset& dataset, const FeatureRanking& ranking, std::size_t k);

/// First `k` entries of `ranking.order`.
std::vector<std::size_t> top_k_indices(const FeatureRanking& ranking, std::size_t k);

/// Column subset in the given order.
Dataset select_columns(const Dataset& dataset, const std::vector<std::size_t>& columns);

/// CSV with columns feature_index, feature_name, information_gain, rank (1-based).
void write_ranking_csv(std::ostream& out, const Dataset& dataset, const FeatureRanking& ranking);

}  // namespace botgan
