#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "botgan/rng.hpp"

namespace botgan {

enum class Label : std::uint8_t { human = 0, bot = 1, unlabeled = 255 };

/// Accounts x features table. Features are stored as 32-bit reals, row-major.
struct Dataset {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<float> features;  // n_rows * n_cols, row-major
    std::vector<Label> labels;    // empty or n_rows
    std::vector<std::string> feature_names;
    std::optional<std::size_t> created_at_index;
    std::vector<double> followers_raw;  // empty or n_rows
    std::vector<double> posts_raw;      // empty or n_rows

    [[nodiscard]] float at(std::size_t row, std::size_t col) const {
        return features[row * n_cols + col];
    }
    [[nodiscard]] std::span<const float> row(std::size_t r) const {
        return {features.data() + r * n_cols, n_cols};
    }
    [[nodiscard]] bool has_labels() const { return !labels.empty(); }
    [[nodiscard]] bool has_raw_aux() const { return !followers_raw.empty(); }

    /// Throws ShapeError when vector lengths disagree with n_rows/n_cols.
    void validate() const;

    /// Rows in the given order (repetition allowed). Keeps column metadata.
    [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
    /// Indices of rows labeled human or bot.
    [[nodiscard]] std::vector<std::size_t> labeled_rows() const;
    [[nodiscard]] std::size_t count(Label label) const;

    /// All rows widened to a 64-bit matrix.
    [[nodiscard]] Eigen::MatrixXd to_matrix() const;
    /// Labels as 0/1 doubles; throws DomainError if any row is unlabeled.
    [[nodiscard]] Eigen::VectorXd label_vector() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct CsvManifest {
    /// Feature columns in output order. Empty selects every column that is
    /// not the label or an auxiliary column.
    std::vector<std::string> feature_columns;
    std::string label_column = "label";
    std::optional<std::string> followers_column;
    std::optional<std::string> posts_column;
    /// Feature column holding account creation time.
    std::optional<std::string> created_column;
};

/// Label cells accepted: human, bot, 0, 1, unlabeled, 255, or empty.
Dataset import_csv(const std::filesystem::path& path, const CsvManifest& manifest);

struct ScalingRecord {
    std::vector<double> min;
    std::vector<double> max;
};

/// Per-feature (x - min) / (max - min); constant columns become 0.
std::pair<Dataset, ScalingRecord> minmax_scale(const Dataset& dataset);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Stratified 80/10/10 split of the labeled rows. Test and validation each
/// get floor(n_labeled / 10) rows, apportioned to classes by largest
/// remainder; each split is returned in ascending row order.
SplitIndices split_80_10_10(const Dataset& dataset, Rng& rng);

struct SynthConfig {
    std::size_t n_rows = 10000;
    std::size_t n_features = 100;
    double bot_fraction = 0.27;
    double cluster_separation = 0.8;
    double boolean_feature_fraction = 0.2;
    /// Per-feature standard deviation of each class cluster before truncation.
    double cluster_spread = 0.15;
    std::uint64_t seed = 0;
};

/// Two truncated-Gaussian clusters in [0,1]^d whose means sit at
/// 0.5 -/+ separation/2 along a seeded random unit direction. Bot count is
/// round(bot_fraction * n_rows). Feature 0 is the "created" column.
Dataset synth_generate(const SynthConfig& config);

/// BDF v1 (little-endian): "BDF1", u32 version, u32 manifest length, JSON
/// manifest, f32 features, u8 labels (if any), f64 followers and posts (if any).
void write_bdf(const Dataset& dataset, const std::filesystem::path& path);
Dataset read_bdf(const std::filesystem::path& path);

/// In-memory variants used by the file functions.
std::vector<std::uint8_t> encode_bdf(const Dataset& dataset);
Dataset decode_bdf(std::span<const std::uint8_t> bytes);

}  // namespace botgan
