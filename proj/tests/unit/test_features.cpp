#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "botgan/error.hpp"
#include "botgan/features.hpp"
#include "oracles.hpp"

using namespace botgan;

TEST(Entropy, HandValues) {
    EXPECT_DOUBLE_EQ(entropy_bits({5, 5}), 1.0);
    EXPECT_DOUBLE_EQ(entropy_bits({4, 0}), 0.0);
    EXPECT_DOUBLE_EQ(entropy_bits({}), 0.0);
    EXPECT_NEAR(entropy_bits({1, 3}), -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75)), 1e-15);
}

TEST(InformationGain, PerfectlyInformativeBooleanIsOneBit) {
    const auto ds = oracle::make_dataset(4, 2, {1, 0.3F, 1, 0.7F, 0, 0.3F, 0, 0.7F}, {1, 1, 0, 0});
    const auto ranking = information_gain(ds);
    EXPECT_EQ(ranking.scores[0], 1.0);
    EXPECT_EQ(ranking.scores[1], 0.0);
    EXPECT_EQ(ranking.order, (std::vector<std::size_t>{0, 1}));
}

TEST(InformationGain, MatchesJointCountOracleOnRandomTables) {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 2 + rng.uniform_index(400);
        const std::size_t levels = 2 + rng.uniform_index(15);
        std::vector<int> codes(rows);
        std::vector<int> labels(rows);
        std::vector<float> values(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            codes[r] = static_cast<int>(rng.uniform_index(levels));
            labels[r] = rng.uniform() < 0.2 + 0.04 * codes[r] ? 1 : 0;
            // Bin centres of 16 equal-width bins on [0,1].
            values[r] = static_cast<float>((codes[r] + 0.5) / 16.0);
        }
        labels[0] = 0;
        labels[1] = 1;
        const auto ds = oracle::make_dataset(rows, 1, values, labels);
        const double expected = oracle::mutual_information_bits(codes, labels);
        EXPECT_NEAR(information_gain(ds, 16).scores[0], expected, 1e-12) << "trial " << trial;
    }
}

TEST(InformationGain, IgnoresUnlabeledRows) {
    auto ds = oracle::make_dataset(4, 1, {0.1F, 0.9F, 0.1F, 0.9F}, {0, 1, 0, 1});
    const double base = information_gain(ds).scores[0];
    ds.features.push_back(0.9F);
    ds.labels.push_back(Label::unlabeled);
    ds.n_rows = 5;
    EXPECT_EQ(information_gain(ds).scores[0], base);
}

TEST(InformationGain, BoundedByLabelEntropy) {
    SynthConfig c;
    c.n_rows = 500;
    c.n_features = 20;
    c.seed = 5;
    const auto ds = synth_generate(c);
    const auto ranking = information_gain(ds);
    const double h = entropy_bits({ds.count(Label::human), ds.count(Label::bot)});
    for (double s : ranking.scores) {
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, h);
    }
    for (std::size_t i = 1; i < ranking.order.size(); ++i) {
        EXPECT_GE(ranking.scores[ranking.order[i - 1]], ranking.scores[ranking.order[i]]);
    }
}

TEST(InformationGain, TiesKeepLowerIndexFirst) {
    const auto ds = oracle::make_dataset(2, 3, {0.5F, 0.5F, 0.5F, 0.5F, 0.5F, 0.5F}, {0, 1});
    EXPECT_EQ(information_gain(ds).order, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(InformationGain, SingleClassOrTooFewRows) {
    EXPECT_THROW(information_gain(oracle::make_dataset(3, 1, {0, 0.5F, 1}, {1, 1, 1})), DomainError);
    EXPECT_THROW(information_gain(oracle::make_dataset(1, 1, {0}, {1})), DomainError);
}

TEST(Selection, TopKKeepsRankOrderAndRemapsCreated) {
    auto ds = oracle::make_dataset(4, 3, {0.1F, 1, 0.5F, 0.1F, 1, 0.5F, 0.1F, 0, 0.5F, 0.9F, 0, 0.5F},
                                   {1, 1, 0, 0});
    ds.created_at_index = 0;
    const auto ranking = information_gain(ds);
    const auto top = top_k_indices(ranking, 2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], 1u);  // the boolean column separates perfectly
    const auto selected = select_top_k(ds, ranking, 2);
    EXPECT_EQ(selected.n_cols, 2u);
    EXPECT_EQ(selected.feature_names[0], "c1");
    EXPECT_EQ(selected.created_at_index, 1u);
    EXPECT_FLOAT_EQ(selected.at(3, 1), 0.9F);
    EXPECT_EQ(ranking.order, (std::vector<std::size_t>{1, 0, 2}));

    const auto without_created = select_columns(ds, {2, 1});
    EXPECT_FALSE(without_created.created_at_index.has_value());
    EXPECT_THROW(top_k_indices(ranking, 4), DomainError);
    EXPECT_THROW(top_k_indices(ranking, 0), DomainError);
}

TEST(Selection, RankingCsvLayout) {
    const auto ds = oracle::make_dataset(2, 2, {1, 0.5F, 0, 0.5F}, {1, 0});
    std::ostringstream out;
    write_ranking_csv(out, ds, information_gain(ds));
    std::istringstream in(out.str());
    std::string header;
    std::string first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "feature_index,feature_name,information_gain,rank");
    EXPECT_EQ(first.substr(0, 5), "0,c0,");
    EXPECT_EQ(first.back(), '1');
}
