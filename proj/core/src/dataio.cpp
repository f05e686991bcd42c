#include "botgan/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "binary_io.hpp"
#include "botgan/error.hpp"
#include "json.hpp"

namespace botgan {

namespace detail {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw FormatError("write to '" + path.string() + "' failed");
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dataset

void Dataset::validate() const {
    if (features.size() != n_rows * n_cols) {
        throw ShapeError("feature buffer holds " + std::to_string(features.size()) +
                         " values, expected " + std::to_string(n_rows * n_cols));
    }
    if (feature_names.size() != n_cols) {
        throw ShapeError("expected " + std::to_string(n_cols) + " feature names, got " +
                         std::to_string(feature_names.size()));
    }
    if (!labels.empty() && labels.size() != n_rows) {
        throw ShapeError("label vector length does not match row count");
    }
    if (followers_raw.size() != posts_raw.size() ||
        (!followers_raw.empty() && followers_raw.size() != n_rows)) {
        throw ShapeError("raw follower/post columns must both have one entry per row");
    }
    if (created_at_index && *created_at_index >= n_cols) {
        throw ShapeError("created_at_index out of range");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.n_rows = rows.size();
    out.n_cols = n_cols;
    out.feature_names = feature_names;
    out.created_at_index = created_at_index;
    out.features.reserve(rows.size() * n_cols);
    for (std::size_t r : rows) {
        if (r >= n_rows) {
            throw ShapeError("row index " + std::to_string(r) + " out of range");
        }
        const auto src = row(r);
        out.features.insert(out.features.end(), src.begin(), src.end());
        if (has_labels()) {
            out.labels.push_back(labels[r]);
        }
        if (has_raw_aux()) {
            out.followers_raw.push_back(followers_raw[r]);
            out.posts_raw.push_back(posts_raw[r]);
        }
    }
    return out;
}

std::vector<std::size_t> Dataset::labeled_rows() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != Label::unlabeled) {
            out.push_back(i);
        }
    }
    return out;
}

std::size_t Dataset::count(Label label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Eigen::MatrixXd Dataset::to_matrix() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(n_cols));
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = at(r, c);
        }
    }
    return m;
}

Eigen::VectorXd Dataset::label_vector() const {
    if (labels.size() != n_rows) {
        throw DomainError("dataset has no labels");
    }
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_rows));
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (labels[i] == Label::unlabeled) {
            throw DomainError("row " + std::to_string(i) + " is unlabeled");
        }
        y[static_cast<Eigen::Index>(i)] = labels[i] == Label::bot ? 1.0 : 0.0;
    }
    return y;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell.push_back('"');
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

Label parse_label(const std::string& raw, std::size_t row, const std::string& column) {
    std::string v = trim(raw);
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "human" || v == "0") return Label::human;
    if (v == "bot" || v == "1") return Label::bot;
    if (v.empty() || v == "unlabeled" || v == "255") return Label::unlabeled;
    throw ParseError("row " + std::to_string(row) + ", column '" + column +
                     "': unrecognized label '" + raw + "'");
}

double parse_number(const std::string& raw, std::size_t row, const std::string& column) {
    const std::string v = trim(raw);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (v.empty() || used != v.size()) {
        throw ParseError("row " + std::to_string(row) + ", column '" + column +
                         "': non-numeric value '" + raw + "'");
    }
    return value;
}

}  // namespace

Dataset import_csv(const std::filesystem::path& path, const CsvManifest& manifest) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open CSV '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("CSV '" + path.string() + "' has no header row");
    }
    const auto header = split_csv_line(line);
    std::unordered_map<std::string, std::size_t> column_of;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column_of.emplace(trim(header[i]), i);
    }
    auto require_column = [&](const std::string& name) {
        const auto it = column_of.find(name);
        if (it == column_of.end()) {
            throw ConfigError("manifest column '" + name + "' not found in '" + path.string() +
                              "'");
        }
        return it->second;
    };

    const std::size_t label_col = require_column(manifest.label_column);
    std::optional<std::size_t> followers_col;
    std::optional<std::size_t> posts_col;
    if (manifest.followers_column) followers_col = require_column(*manifest.followers_column);
    if (manifest.posts_column) posts_col = require_column(*manifest.posts_column);
    if (followers_col.has_value() != posts_col.has_value()) {
        throw ConfigError("manifest must name both follower and post columns, or neither");
    }

    Dataset ds;
    std::vector<std::size_t> feature_cols;
    if (manifest.feature_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i == label_col || (followers_col && i == *followers_col) ||
                (posts_col && i == *posts_col)) {
                continue;
            }
            feature_cols.push_back(i);
            ds.feature_names.push_back(trim(header[i]));
        }
    } else {
        for (const auto& name : manifest.feature_columns) {
            feature_cols.push_back(require_column(name));
            ds.feature_names.push_back(name);
        }
    }
    ds.n_cols = feature_cols.size();
    if (manifest.created_column) {
        const auto it =
            std::find(ds.feature_names.begin(), ds.feature_names.end(), *manifest.created_column);
        if (it == ds.feature_names.end()) {
            throw ConfigError("created column '" + *manifest.created_column +
                              "' is not among the feature columns");
        }
        ds.created_at_index = static_cast<std::size_t>(it - ds.feature_names.begin());
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(header.size()));
        }
        for (std::size_t c : feature_cols) {
            ds.features.push_back(static_cast<float>(parse_number(cells[c], row, trim(header[c]))));
        }
        ds.labels.push_back(parse_label(cells[label_col], row, manifest.label_column));
        if (followers_col) {
            ds.followers_raw.push_back(
                parse_number(cells[*followers_col], row, *manifest.followers_column));
            ds.posts_raw.push_back(parse_number(cells[*posts_col], row, *manifest.posts_column));
        }
        ++ds.n_rows;
    }
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// Scaling and splitting

std::pair<Dataset, ScalingRecord> minmax_scale(const Dataset& dataset) {
    dataset.validate();
    Dataset out = dataset;
    ScalingRecord record;
    record.min.assign(dataset.n_cols, 0.0);
    record.max.assign(dataset.n_cols, 0.0);
    for (std::size_t c = 0; c < dataset.n_cols; ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < dataset.n_rows; ++r) {
            const double v = dataset.at(r, c);
            if (!std::isfinite(v)) {
                throw NumericError("non-finite value in feature '" + dataset.feature_names[c] +
                                   "' at row " + std::to_string(r));
            }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (dataset.n_rows == 0) {
            lo = hi = 0.0;
        }
        record.min[c] = lo;
        record.max[c] = hi;
        const double range = hi - lo;
        for (std::size_t r = 0; r < dataset.n_rows; ++r) {
            const double v = dataset.at(r, c);
            out.features[r * dataset.n_cols + c] =
                range > 0.0 ? static_cast<float>(std::clamp((v - lo) / range, 0.0, 1.0)) : 0.0F;
        }
    }
    return {std::move(out), std::move(record)};
}

namespace {

// Largest-remainder apportionment of `total` across classes of size `sizes`.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total) {
    std::size_t population = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    std::vector<std::size_t> share(sizes.size(), 0);
    if (population == 0) {
        return share;
    }
    std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder numerator, class)
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        share[k] = sizes[k] * total / population;
        assigned += share[k];
        remainders.emplace_back(sizes[k] * total % population, k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < total && i < remainders.size(); ++i, ++assigned) {
        share[remainders[i].second] += 1;
    }
    return share;
}

}  // namespace

SplitIndices split_80_10_10(const Dataset& dataset, Rng& rng) {
    std::vector<std::size_t> humans;
    std::vector<std::size_t> bots;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        if (dataset.labels[i] == Label::human) humans.push_back(i);
        if (dataset.labels[i] == Label::bot) bots.push_back(i);
    }
    const std::size_t labeled = humans.size() + bots.size();
    if (labeled < 10) {
        throw DomainError("an 80/10/10 split needs at least 10 labeled rows, got " +
                          std::to_string(labeled));
    }
    const std::size_t tenth = labeled / 10;
    const std::vector<std::size_t> sizes{humans.size(), bots.size()};
    const auto test_share = apportion(sizes, tenth);
    const auto val_share = apportion(sizes, tenth);

    SplitIndices split;
    std::vector<std::size_t>* classes[] = {&humans, &bots};
    for (std::size_t k = 0; k < 2; ++k) {
        auto& members = *classes[k];
        rng.shuffle(members);
        const std::size_t n_test = std::min(test_share[k], members.size());
        const std::size_t n_val = std::min(val_share[k], members.size() - n_test);
        split.test.insert(split.test.end(), members.begin(), members.begin() + n_test);
        split.validation.insert(split.validation.end(), members.begin() + n_test,
                                members.begin() + n_test + n_val);
        split.train.insert(split.train.end(), members.begin() + n_test + n_val, members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

// ---------------------------------------------------------------------------
// Synthetic data

Dataset synth_generate(const SynthConfig& config) {
    if (config.n_rows == 0) throw ConfigError("synthetic n_rows must be positive");
    if (config.n_features < 2) throw ConfigError("synthetic n_features must be at least 2");
    if (!(config.bot_fraction > 0.0 && config.bot_fraction < 1.0)) {
        throw ConfigError("bot_fraction must lie in (0,1)");
    }
    if (!(config.cluster_separation >= 0.0)) throw ConfigError("cluster_separation must be >= 0");
    if (!(config.boolean_feature_fraction >= 0.0 && config.boolean_feature_fraction <= 1.0)) {
        throw ConfigError("boolean_feature_fraction must lie in [0,1]");
    }
    if (!(config.cluster_spread > 0.0)) throw ConfigError("cluster_spread must be positive");

    const std::size_t n = config.n_rows;
    const std::size_t d = config.n_features;
    Rng root(config.seed);
    Rng layout = root.split(Stream::synth, 0);
    Rng sampler = root.split(Stream::synth, 1);
    Rng aux = root.split(Stream::synth, 2);

    std::vector<double> direction(d);
    double norm = 0.0;
    for (auto& v : direction) {
        v = layout.normal();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : direction) v /= norm;

    // Boolean columns never include column 0 ("created").
    std::vector<std::size_t> candidates(d - 1);
    std::iota(candidates.begin(), candidates.end(), std::size_t{1});
    layout.shuffle(candidates);
    const auto n_boolean = std::min(
        d - 1, static_cast<std::size_t>(std::llround(config.boolean_feature_fraction *
                                                     static_cast<double>(d))));
    std::vector<bool> is_boolean(d, false);
    for (std::size_t i = 0; i < n_boolean; ++i) is_boolean[candidates[i]] = true;

    const auto n_bots =
        static_cast<std::size_t>(std::llround(config.bot_fraction * static_cast<double>(n)));
    std::vector<Label> labels(n, Label::human);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_bots), Label::bot);
    layout.shuffle(labels);

    Dataset ds;
    ds.n_rows = n;
    ds.n_cols = d;
    ds.labels = labels;
    ds.created_at_index = 0;
    ds.feature_names.reserve(d);
    ds.feature_names.emplace_back("created");
    for (std::size_t c = 1; c < d; ++c) {
        std::ostringstream name;
        name << (is_boolean[c] ? "b" : "f") << std::setw(3) << std::setfill('0') << c;
        ds.feature_names.push_back(name.str());
    }
    ds.features.resize(n * d);
    const double half = config.cluster_separation / 2.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double sign = labels[r] == Label::bot ? 1.0 : -1.0;
        for (std::size_t c = 0; c < d; ++c) {
            const double mean = 0.5 + sign * half * direction[c];
            double value = sampler.normal(mean, config.cluster_spread);
            for (int attempt = 0; attempt < 64 && (value < 0.0 || value > 1.0); ++attempt) {
                value = sampler.normal(mean, config.cluster_spread);
            }
            value = std::clamp(value, 0.0, 1.0);
            if (is_boolean[c]) {
                value = value >= 0.5 ? 1.0 : 0.0;
            }
            ds.features[r * d + c] = static_cast<float>(value);
        }
    }

    ds.followers_raw.resize(n);
    ds.posts_raw.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        const bool bot = labels[r] == Label::bot;
        ds.followers_raw[r] = std::exp(aux.normal(bot ? 4.5 : 6.0, 1.5));
        ds.posts_raw[r] = std::exp(aux.normal(bot ? 8.0 : 7.0, 1.5));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// BDF

namespace {

constexpr std::string_view kBdfMagic = "BDF1";
constexpr std::uint32_t kBdfVersion = 1;

}  // namespace

std::vector<std::uint8_t> encode_bdf(const Dataset& dataset) {
    dataset.validate();
    nlohmann::json manifest;
    manifest["n_rows"] = dataset.n_rows;
    manifest["n_cols"] = dataset.n_cols;
    manifest["feature_names"] = dataset.feature_names;
    manifest["has_labels"] = dataset.has_labels();
    manifest["created_at_index"] =
        dataset.created_at_index ? nlohmann::json(*dataset.created_at_index) : nlohmann::json();
    manifest["has_raw_aux"] = dataset.has_raw_aux();
    const std::string text = manifest.dump();

    detail::ByteWriter w;
    w.bytes(kBdfMagic);
    w.u32(kBdfVersion);
    w.u32(static_cast<std::uint32_t>(text.size()));
    w.bytes(text);
    for (float v : dataset.features) w.f32(v);
    if (dataset.has_labels()) {
        for (Label l : dataset.labels) w.u8(static_cast<std::uint8_t>(l));
    }
    if (dataset.has_raw_aux()) {
        for (double v : dataset.followers_raw) w.f64(v);
        for (double v : dataset.posts_raw) w.f64(v);
    }
    return w.take();
}

Dataset decode_bdf(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes, "BDF");
    r.require(kBdfMagic.size());
    if (r.bytes(kBdfMagic.size()) != kBdfMagic) {
        throw FormatError("BDF: bad magic at byte offset 0");
    }
    const std::uint32_t version = r.u32();
    if (version != kBdfVersion) {
        throw FormatError("BDF: unsupported version " + std::to_string(version) +
                          " at byte offset 4");
    }
    const std::uint32_t manifest_length = r.u32();
    const std::size_t manifest_offset = r.offset();
    const std::string text = r.bytes(manifest_length);

    Dataset ds;
    bool has_labels = false;
    bool has_raw = false;
    try {
        const auto manifest = nlohmann::json::parse(text);
        ds.n_rows = manifest.at("n_rows").get<std::size_t>();
        ds.n_cols = manifest.at("n_cols").get<std::size_t>();
        ds.feature_names = manifest.at("feature_names").get<std::vector<std::string>>();
        has_labels = manifest.at("has_labels").get<bool>();
        has_raw = manifest.at("has_raw_aux").get<bool>();
        const auto& created = manifest.at("created_at_index");
        if (!created.is_null()) ds.created_at_index = created.get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("BDF: invalid manifest at byte offset " +
                          std::to_string(manifest_offset) + ": " + e.what());
    }
    if (ds.feature_names.size() != ds.n_cols) {
        throw FormatError("BDF: manifest lists " + std::to_string(ds.feature_names.size()) +
                          " names for " + std::to_string(ds.n_cols) +
                          " columns at byte offset " + std::to_string(manifest_offset));
    }
    if (ds.created_at_index && *ds.created_at_index >= ds.n_cols) {
        throw FormatError("BDF: created_at_index out of range at byte offset " +
                          std::to_string(manifest_offset));
    }

    const std::size_t cells = ds.n_rows * ds.n_cols;
    std::size_t needed = cells * 4 + (has_labels ? ds.n_rows : 0) + (has_raw ? ds.n_rows * 16 : 0);
    if (r.remaining() < needed) {
        r.fail("truncated payload: manifest declares " + std::to_string(ds.n_rows) + " rows (" +
               std::to_string(needed) + " bytes) but only " + std::to_string(r.remaining()) +
               " bytes follow");
    }
    ds.features.resize(cells);
    for (auto& v : ds.features) v = r.f32();
    if (has_labels) {
        ds.labels.resize(ds.n_rows);
        for (auto& l : ds.labels) {
            const auto raw = r.u8();
            if (raw != 0 && raw != 1 && raw != 255) {
                r.fail("invalid label byte " + std::to_string(raw));
            }
            l = static_cast<Label>(raw);
        }
    }
    if (has_raw) {
        ds.followers_raw.resize(ds.n_rows);
        ds.posts_raw.resize(ds.n_rows);
        for (auto& v : ds.followers_raw) v = r.f64();
        for (auto& v : ds.posts_raw) v = r.f64();
    }
    if (r.remaining() != 0) {
        r.fail("unexpected trailing bytes");
    }
    return ds;
}

void write_bdf(const Dataset& dataset, const std::filesystem::path& path) {
    const auto bytes = encode_bdf(dataset);
    detail::write_file(path, bytes);
}

Dataset read_bdf(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    return decode_bdf(bytes);
}

}  // namespace botgan
