#include "botgan/checkpoint.hpp"

#include "binary_io.hpp"
#include "botgan/error.hpp"
#include "json.hpp"

namespace botgan::checkpoint {

namespace {

constexpr std::string_view kMagic = "DGCK";

nlohmann::json specs_json(const nn::MlpParams& params) {
    auto out = nlohmann::json::array();
    for (const auto& s : params.layers) {
        out.push_back({{"in", s.in_dim},
                       {"out", s.out_dim},
                       {"activation", nn::to_string(s.activation)},
                       {"leaky_slope", s.leaky_slope}});
    }
    return out;
}

std::vector<nn::LayerSpec> specs_from_json(const nlohmann::json& j) {
    std::vector<nn::LayerSpec> specs;
    for (const auto& layer : j) {
        nn::LayerSpec s;
        s.in_dim = layer.at("in").get<std::size_t>();
        s.out_dim = layer.at("out").get<std::size_t>();
        s.activation = nn::activation_from_string(layer.at("activation").get<std::string>());
        s.leaky_slope = layer.value("leaky_slope", 0.01);
        specs.push_back(s);
    }
    return specs;
}

}  // namespace

const nn::MlpParams& Checkpoint::network(const std::string& role) const {
    for (const auto& n : networks) {
        if (n.role == role) return n.params;
    }
    throw ConfigError("checkpoint (" + model_kind + ") has no '" + role + "' network");
}

std::vector<std::uint8_t> encode(const Checkpoint& checkpoint) {
    nlohmann::json header;
    header["model_kind"] = checkpoint.model_kind;
    header["roles"] = nlohmann::json::array();
    header["layer_specs"] = nlohmann::json::array();
    header["activations"] = nlohmann::json::array();
    for (const auto& n : checkpoint.networks) {
        nn::validate_specs(n.params.layers);
        header["roles"].push_back(n.role);
        header["layer_specs"].push_back(specs_json(n.params));
        auto acts = nlohmann::json::array();
        for (const auto& s : n.params.layers) acts.push_back(nn::to_string(s.activation));
        header["activations"].push_back(std::move(acts));
    }
    header["config"] = nlohmann::json::parse(checkpoint.config_json);
    header["seed"] = checkpoint.seed;
    header["epochs_done"] = checkpoint.epochs_done;
    const std::string text = header.dump();

    detail::ByteWriter w;
    w.bytes(kMagic);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(text.size()));
    w.bytes(text);
    for (const auto& n : checkpoint.networks) {
        for (std::size_t l = 0; l < n.params.layers.size(); ++l) {
            const auto& wm = n.params.weights[l];
            for (Eigen::Index r = 0; r < wm.rows(); ++r) {
                for (Eigen::Index c = 0; c < wm.cols(); ++c) w.f32(static_cast<float>(wm(r, c)));
            }
            const auto& b = n.params.biases[l];
            for (Eigen::Index i = 0; i < b.size(); ++i) w.f32(static_cast<float>(b[i]));
        }
    }
    return w.take();
}

Checkpoint decode(std::span<const std::uint8_t> bytes) {
    detail::ByteReader r(bytes, "checkpoint");
    if (r.remaining() < kMagic.size() || r.bytes(kMagic.size()) != kMagic) {
        throw FormatError("checkpoint: bad magic at byte offset 0");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        r.fail("unsupported version " + std::to_string(version) + " (expected " +
               std::to_string(kVersion) + ")");
    }
    const std::uint32_t header_len = r.u32();
    const std::size_t header_offset = r.offset();
    const std::string text = r.bytes(header_len);

    Checkpoint out;
    try {
        const auto header = nlohmann::json::parse(text);
        out.model_kind = header.at("model_kind").get<std::string>();
        const auto& roles = header.at("roles");
        const auto& specs = header.at("layer_specs");
        if (!roles.is_array() || !specs.is_array() || roles.size() != specs.size()) {
            throw FormatError("roles and layer_specs disagree");
        }
        for (std::size_t i = 0; i < roles.size(); ++i) {
            NetworkEntry entry;
            entry.role = roles[i].get<std::string>();
            entry.params.layers = specs_from_json(specs[i]);
            out.networks.push_back(std::move(entry));
        }
        out.config_json = header.at("config").dump();
        out.seed = header.at("seed").get<std::uint64_t>();
        out.epochs_done = header.at("epochs_done").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint: malformed header (" + std::string(e.what()) +
                          ") at byte offset " + std::to_string(header_offset));
    } catch (const Error& e) {
        throw FormatError("checkpoint: malformed header (" + std::string(e.what()) +
                          ") at byte offset " + std::to_string(header_offset));
    }

    for (auto& n : out.networks) {
        try {
            nn::validate_specs(n.params.layers);
        } catch (const ShapeError& e) {
            r.fail("network '" + n.role + "': " + e.what());
        }
        for (const auto& s : n.params.layers) {
            const auto rows = static_cast<Eigen::Index>(s.out_dim);
            const auto cols = static_cast<Eigen::Index>(s.in_dim);
            r.require((s.out_dim * s.in_dim + s.out_dim) * sizeof(float));
            nn::Matrix wm(rows, cols);
            for (Eigen::Index i = 0; i < rows; ++i) {
                for (Eigen::Index j = 0; j < cols; ++j) wm(i, j) = r.f32();
            }
            nn::Vector b(rows);
            for (Eigen::Index i = 0; i < rows; ++i) b[i] = r.f32();
            n.params.weights.push_back(std::move(wm));
            n.params.biases.push_back(std::move(b));
        }
    }
    if (r.remaining() != 0) {
        r.fail(std::to_string(r.remaining()) + " trailing bytes after payload");
    }
    return out;
}

void save(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    const auto bytes = encode(checkpoint);
    detail::write_file(path, bytes);
}

Checkpoint load(const std::filesystem::path& path) {
    const auto bytes = detail::read_file(path);
    try {
        return decode(bytes);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace botgan::checkpoint
