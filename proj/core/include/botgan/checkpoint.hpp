#pragma once

// DGCK checkpoints: "DGCK", u32 version, u32 header length, a JSON header
// describing every network, then each network's layers as little-endian
// f32 weights (row-major, out x in) followed by f32 biases.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "botgan/nncore.hpp"

namespace botgan::checkpoint {

inline constexpr std::uint32_t kVersion = 1;

struct NetworkEntry {
    std::string role;  // "generator", "discriminator", "discriminator_3", ...
    nn::MlpParams params;
};

struct Checkpoint {
    std::string model_kind;
    std::vector<NetworkEntry> networks;
    /// Serialized JSON object echoed into the header.
    std::string config_json = "{}";
    std::uint64_t seed = 0;
    std::size_t epochs_done = 0;

    /// Throws ConfigError when no network has the given role.
    [[nodiscard]] const nn::MlpParams& network(const std::string& role) const;
};

std::vector<std::uint8_t> encode(const Checkpoint& checkpoint);
/// Parameters come back widened from their 32-bit stored values.
Checkpoint decode(std::span<const std::uint8_t> bytes);

void save(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load(const std::filesystem::path& path);

}  // namespace botgan::checkpoint
