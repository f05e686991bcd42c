#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace botgan {

/// Purposes a root seed is split into. Values are part of the determinism
/// contract: changing them changes every seeded result.
enum class Stream : std::uint64_t {
    init = 1,
    dropout = 2,
    shuffle = 3,
    noise = 4,
    probe = 5,
    selection = 6,
    split = 7,
    synth = 8,
    augment = 9,
    baseline = 10,
    eval = 11,
    sweep = 12,
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for `(root, purpose, index)`:
///   splitmix64(root ^ splitmix64(purpose * 0x9E3779B97F4A7C15 + index))
std::uint64_t derive_seed(std::uint64_t root, Stream purpose, std::uint64_t index = 0) noexcept;

/// xoshiro256** generator. The 256-bit state is filled from the seed by four
/// successive SplitMix64 outputs. Normal variates use the Box-Muller transform
/// and cache the second value of each pair.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    /// Independent generator for `purpose`, derived from this generator's seed
    /// (not its current position).
    [[nodiscard]] Rng split(Stream purpose, std::uint64_t index = 0) const noexcept {
        return Rng(derive_seed(seed_, purpose, index));
    }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform integer on [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept;
    double normal() noexcept;
    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

    /// Fisher-Yates, walking from the back.
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }
    template <typename T>
    void shuffle(std::vector<T>& items) noexcept {
        shuffle(std::span<T>(items));
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace botgan
