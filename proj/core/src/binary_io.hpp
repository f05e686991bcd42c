#pragma once

// Little-endian encoding helpers shared by the BDF and checkpoint formats.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botgan/error.hpp"

namespace botgan::detail {

class ByteWriter {
public:
    void bytes(std::string_view raw) {
        buffer_.insert(buffer_.end(), raw.begin(), raw.end());
    }
    void u8(std::uint8_t v) { buffer_.push_back(v); }
    void u32(std::uint32_t v) { put_le(v); }
    void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }

    [[nodiscard]] std::vector<std::uint8_t> take() { return std::move(buffer_); }

private:
    template <typename U>
    void put_le(U v) {
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            buffer_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    std::vector<std::uint8_t> buffer_;
};

class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> data, std::string what)
        : data_(data), what_(std::move(what)) {}

    [[nodiscard]] std::size_t offset() const { return pos_; }
    [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

    std::string bytes(std::size_t n) {
        require(n);
        std::string out(reinterpret_cast<const char*>(data_.data() + pos_), n);
        pos_ += n;
        return out;
    }
    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

    [[noreturn]] void fail(const std::string& message) const {
        throw FormatError(what_ + ": " + message + " at byte offset " + std::to_string(pos_));
    }

    void require(std::size_t n) const {
        if (remaining() < n) {
            fail("truncated payload (need " + std::to_string(n) + " bytes, " +
                 std::to_string(remaining()) + " left)");
        }
    }

private:
    template <typename U>
    U get_le() {
        require(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<U>(data_[pos_ + i]) << (8 * i));
        }
        pos_ += sizeof(U);
        return v;
    }

    std::span<const std::uint8_t> data_;
    std::string what_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace botgan::detail
