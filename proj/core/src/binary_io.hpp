#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "oraclenet/types.hpp"

namespace oraclenet::detail {

class ByteWriter {
public:
    void raw(std::string_view bytes) { out_.append(bytes); }

    template <class T>
    void le(T value) {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
        const auto bits = std::bit_cast<U>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            out_.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
        }
    }

    [[nodiscard]] const std::string& bytes() const noexcept { return out_; }
    [[nodiscard]] std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class ByteReader {
public:
    ByteReader(std::string_view bytes, std::string what) : in_(bytes), what_(std::move(what)) {}

    std::string_view raw(std::size_t n) {
        need(n);
        auto out = in_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    template <class T>
    T le() {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
        need(sizeof(T));
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bits |= static_cast<U>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }

    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    [[nodiscard]] std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) {
            throw FormatError(what_ + ": truncated file");
        }
    }

    std::string_view in_;
    std::size_t pos_ = 0;
    std::string what_;
};

std::string read_file(const std::string& file);
void write_file(const std::string& file, const std::string& bytes);

}  // namespace oraclenet::detail
