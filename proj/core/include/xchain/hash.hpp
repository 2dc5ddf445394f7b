#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xchain {

// 256-bit SHA-256 digest.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Hash256&) const = default;

    bool is_zero() const noexcept;
    std::string to_hex() const;
    static Hash256 from_hex(std::string_view hex);
};

Hash256 sha256(std::span<const std::uint8_t> data);
Hash256 sha256(std::string_view data);

// Number of leading zero bits, most significant byte first.
unsigned leading_zero_bits(const Hash256& h) noexcept;

// Binary merkle root over leaf hashes; odd nodes are paired with themselves.
// The empty list hashes to all zeros.
Hash256 merkle_root(std::vector<Hash256> leaves);

// Append-only little-endian byte writer used for hashing preimages.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void hash(const Hash256& h);
    void str(std::string_view s);  // u32 length prefix

    const std::vector<std::uint8_t>& bytes() const noexcept { return buf_; }
    std::vector<std::uint8_t> take() && { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
};

}  // namespace xchain

template <>
struct std::hash<xchain::Hash256> {
    std::size_t operator()(const xchain::Hash256& h) const noexcept {
        std::size_t v = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t); ++i) v = (v << 8) | h.bytes[i];
        return v;
    }
};
