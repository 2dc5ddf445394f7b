#include "xchain/hash.hpp"

#include <openssl/evp.h>

#include <bit>
#include <stdexcept>

#include "xchain/error.hpp"

namespace xchain {

bool Hash256::is_zero() const noexcept {
    for (auto b : bytes)
        if (b != 0) return false;
    return true;
}

std::string Hash256::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

Hash256 Hash256::from_hex(std::string_view hex) {
    if (hex.size() != 64) throw InputError("hash hex must have 64 characters");
    Hash256 h;
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw InputError("invalid hex digit in hash");
        h.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return h;
}

Hash256 sha256(std::span<const std::uint8_t> data) {
    Hash256 h;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), h.bytes.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32)
        throw std::runtime_error("EVP_Digest(sha256) failed");
    return h;
}

Hash256 sha256(std::string_view data) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

unsigned leading_zero_bits(const Hash256& h) noexcept {
    unsigned n = 0;
    for (auto b : h.bytes) {
        if (b == 0) {
            n += 8;
            continue;
        }
        n += static_cast<unsigned>(std::countl_zero(b));
        break;
    }
    return n;
}

Hash256 merkle_root(std::vector<Hash256> level) {
    if (level.empty()) return Hash256{};
    while (level.size() > 1) {
        std::vector<Hash256> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i < level.size(); i += 2) {
            const Hash256& left = level[i];
            const Hash256& right = i + 1 < level.size() ? level[i + 1] : level[i];
            std::array<std::uint8_t, 64> pair{};
            std::copy(left.bytes.begin(), left.bytes.end(), pair.begin());
            std::copy(right.bytes.begin(), right.bytes.end(), pair.begin() + 32);
            next.push_back(sha256(pair));
        }
        level = std::move(next);
    }
    return level.front();
}

void ByteWriter::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::hash(const Hash256& h) { buf_.insert(buf_.end(), h.bytes.begin(), h.bytes.end()); }

void ByteWriter::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
}

}  // namespace xchain
