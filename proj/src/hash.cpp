// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/hash.hpp>

#include <openssl/sha.h>

#include <stdexcept>

namespace floodshard {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

Hash256 sha256(std::span<const uint8_t> data) {
    Hash256 out;
    SHA256(data.data(), data.size(), out.bytes.data());
    return out;
}

Hash256 double_sha256(std::span<const uint8_t> data) {
    Hash256 first = sha256(data);
    return sha256(std::span<const uint8_t>(first.bytes.data(), first.bytes.size()));
}

std::string to_hex(std::span<const uint8_t> data) {
    std::string s;
    s.reserve(data.size() * 2);
    for (uint8_t b : data) {
        s.push_back(kHexDigits[b >> 4]);
        s.push_back(kHexDigits[b & 0x0f]);
    }
    return s;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string Hash256::hex() const {
    return to_hex(std::span<const uint8_t>(bytes.data(), bytes.size()));
}

Hash256 Hash256::from_hex(const std::string& hex) {
    std::vector<uint8_t> raw = floodshard::from_hex(hex);
    if (raw.size() != 32) throw std::invalid_argument("hash hex must be 64 chars");
    Hash256 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

} // namespace floodshard
