// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_HASH_HPP
#define FLOODSHARD_HASH_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace floodshard {

// 32-byte digest. Hex rendering follows the byte order of the array
// (index 0 printed first).
struct Hash256 {
    std::array<uint8_t, 32> bytes{};

    bool operator==(const Hash256&) const = default;
    auto operator<=>(const Hash256&) const = default;

    std::string hex() const;
    static Hash256 from_hex(const std::string& hex);

    bool is_zero() const {
        for (uint8_t b : bytes)
            if (b != 0) return false;
        return true;
    }
};

struct Hash256Hasher {
    size_t operator()(const Hash256& h) const {
        // Digests are uniformly distributed; the first 8 bytes are as
        // good a hash as any.
        uint64_t v;
        std::memcpy(&v, h.bytes.data(), sizeof(v));
        return static_cast<size_t>(v);
    }
};

Hash256 sha256(std::span<const uint8_t> data);
Hash256 double_sha256(std::span<const uint8_t> data);

std::string to_hex(std::span<const uint8_t> data);
std::vector<uint8_t> from_hex(const std::string& hex);

} // namespace floodshard

#endif // FLOODSHARD_HASH_HPP
