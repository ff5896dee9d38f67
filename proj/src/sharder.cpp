// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/sharder.hpp>

#include <bit>

namespace floodshard {

ShardId shard_of(const Hash256& digest, uint32_t n, BitOrder order) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
    if (n == 1) return 0;

    if (std::has_single_bit(n)) {
        // Low-order bits of the digest. Big-endian interpretation puts
        // them at the tail of the byte array.
        uint64_t low = 0;
        if (order == BitOrder::BigEndian) {
            for (size_t i = 24; i < 32; ++i) low = (low << 8) | digest.bytes[i];
        } else {
            for (size_t i = 8; i-- > 0;) low = (low << 8) | digest.bytes[i];
        }
        return static_cast<ShardId>(low & (n - 1));
    }

    // General case: digest mod n, Horner over the bytes from the
    // most-significant end under the configured interpretation.
    uint64_t r = 0;
    if (order == BitOrder::BigEndian) {
        for (size_t i = 0; i < 32; ++i) r = (r * 256 + digest.bytes[i]) % n;
    } else {
        for (size_t i = 32; i-- > 0;) r = (r * 256 + digest.bytes[i]) % n;
    }
    return static_cast<ShardId>(r);
}

HashSharder::HashSharder(uint32_t n, BitOrder order) : n_(n), order_(order) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
}

ShardId HashSharder::place(const Transaction& tx, const ShardingState&) const {
    return shard_of(compute_txid(tx), n_, order_);
}

std::unique_ptr<HashSharder> hash_sharder(uint32_t n, BitOrder order) {
    return std::make_unique<HashSharder>(n, order);
}

} // namespace floodshard
