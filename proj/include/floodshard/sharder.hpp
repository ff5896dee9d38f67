// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_SHARDER_HPP
#define FLOODSHARD_SHARDER_HPP

#include <floodshard/hash.hpp>
#include <floodshard/tx.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace floodshard {

using ShardId = uint32_t;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// How the 32 digest bytes map to the integer whose low-order bits select
// the shard. Both the grinder and the router must agree on this.
enum class BitOrder {
    BigEndian,   // byte 31 carries the low-order bits (default)
    LittleEndian // byte 0 carries the low-order bits
};

// Output shard from a transaction digest: the low-order bits of the
// digest for power-of-two shard counts, digest mod n otherwise.
ShardId shard_of(const Hash256& digest, uint32_t n, BitOrder order = BitOrder::BigEndian);

// Read-only chain context a placement algorithm may consult. Hash-based
// placement ignores it entirely.
class ShardingState {
public:
    virtual ~ShardingState() = default;
    virtual uint32_t shard_count() const = 0;
    virtual uint64_t height() const = 0;
    // Shard whose UTXO partition holds this outpoint, if known.
    virtual std::optional<ShardId> locate(const Outpoint& op) const = 0;
    // Backlog measure used for load balancing.
    virtual uint64_t load(ShardId shard) const = 0;
};

// Placement function (tx, state) -> output shard.
class TxSharder {
public:
    virtual ~TxSharder() = default;
    virtual ShardId place(const Transaction& tx, const ShardingState& state) const = 0;
    virtual std::string name() const = 0;
};

class HashSharder : public TxSharder {
public:
    HashSharder(uint32_t n, BitOrder order = BitOrder::BigEndian);

    ShardId place(const Transaction& tx, const ShardingState& state) const override;
    ShardId place_digest(const Hash256& digest) const { return shard_of(digest, n_, order_); }
    std::string name() const override { return "hash"; }

    uint32_t shard_count() const { return n_; }
    BitOrder bit_order() const { return order_; }

private:
    uint32_t n_;
    BitOrder order_;
};

std::unique_ptr<HashSharder> hash_sharder(uint32_t n, BitOrder order = BitOrder::BigEndian);

} // namespace floodshard

#endif // FLOODSHARD_SHARDER_HPP
