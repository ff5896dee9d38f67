// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_TX_HPP
#define FLOODSHARD_TX_HPP

#include <floodshard/hash.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace floodshard {

using Address = std::array<uint8_t, 20>;
using Satoshi = int64_t;

// Reference to one output of a prior transaction.
struct Outpoint {
    Hash256 txid;
    uint32_t index = 0;

    bool operator==(const Outpoint&) const = default;
    auto operator<=>(const Outpoint&) const = default;
};

struct OutpointHasher {
    size_t operator()(const Outpoint& op) const {
        return Hash256Hasher{}(op.txid) ^ (static_cast<size_t>(op.index) * 0x9e3779b97f4a7c15ULL);
    }
};

struct TxOutput {
    Address address{};
    Satoshi value = 0;

    bool operator==(const TxOutput&) const = default;
};

// UTXO-model transaction. The canonical byte serialization (see
// docs/formats.md) is the double-SHA256 preimage for the txid; it is a
// fixed little-endian length-prefixed layout, not Bitcoin's wire format.
struct Transaction {
    std::vector<Outpoint> inputs;
    std::vector<TxOutput> outputs;
    std::vector<uint8_t> nonce_bytes; // free bytes, may vary during grinding
    uint32_t size_bytes = 500;        // accounted size for fee purposes

    bool operator==(const Transaction&) const = default;

    Satoshi output_sum() const {
        Satoshi s = 0;
        for (const auto& o : outputs) s += o.value;
        return s;
    }
};

class MalformedTx : public std::runtime_error {
public:
    explicit MalformedTx(const std::string& what) : std::runtime_error(what) {}
};

std::vector<uint8_t> serialize(const Transaction& tx);
// Rejects truncated input and trailing garbage.
Transaction deserialize(std::span<const uint8_t> bytes);

// txid = SHA256(SHA256(serialize(tx)))
Hash256 compute_txid(const Transaction& tx);

} // namespace floodshard

#endif // FLOODSHARD_TX_HPP
