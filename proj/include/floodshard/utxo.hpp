// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_UTXO_HPP
#define FLOODSHARD_UTXO_HPP

#include <floodshard/tx.hpp>

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace floodshard {

// Unspent-output database for one shard. An outpoint is created exactly
// once and spent exactly once; entries are never overwritten. Mutation is
// single-writer, callers serialize writes externally.
class UtxoSet {
public:
    struct Undo {
        std::vector<std::pair<Outpoint, TxOutput>> spent;   // entries to restore
        std::vector<Outpoint> created;                      // entries to erase
    };

    bool contains(const Outpoint& op) const { return entries_.count(op) != 0; }
    bool was_spent(const Outpoint& op) const { return spent_.count(op) != 0; }
    std::optional<TxOutput> get(const Outpoint& op) const;

    // Creation: refuses outpoints that exist or were ever spent.
    void add(const Outpoint& op, const TxOutput& out);
    // Spend: removes an existing entry and remembers it as spent.
    TxOutput spend(const Outpoint& op);

    // Applies a batch of transactions as one block: spends every input,
    // creates every output. Returns undo data for revert_block.
    Undo apply_block(const std::vector<Transaction>& txs);
    // Exact inverse of the matching apply_block, applied in LIFO order.
    void revert_block(const Undo& undo);

    size_t size() const { return entries_.size(); }
    uint64_t state_height() const { return state_height_; }
    void set_state_height(uint64_t h);

    const std::unordered_map<Outpoint, TxOutput, OutpointHasher>& entries() const {
        return entries_;
    }

private:
    std::unordered_map<Outpoint, TxOutput, OutpointHasher> entries_;
    std::unordered_set<Outpoint, OutpointHasher> spent_;
    uint64_t state_height_ = 0;
};

// Attacker wallet view: every address the attacker controls plus the
// funded subset with live outpoints.
class AddressBook {
public:
    void add_address(const Address& a) { all_.insert(a); }
    // Funds imply membership in the full address set.
    void fund(const Address& a, const Outpoint& op, Satoshi value);
    // Marks an outpoint consumed; drops the address from the funded set
    // when its last outpoint goes.
    void consume(const Address& a, const Outpoint& op);

    const std::set<Address>& all_addresses() const { return all_; }
    bool is_funded(const Address& a) const { return funded_.count(a) != 0; }
    size_t funded_count() const { return funded_.size(); }
    Satoshi total_balance() const;

    struct FundedEntry {
        Address address;
        Outpoint outpoint;
        Satoshi value;
    };
    // Funded outpoints in a deterministic order (for seeded sampling).
    std::vector<FundedEntry> funded_entries() const;

private:
    std::set<Address> all_;
    std::map<Address, std::map<Outpoint, Satoshi>> funded_;
};

} // namespace floodshard

#endif // FLOODSHARD_UTXO_HPP
