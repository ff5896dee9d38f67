// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/utxo.hpp>

#include <stdexcept>

namespace floodshard {

std::optional<TxOutput> UtxoSet::get(const Outpoint& op) const {
    auto it = entries_.find(op);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void UtxoSet::add(const Outpoint& op, const TxOutput& out) {
    if (spent_.count(op)) throw std::logic_error("utxo: re-creating a spent outpoint");
    auto [it, inserted] = entries_.emplace(op, out);
    if (!inserted) throw std::logic_error("utxo: overwriting an existing outpoint");
}

TxOutput UtxoSet::spend(const Outpoint& op) {
    auto it = entries_.find(op);
    if (it == entries_.end()) throw std::logic_error("utxo: spending a missing outpoint");
    TxOutput out = it->second;
    entries_.erase(it);
    spent_.insert(op);
    return out;
}

UtxoSet::Undo UtxoSet::apply_block(const std::vector<Transaction>& txs) {
    Undo undo;
    for (const auto& tx : txs) {
        for (const auto& in : tx.inputs) {
            undo.spent.emplace_back(in, spend(in));
        }
        Hash256 id = compute_txid(tx);
        for (uint32_t i = 0; i < tx.outputs.size(); ++i) {
            Outpoint op{id, i};
            add(op, tx.outputs[i]);
            undo.created.push_back(op);
        }
    }
    ++state_height_;
    return undo;
}

void UtxoSet::revert_block(const Undo& undo) {
    for (auto it = undo.created.rbegin(); it != undo.created.rend(); ++it) {
        auto found = entries_.find(*it);
        if (found == entries_.end()) throw std::logic_error("utxo: revert of missing creation");
        entries_.erase(found);
        spent_.erase(*it); // never spent within this block's lifetime
    }
    for (auto it = undo.spent.rbegin(); it != undo.spent.rend(); ++it) {
        spent_.erase(it->first);
        entries_.emplace(it->first, it->second);
    }
    if (state_height_ == 0) throw std::logic_error("utxo: revert below height 0");
    --state_height_;
}

void UtxoSet::set_state_height(uint64_t h) {
    if (h < state_height_) throw std::logic_error("utxo: state height must not decrease");
    state_height_ = h;
}

void AddressBook::fund(const Address& a, const Outpoint& op, Satoshi value) {
    all_.insert(a);
    funded_[a][op] = value;
}

void AddressBook::consume(const Address& a, const Outpoint& op) {
    auto it = funded_.find(a);
    if (it == funded_.end()) throw std::logic_error("address book: consuming from unfunded address");
    if (it->second.erase(op) == 0) throw std::logic_error("address book: unknown outpoint");
    if (it->second.empty()) funded_.erase(it);
}

Satoshi AddressBook::total_balance() const {
    Satoshi sum = 0;
    for (const auto& [addr, outs] : funded_)
        for (const auto& [op, v] : outs) sum += v;
    return sum;
}

std::vector<AddressBook::FundedEntry> AddressBook::funded_entries() const {
    std::vector<FundedEntry> out;
    for (const auto& [addr, outs] : funded_)
        for (const auto& [op, v] : outs) out.push_back({addr, op, v});
    return out;
}

} // namespace floodshard
