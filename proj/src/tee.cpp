// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/tee.hpp>

#include <floodshard/shardsim.hpp>

#include <algorithm>
#include <cstring>

namespace floodshard {
namespace tee {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t get_u32(std::span<const uint8_t> in, size_t& pos) {
    if (in.size() - pos < 4) throw std::runtime_error("short read");
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in[pos + i]) << (8 * i);
    pos += 4;
    return v;
}

uint64_t get_u64(std::span<const uint8_t> in, size_t& pos) {
    if (in.size() - pos < 8) throw std::runtime_error("short read");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
    pos += 8;
    return v;
}

constexpr size_t kAttestedBytes = 32 + 1 + 4 + 8 + 32 + 64;

} // namespace

std::vector<uint8_t> ProgDescriptor::canonical_bytes() const {
    std::vector<uint8_t> out;
    out.reserve(name.size() + 12);
    put_u32(out, static_cast<uint32_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put_u32(out, version);
    put_u32(out, shard_count);
    return out;
}

std::vector<uint8_t> AttestedPlacement::signed_payload() const {
    std::vector<uint8_t> out;
    out.reserve(kAttestedBytes - 64);
    out.insert(out.end(), prog.bytes.begin(), prog.bytes.end());
    out.push_back(static_cast<uint8_t>(status));
    put_u32(out, s_out);
    put_u64(out, st);
    out.insert(out.end(), h_tx.bytes.begin(), h_tx.bytes.end());
    return out;
}

std::vector<uint8_t> AttestedPlacement::to_bytes() const {
    std::vector<uint8_t> out = signed_payload();
    out.insert(out.end(), sigma.begin(), sigma.end());
    return out;
}

std::optional<AttestedPlacement> AttestedPlacement::from_bytes(std::span<const uint8_t> bytes) {
    if (bytes.size() != kAttestedBytes) return std::nullopt;
    AttestedPlacement att;
    size_t pos = 0;
    std::memcpy(att.prog.bytes.data(), bytes.data(), 32);
    pos += 32;
    uint8_t status = bytes[pos++];
    if (status > 1) return std::nullopt;
    att.status = static_cast<PlacementStatus>(status);
    try {
        att.s_out = get_u32(bytes, pos);
        att.st = get_u64(bytes, pos);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    std::memcpy(att.h_tx.bytes.data(), bytes.data() + pos, 32);
    pos += 32;
    std::memcpy(att.sigma.data(), bytes.data() + pos, 64);
    return att;
}

bool verify_attestation(const crypto::Key32& sign_pk, const AttestedPlacement& att) {
    return crypto::verify(sign_pk, att.signed_payload(), att.sigma);
}

std::vector<uint8_t> EnclaveState::serialize() const {
    std::vector<uint8_t> out;
    out.reserve(32 + shard_heights.size() * 16 + utxo_location.size() * 40);
    put_u64(out, version);
    put_u64(out, state_height);
    put_u32(out, static_cast<uint32_t>(shard_heights.size()));
    for (uint64_t h : shard_heights) put_u64(out, h);
    for (uint64_t l : shard_loads) put_u64(out, l);
    put_u64(out, utxo_location.size());
    // Deterministic order so sealed snapshots of equal state are
    // byte-comparable after decryption.
    std::vector<std::pair<Outpoint, ShardId>> sorted(utxo_location.begin(), utxo_location.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [op, shard] : sorted) {
        out.insert(out.end(), op.txid.bytes.begin(), op.txid.bytes.end());
        put_u32(out, op.index);
        put_u32(out, shard);
    }
    return out;
}

EnclaveState EnclaveState::deserialize(std::span<const uint8_t> bytes) {
    EnclaveState st;
    size_t pos = 0;
    st.version = get_u64(bytes, pos);
    st.state_height = get_u64(bytes, pos);
    uint32_t n = get_u32(bytes, pos);
    st.shard_heights.resize(n);
    for (auto& h : st.shard_heights) h = get_u64(bytes, pos);
    st.shard_loads.resize(n);
    for (auto& l : st.shard_loads) l = get_u64(bytes, pos);
    uint64_t entries = get_u64(bytes, pos);
    st.utxo_location.reserve(entries);
    for (uint64_t i = 0; i < entries; ++i) {
        if (bytes.size() - pos < 32) throw std::runtime_error("short read");
        Outpoint op;
        std::memcpy(op.txid.bytes.data(), bytes.data() + pos, 32);
        pos += 32;
        op.index = get_u32(bytes, pos);
        st.utxo_location.emplace(op, get_u32(bytes, pos));
    }
    if (pos != bytes.size()) throw std::runtime_error("trailing bytes in state");
    return st;
}

TeePlatform::TeePlatform() : sig_(crypto::SigKeyPair::generate()), box_(crypto::BoxKeyPair::generate()) {
    crypto::random_bytes(seal_key_);
    pk_.sign_pk = sig_.public_key;
    pk_.enc_pk = box_.public_key;
}

EnclaveInstance::EnclaveInstance(TeePlatform& platform, uint32_t shard_count)
    : platform_(platform) {
    if (shard_count == 0) throw ConfigError("shard count must be >= 1");
    state_.shard_heights.assign(shard_count, 0);
    state_.shard_loads.assign(shard_count, 0);
}

void EnclaveInstance::install(const ProgDescriptor& prog) {
    if (prog_) return; // idempotent: the first program stays installed
    prog_ = prog;
}

std::optional<ProgId> EnclaveInstance::installed_prog() const {
    if (!prog_) return std::nullopt;
    return prog_->id();
}

std::optional<AttestedPlacement> EnclaveInstance::resume(std::span<const uint8_t> inp_c) const {
    if (!prog_) return std::nullopt;

    auto plain = crypto::hybrid_decrypt(platform_.box_, inp_c);
    if (!plain) return std::nullopt;
    Transaction tx;
    try {
        tx = deserialize(*plain);
    } catch (const MalformedTx&) {
        return std::nullopt;
    }

    auto [status, s_out] = txsharding(tx, state_);
    AttestedPlacement att;
    att.prog = prog_->id();
    att.status = status;
    att.s_out = s_out;
    att.st = state_.state_height;
    att.h_tx = compute_txid(tx);
    att.sigma = crypto::sign(platform_.sig_.secret_key, att.signed_payload());
    return att;
}

void EnclaveInstance::update_state(const std::vector<HeaderUpdate>& headers,
                                   const UtxoDelta& delta) {
    // Validate before mutating: a rejected update must leave no trace.
    std::vector<uint64_t> heights = state_.shard_heights;
    for (const auto& h : headers) {
        if (h.shard >= heights.size()) throw ConfigError("header for unknown shard");
        if (h.height != heights[h.shard] + 1)
            throw RollbackError("header does not extend shard " + std::to_string(h.shard) +
                                " at height " + std::to_string(heights[h.shard]));
        heights[h.shard] = h.height;
    }
    state_.shard_heights = std::move(heights);
    for (const auto& op : delta.spent) state_.utxo_location.erase(op);
    for (const auto& [op, shard] : delta.created) state_.utxo_location[op] = shard;
    if (!delta.shard_loads.empty()) {
        if (delta.shard_loads.size() != state_.shard_loads.size())
            throw ConfigError("load vector size mismatch");
        state_.shard_loads = delta.shard_loads;
    }
    for (uint64_t h : state_.shard_heights) state_.state_height = std::max(state_.state_height, h);
    ++state_.version;
    platform_.sealed_version_ = std::max(platform_.sealed_version_, state_.version);
}

std::vector<uint8_t> EnclaveInstance::seal_state() const {
    // Layout: version (8, clear but authenticated as AAD) | AEAD blob.
    std::vector<uint8_t> out;
    put_u64(out, state_.version);
    std::vector<uint8_t> sealed =
        crypto::aead_seal(platform_.seal_key_, state_.serialize(),
                          std::span<const uint8_t>(out.data(), 8));
    out.insert(out.end(), sealed.begin(), sealed.end());
    return out;
}

void EnclaveInstance::load_sealed_state(std::span<const uint8_t> blob) {
    if (blob.size() < 8) throw crypto::CryptoError("sealed state too short");
    size_t pos = 0;
    uint64_t version = get_u64(blob, pos);
    // Rollback guard first: an old-but-authentic snapshot is still
    // refused.
    if (version < platform_.sealed_version_)
        throw RollbackError("sealed state is older than the rollback counter");
    auto plain = crypto::aead_open(platform_.seal_key_, blob.subspan(8), blob.subspan(0, 8));
    if (!plain) throw crypto::CryptoError("sealed state does not authenticate");
    EnclaveState st = EnclaveState::deserialize(*plain);
    if (st.version != version) throw RollbackError("sealed state version mismatch");
    state_ = std::move(st);
}

std::pair<PlacementStatus, ShardId> txsharding(const Transaction& tx, const EnclaveState& st) {
    std::vector<ShardId> input_shards;
    input_shards.reserve(tx.inputs.size());
    for (const auto& in : tx.inputs) {
        auto it = st.utxo_location.find(in);
        if (it == st.utxo_location.end())
            return {PlacementStatus::UnresolvableInput, 0};
        input_shards.push_back(it->second);
    }
    ShardId s = shardsim::balanced_input_choice(input_shards, st.shard_loads);
    return {PlacementStatus::Ok, s};
}

ShardId BalancedInputSharder::place(const Transaction& tx, const ShardingState& state) const {
    std::vector<ShardId> input_shards;
    input_shards.reserve(tx.inputs.size());
    for (const auto& in : tx.inputs) {
        auto loc = state.locate(in);
        if (!loc) throw std::runtime_error("unresolvable input " + in.txid.hex());
        input_shards.push_back(*loc);
    }
    std::vector<uint64_t> loads(state.shard_count());
    for (ShardId s = 0; s < state.shard_count(); ++s) loads[s] = state.load(s);
    return shardsim::balanced_input_choice(input_shards, loads);
}

} // namespace tee
} // namespace floodshard
