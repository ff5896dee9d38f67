// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/protocol.hpp>

#include <cstring>

namespace floodshard {
namespace protocol {

IdealBlockchain::IdealBlockchain(uint32_t shard_count, ValidateFn validate)
    : dbs_(shard_count), validate_(std::move(validate)) {
    if (shard_count == 0) throw ConfigError("shard count must be >= 1");
}

bool IdealBlockchain::write(ShardId id, const Transaction& tx) {
    if (id >= dbs_.size()) return false;
    Hash256 h = compute_txid(tx);
    auto it = dbs_[id].find(h);
    if (it != dbs_[id].end()) return it->second == tx;
    if (validate_ && !validate_(id, tx)) return false;
    dbs_[id].emplace(h, tx);
    return true;
}

std::optional<Transaction> IdealBlockchain::read(ShardId id, const Hash256& h_tx) const {
    if (id >= dbs_.size()) return std::nullopt;
    auto it = dbs_[id].find(h_tx);
    if (it == dbs_[id].end()) return std::nullopt;
    return it->second;
}

std::optional<ResponseMsg> ResponseMsg::from_bytes(std::span<const uint8_t> bytes) {
    auto att = tee::AttestedPlacement::from_bytes(bytes);
    if (!att) return std::nullopt;
    return ResponseMsg{*att};
}

std::vector<uint8_t> ProcessMsg::to_bytes() const {
    std::vector<uint8_t> out(sender_pk.begin(), sender_pk.end());
    std::vector<uint8_t> att_bytes = att.to_bytes();
    out.insert(out.end(), att_bytes.begin(), att_bytes.end());
    std::vector<uint8_t> tx_bytes = serialize(tx);
    uint32_t len = static_cast<uint32_t>(tx_bytes.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(len >> (8 * i)));
    out.insert(out.end(), tx_bytes.begin(), tx_bytes.end());
    return out;
}

std::optional<ProcessMsg> ProcessMsg::from_bytes(std::span<const uint8_t> bytes) {
    constexpr size_t kAttLen = 141;
    if (bytes.size() < 32 + kAttLen + 4) return std::nullopt;
    ProcessMsg msg;
    std::memcpy(msg.sender_pk.data(), bytes.data(), 32);
    auto att = tee::AttestedPlacement::from_bytes(bytes.subspan(32, kAttLen));
    if (!att) return std::nullopt;
    msg.att = *att;
    size_t pos = 32 + kAttLen;
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<uint32_t>(bytes[pos + i]) << (8 * i);
    pos += 4;
    if (bytes.size() - pos != len) return std::nullopt;
    try {
        msg.tx = deserialize(bytes.subspan(pos));
    } catch (const MalformedTx&) {
        return std::nullopt;
    }
    return msg;
}

ValidatorHost::ValidatorHost(std::string name, bool tee_enabled, tee::TeePlatform& platform,
                             uint32_t shard_count)
    : name_(std::move(name)),
      tee_enabled_(tee_enabled),
      platform_(platform),
      enclave_(std::make_unique<tee::EnclaveInstance>(platform, shard_count)),
      shard_count_(shard_count) {}

void ValidatorHost::restart_enclave() {
    enclave_ = std::make_unique<tee::EnclaveInstance>(platform_, shard_count_);
}

void ValidatorHost::bind(IdealBlockchain* chain, const std::set<crypto::Key32>* registry,
                         tee::ProgId expected_prog, uint64_t freshness_delta,
                         std::function<uint64_t()> current_height) {
    chain_ = chain;
    registry_ = registry;
    expected_prog_ = expected_prog;
    freshness_delta_ = freshness_delta;
    current_height_ = std::move(current_height);
}

std::optional<ResponseMsg> ValidatorHost::handle_request(const RequestMsg& msg) const {
    // A validator without a TEE simply discards the call.
    if (!tee_enabled_) return std::nullopt;
    auto att = enclave_->resume(msg.inp_c);
    if (!att) return std::nullopt;
    return ResponseMsg{*att};
}

Verdict ValidatorHost::handle_process(const ProcessMsg& msg) {
    if (!chain_ || !registry_) throw std::logic_error("validator not bound to a chain");
    if (!registry_->count(msg.sender_pk)) return Verdict::Bottom;
    if (msg.att.prog != expected_prog_) return Verdict::Bottom;
    if (msg.att.status != tee::PlacementStatus::Ok) return Verdict::Bottom;
    if (!tee::verify_attestation(msg.sender_pk, msg.att)) return Verdict::Bottom;
    if (msg.att.h_tx != compute_txid(msg.tx)) return Verdict::Bottom;
    // Freshness: placements computed on an outdated state are refused.
    uint64_t head = current_height_ ? current_height_() : 0;
    if (head > msg.att.st && head - msg.att.st > freshness_delta_) return Verdict::Bottom;
    return chain_->write(msg.att.s_out, msg.tx) ? Verdict::Accepted : Verdict::RejectedByChain;
}

std::optional<ResponseMsg> Transport::request(ValidatorHost& v, const RequestMsg& msg) {
    return v.handle_request(msg);
}

Verdict Transport::process(ValidatorHost& v, const ProcessMsg& msg) {
    return v.handle_process(msg);
}

ClientSession::ClientSession(std::vector<ValidatorHost*> validators, IdealBlockchain& chain,
                             Transport& transport, tee::ProgId expected_prog,
                             uint32_t query_count, uint32_t max_attempts)
    : validators_(std::move(validators)),
      chain_(chain),
      transport_(transport),
      expected_prog_(expected_prog),
      query_count_(std::max(1u, query_count)),
      max_attempts_(std::max(1u, max_attempts)) {
    if (validators_.empty()) throw ConfigError("client needs at least one validator");
}

ClientResult ClientSession::newtx(const Transaction& tx) {
    const Hash256 h = compute_txid(tx);
    const std::vector<uint8_t> tx_bytes = serialize(tx);

    ClientResult result;
    for (uint32_t attempt = 0; attempt < max_attempts_; ++attempt) {
        // Query several validators; among the verified responses prefer
        // the one computed on the latest state.
        struct Candidate {
            ValidatorHost* validator;
            tee::AttestedPlacement att;
        };
        std::optional<Candidate> best;
        for (uint32_t q = 0; q < query_count_; ++q) {
            ValidatorHost* v = validators_[next_validator_];
            next_validator_ = (next_validator_ + 1) % validators_.size();

            RequestMsg req{crypto::hybrid_encrypt(v->advertised_pk().enc_pk, tx_bytes)};
            auto resp = transport_.request(*v, req);
            if (!resp) continue; // discarded or dropped: try another one

            const tee::AttestedPlacement& att = resp->att;
            if (att.h_tx != h) continue;                                    // fake transaction fed
            if (att.prog != expected_prog_) continue;                       // wrong program
            if (att.status != tee::PlacementStatus::Ok) continue;           // placement error
            if (!tee::verify_attestation(v->advertised_pk().sign_pk, att)) continue;
            if (!best || att.st > best->att.st) best = Candidate{v, att};
        }
        if (!best) {
            result.detail = "no verifiable placement obtained";
            continue;
        }

        ProcessMsg pm{best->validator->advertised_pk().sign_pk, best->att, tx};
        ValidatorHost* target = validators_[best->att.s_out % validators_.size()];
        Verdict verdict = transport_.process(*target, pm);
        result.placement = best->att;
        if (verdict == Verdict::Accepted) {
            result.accepted = true;
            result.detail = "accepted";
            return result;
        }
        if (verdict == Verdict::RejectedByChain) {
            result.detail = "rejected by blockchain validation";
            return result; // a clean reject is final
        }
        result.detail = "process rejected (verification failure)";
    }
    result.accepted = false;
    return result;
}

std::optional<Transaction> ClientSession::read(ShardId id, const Hash256& h_tx) const {
    return chain_.read(id, h_tx);
}

IdealCountermeasure::IdealCountermeasure(uint32_t shard_count,
                                         IdealBlockchain::ValidateFn validate)
    : chain_(shard_count, std::move(validate)) {
    state_.shard_heights.assign(shard_count, 0);
    state_.shard_loads.assign(shard_count, 0);
}

bool IdealCountermeasure::newtx(const Transaction& tx) {
    auto [status, s_out] = tee::txsharding(tx, state_);
    if (status != tee::PlacementStatus::Ok) return false;
    return chain_.write(s_out, tx);
}

std::optional<Transaction> IdealCountermeasure::read(ShardId id, const Hash256& h_tx) const {
    return chain_.read(id, h_tx);
}

void IdealCountermeasure::update_state(const std::vector<tee::HeaderUpdate>& headers,
                                       const tee::UtxoDelta& delta) {
    for (const auto& h : headers) {
        if (h.shard >= state_.shard_heights.size()) throw ConfigError("header for unknown shard");
        if (h.height != state_.shard_heights[h.shard] + 1)
            throw tee::RollbackError("header does not extend the tracked chain");
        state_.shard_heights[h.shard] = h.height;
        state_.state_height = std::max(state_.state_height, h.height);
    }
    for (const auto& op : delta.spent) state_.utxo_location.erase(op);
    for (const auto& [op, shard] : delta.created) state_.utxo_location[op] = shard;
    if (!delta.shard_loads.empty()) state_.shard_loads = delta.shard_loads;
    ++state_.version;
}

} // namespace protocol
} // namespace floodshard
