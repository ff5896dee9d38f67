// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_PROTOCOL_HPP
#define FLOODSHARD_PROTOCOL_HPP

#include <floodshard/tee.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace floodshard {
namespace protocol {

// Append-only per-shard databases indexed by transaction hash. A write
// is accepted iff the validation hook passes; entries are never mutated
// or removed.
class IdealBlockchain {
public:
    using ValidateFn = std::function<bool(ShardId, const Transaction&)>;

    explicit IdealBlockchain(uint32_t shard_count, ValidateFn validate = {});

    // write(id, tx): append on success. Re-writing an identical entry is
    // a no-op accept.
    bool write(ShardId id, const Transaction& tx);
    // read(id, h_tx)
    std::optional<Transaction> read(ShardId id, const Hash256& h_tx) const;

    uint32_t shard_count() const { return static_cast<uint32_t>(dbs_.size()); }
    const std::map<Hash256, Transaction>& db(ShardId id) const { return dbs_.at(id); }

private:
    std::vector<std::map<Hash256, Transaction>> dbs_;
    ValidateFn validate_;
};

struct RequestMsg {
    std::vector<uint8_t> inp_c;
};

struct ResponseMsg {
    tee::AttestedPlacement att;

    std::vector<uint8_t> to_bytes() const { return att.to_bytes(); }
    static std::optional<ResponseMsg> from_bytes(std::span<const uint8_t> bytes);
};

struct ProcessMsg {
    crypto::Key32 sender_pk{}; // which enclave produced the attestation
    tee::AttestedPlacement att;
    Transaction tx;

    std::vector<uint8_t> to_bytes() const;
    static std::optional<ProcessMsg> from_bytes(std::span<const uint8_t> bytes);
};

enum class Verdict : uint8_t {
    Accepted,
    RejectedByChain, // validate(tx) failed
    Bottom,          // verification failure at the validator
};

// One validator endpoint: request() relays through its enclave,
// process() verifies the attestation and writes to the blockchain.
class ValidatorHost {
public:
    ValidatorHost(std::string name, bool tee_enabled, tee::TeePlatform& platform,
                  uint32_t shard_count);

    const std::string& name() const { return name_; }
    bool tee_enabled() const { return tee_enabled_; }
    const tee::TeePublicKey& advertised_pk() const { return platform_.public_key(); }
    tee::EnclaveInstance& enclave() { return *enclave_; }
    const tee::EnclaveInstance& enclave() const { return *enclave_; }

    // Replaces the running enclave with a fresh instance on the same
    // platform (host-side kill). State must be re-unsealed by the host.
    void restart_enclave();

    // current_height reports this validator's view of the chain head, in
    // the same block units the enclaves monitor; placements older than
    // freshness_delta blocks are refused.
    void bind(IdealBlockchain* chain, const std::set<crypto::Key32>* registry,
              tee::ProgId expected_prog, uint64_t freshness_delta,
              std::function<uint64_t()> current_height);

    std::optional<ResponseMsg> handle_request(const RequestMsg& msg) const;
    Verdict handle_process(const ProcessMsg& msg);

private:
    std::string name_;
    bool tee_enabled_;
    tee::TeePlatform& platform_;
    std::unique_ptr<tee::EnclaveInstance> enclave_;
    uint32_t shard_count_;

    IdealBlockchain* chain_ = nullptr;
    const std::set<crypto::Key32>* registry_ = nullptr;
    tee::ProgId expected_prog_{};
    uint64_t freshness_delta_ = 2;
    std::function<uint64_t()> current_height_;
};

// Message passing between client and validators; test harnesses override
// it to drop or mutate serialized messages.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::optional<ResponseMsg> request(ValidatorHost& v, const RequestMsg& msg);
    virtual Verdict process(ValidatorHost& v, const ProcessMsg& msg);
};

struct ClientResult {
    bool accepted = false;
    std::string detail;
    std::optional<tee::AttestedPlacement> placement;
};

// Client protocol: encrypt, request, verify h_tx and the attestation,
// submit process(), relay the verdict. Queries several validators and
// prefers the placement computed on the freshest state.
class ClientSession {
public:
    ClientSession(std::vector<ValidatorHost*> validators, IdealBlockchain& chain,
                  Transport& transport, tee::ProgId expected_prog, uint32_t query_count = 3,
                  uint32_t max_attempts = 3);

    ClientResult newtx(const Transaction& tx);
    std::optional<Transaction> read(ShardId id, const Hash256& h_tx) const;

private:
    std::vector<ValidatorHost*> validators_;
    IdealBlockchain& chain_;
    Transport& transport_;
    tee::ProgId expected_prog_;
    uint32_t query_count_;
    uint32_t max_attempts_;
    size_t next_validator_ = 0;
};

// F_cm test oracle: computes the placement internally over its own state
// copy and appends to its databases; no adversary can interpose.
class IdealCountermeasure {
public:
    explicit IdealCountermeasure(uint32_t shard_count,
                                 IdealBlockchain::ValidateFn validate = {});

    bool newtx(const Transaction& tx);
    std::optional<Transaction> read(ShardId id, const Hash256& h_tx) const;

    // Mirrors the enclaves' state updates so placements match.
    void update_state(const std::vector<tee::HeaderUpdate>& headers, const tee::UtxoDelta& delta);

    const std::map<Hash256, Transaction>& db(ShardId id) const { return chain_.db(id); }
    uint32_t shard_count() const { return chain_.shard_count(); }
    const tee::EnclaveState& state() const { return state_; }

private:
    IdealBlockchain chain_;
    tee::EnclaveState state_;
};

} // namespace protocol
} // namespace floodshard

#endif // FLOODSHARD_PROTOCOL_HPP
