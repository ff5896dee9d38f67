// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_TEE_HPP
#define FLOODSHARD_TEE_HPP

#include <floodshard/crypto.hpp>
#include <floodshard/sharder.hpp>
#include <floodshard/tx.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace floodshard {
namespace tee {

using ProgId = Hash256;

// Canonical description of the placement program installed in the
// enclave; its digest is the program identity bound into every
// attestation.
struct ProgDescriptor {
    std::string name = "balanced-input";
    uint32_t version = 1;
    uint32_t shard_count = 16;

    std::vector<uint8_t> canonical_bytes() const;
    ProgId id() const { return double_sha256(canonical_bytes()); }
};

// Both public halves of an enclave identity: attestation verification
// key and input-encryption key.
struct TeePublicKey {
    crypto::Key32 sign_pk{};
    crypto::Key32 enc_pk{};

    bool operator==(const TeePublicKey&) const = default;
};

enum class PlacementStatus : uint8_t {
    Ok = 0,
    UnresolvableInput = 1, // some tx input is unknown to the state
};

// Signed output of one resume() call: (S_out, st, H(tx)) bound to the
// program identity under the enclave key.
struct AttestedPlacement {
    ProgId prog{};
    PlacementStatus status = PlacementStatus::Ok;
    ShardId s_out = 0;
    uint64_t st = 0;
    Hash256 h_tx{};
    crypto::Signature sigma{};

    // prog | status | s_out | st | h_tx, the signed payload
    std::vector<uint8_t> signed_payload() const;
    std::vector<uint8_t> to_bytes() const; // payload | sigma
    static std::optional<AttestedPlacement> from_bytes(std::span<const uint8_t> bytes);
};

bool verify_attestation(const crypto::Key32& sign_pk, const AttestedPlacement& att);

// State snapshot the placement program runs against: chain heights, a
// per-shard load measure, and the location of every live output.
struct EnclaveState {
    uint64_t version = 0;      // sealed snapshot counter (rollback guard)
    uint64_t state_height = 0; // st: highest monitored header height
    std::vector<uint64_t> shard_heights;
    std::vector<uint64_t> shard_loads;
    std::unordered_map<Outpoint, ShardId, OutpointHasher> utxo_location;

    std::vector<uint8_t> serialize() const;
    static EnclaveState deserialize(std::span<const uint8_t> bytes);
};

struct HeaderUpdate {
    ShardId shard;
    uint64_t height; // must extend the current header chain by one
};

struct UtxoDelta {
    std::vector<std::pair<Outpoint, ShardId>> created;
    std::vector<Outpoint> spent;
    std::vector<uint64_t> shard_loads; // empty = unchanged
};

class RollbackError : public std::runtime_error {
public:
    explicit RollbackError(const std::string& what) : std::runtime_error(what) {}
};

// Emulated TEE-capable machine: attestation keys, sealing key, and the
// monotonic counter standing in for a rollback-protection service.
// Keys never leave the platform/enclave boundary.
class TeePlatform {
public:
    TeePlatform();

    const TeePublicKey& public_key() const { return pk_; }
    uint64_t sealed_version() const { return sealed_version_; }

private:
    friend class EnclaveInstance;

    crypto::SigKeyPair sig_;
    crypto::BoxKeyPair box_;
    crypto::Key32 seal_key_{};
    TeePublicKey pk_;
    uint64_t sealed_version_ = 0; // latest version ever sealed
};

// One running enclave on a platform. All access to the private keys and
// the unsealed state goes through install/resume/update_state.
class EnclaveInstance {
public:
    explicit EnclaveInstance(TeePlatform& platform, uint32_t shard_count);

    const TeePublicKey& public_key() const { return platform_.public_key(); }

    // F_TEE install: stores the program identity, idempotent.
    void install(const ProgDescriptor& prog);
    bool installed() const { return prog_.has_value(); }
    std::optional<ProgId> installed_prog() const;

    // F_TEE resume on an encrypted transaction. Returns the attested
    // placement, or nullopt when no program is installed or the input
    // does not decrypt.
    std::optional<AttestedPlacement> resume(std::span<const uint8_t> inp_c) const;

    // Monitor path: headers must extend the tracked chains one block at
    // a time; the sealed snapshot version advances with each update.
    void update_state(const std::vector<HeaderUpdate>& headers, const UtxoDelta& delta);

    // Seal the current snapshot for host storage / unseal a snapshot.
    // Unsealing rejects tampered bytes and versions older than the
    // platform's rollback counter.
    std::vector<uint8_t> seal_state() const;
    void load_sealed_state(std::span<const uint8_t> blob);

    const EnclaveState& state() const { return state_; }

private:
    TeePlatform& platform_;
    std::optional<ProgDescriptor> prog_;
    EnclaveState state_;
};

// The default txsharding: deterministic in (tx.in, st) only; never looks
// at the transaction hash.
class BalancedInputSharder : public TxSharder {
public:
    ShardId place(const Transaction& tx, const ShardingState& state) const override;
    std::string name() const override { return "balanced-input"; }
};

// Placement as the enclave program computes it from its own state view.
std::pair<PlacementStatus, ShardId> txsharding(const Transaction& tx, const EnclaveState& st);

} // namespace tee
} // namespace floodshard

#endif // FLOODSHARD_TEE_HPP
