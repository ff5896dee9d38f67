// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_SHARDSIM_HPP
#define FLOODSHARD_SHARDSIM_HPP

#include <floodshard/event_queue.hpp>
#include <floodshard/metrics.hpp>
#include <floodshard/network.hpp>
#include <floodshard/sharder.hpp>
#include <floodshard/tan.hpp>

#include <cstdint>
#include <deque>
#include <random>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace floodshard {
namespace shardsim {

struct ValidatorNode {
    uint32_t node_id;
    ShardId shard;
    Region region;
    bool is_leader;
};

// Uniform random shard assignment; the lowest node id in each shard is
// its leader. Throws when count < shard_count.
std::vector<ValidatorNode> assign_validators(uint32_t count, uint32_t n, std::mt19937_64& rng,
                                             const NodeDirectory* dir = nullptr);

// Shared placement rule for the balanced-input sharder: choose among
// the input shards the one minimizing the number of inputs left outside
// it, tie-break on load then on shard id. Zero-input transactions go to
// the least-loaded shard.
ShardId balanced_input_choice(std::span<const ShardId> input_shards,
                              std::span<const uint64_t> loads);

enum class SharderKind { Hash, Tee };

struct ExperimentConfig {
    uint32_t shard_count = 16;
    uint32_t validator_count = 4000;
    double injection_tps = 5000;
    uint64_t rng_seed = 1;
    TimeMs block_interval_ms = 8000;
    uint32_t block_capacity = 2000;
    double malicious_fraction = 0.0;
    ShardId target_shard = 0;
    SharderKind sharder = SharderKind::Hash;
    BitOrder bit_order = BitOrder::BigEndian;
    // The run drains after injection stops; it is cut off at
    // drain_factor times the injection window.
    double drain_factor = 4.0;
    TimeMs sample_every_ms = 10000;
    uint32_t tx_size_bytes = 500;
    uint32_t proof_size_bytes = 200;
    // §3.2 policy: relay-only transactions sit in the mempool but are
    // never confirmed. Off by default; malicious txs then consume block
    // capacity like any other.
    bool relay_only_malicious = false;
    NetworkModel network = NetworkModel::defaults();
};

enum class TxPhase : uint8_t { PendingInputs, Ready, Committed, Rejected };

// Lifecycle record of one simulated transaction.
struct SimTx {
    Hash256 id;
    struct InputRef {
        uint32_t parent;  // index into the store
        uint16_t out_idx; // concrete output of the parent
        ShardId shard;    // partition holding that output
    };
    std::vector<InputRef> inputs;
    uint32_t n_outputs = 1;
    ShardId out_shard = 0;
    TxPhase phase = TxPhase::PendingInputs;
    uint32_t locks_pending = 0;
    bool malicious = false;
    bool relay_only = false;
    bool genesis = false;
    bool committed_flag = false; // outputs exist once true
    TimeMs submit_ms = -1;
    TimeMs commit_ms = -1;
    TimeMs last_lock_ms = -1;
    uint32_t next_ref = 0; // outputs handed to spenders so far
};

struct Block {
    uint64_t height;
    ShardId shard;
    TimeMs timestamp;
    uint32_t tx_count;
};

class Simulation {
public:
    explicit Simulation(const ExperimentConfig& cfg);

    // Pre-existing outputs: committed state at time zero, consuming no
    // block capacity.
    void seed_genesis(const TanRecord& rec);

    // Client-side submission at the record's timestamp (or the next
    // injection slot when the record carries none).
    void submit(const TanRecord& rec);

    // Runs to workload exhaustion plus drain, then finalizes metrics.
    MetricsReport run(std::vector<TanRecord>&& workload);

    // Post-run invariant audit; throws std::logic_error on violation.
    void audit() const;

    const ExperimentConfig& config() const { return cfg_; }
    const std::vector<ValidatorNode>& validators() const { return validators_; }
    const std::vector<Block>& blocks(ShardId s) const { return chains_.at(s).blocks; }
    const SimTx* find_tx(const Hash256& id) const;
    uint64_t queue_size(ShardId s) const { return chains_.at(s).queue.size(); }

private:
    friend class SimStateView;

    // Queue entry: transaction index with the role packed in bit 31.
    static constexpr uint32_t kLockBit = 0x80000000u;

    struct ShardChain {
        std::vector<uint32_t> queue; // FIFO of packed entries
        std::vector<Block> blocks;
        uint64_t height = 0;
        uint32_t leader_node = 0;
    };

    struct Payload {
        enum Kind : uint8_t { Arrival, Deliver, Proof, BlockTick, Sample } kind;
        uint32_t tx = 0;
        uint32_t shard = 0;
        bool lock = false;
    };

    void dispatch(const EventQueue<Payload>::Event& ev);
    void deliver(uint32_t tx_idx, ShardId shard, bool lock);
    void handle_proof(uint32_t tx_idx, TimeMs now);
    void produce_block(ShardId shard, TimeMs now);
    ShardId place(const SimTx& tx) const;
    bool inputs_available_here(const SimTx& tx, ShardId shard) const;
    // 0 = ok (spent), 1 = waiting on a parent, 2 = double spend
    int try_spend_inputs(uint32_t tx_idx, ShardId shard);
    void reject(uint32_t tx_idx);
    uint32_t intern(const TanRecord& rec, bool genesis);
    void sample_queues(TimeMs now);
    uint64_t spend_key(uint32_t parent, uint16_t out_idx) const {
        return (static_cast<uint64_t>(parent) << 16) | out_idx;
    }

    ExperimentConfig cfg_;
    std::mt19937_64 rng_;
    NodeDirectory nodes_;
    std::vector<ValidatorNode> validators_;
    std::vector<ShardChain> chains_;
    std::vector<SimTx> store_;
    std::unordered_map<Hash256, uint32_t, Hash256Hasher> index_;
    std::unordered_set<uint64_t> spent_;
    EventQueue<Payload> events_;

    std::vector<TanRecord> pending_workload_;
    size_t next_arrival_ = 0;

    uint64_t submitted_ = 0;
    uint64_t committed_ = 0;
    uint64_t rejected_ = 0;
    uint64_t affected_ = 0;
    double latency_sum_ms_ = 0;
    TimeMs last_commit_ms_ = 0;
    TimeMs injection_end_ms_ = 0;

    MetricsReport report_;
};

MetricsReport run_experiment(const ExperimentConfig& cfg, std::vector<TanRecord> workload);

} // namespace shardsim
} // namespace floodshard

#endif // FLOODSHARD_SHARDSIM_HPP
