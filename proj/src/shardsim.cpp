// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/shardsim.hpp>

#include <floodshard/rng.hpp>

#include <algorithm>
#include <cmath>

namespace floodshard {
namespace shardsim {

std::vector<ValidatorNode> assign_validators(uint32_t count, uint32_t n, std::mt19937_64& rng,
                                             const NodeDirectory* dir) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
    if (count < n) throw ConfigError("need at least one validator per shard");

    std::vector<ValidatorNode> nodes;
    nodes.reserve(count);
    std::vector<uint32_t> leader(n, UINT32_MAX);
    for (uint32_t i = 0; i < count; ++i) {
        ShardId s = static_cast<ShardId>(uniform_below(rng, n));
        Region r = dir ? dir->region_of(i) : Region::NorthAmerica;
        nodes.push_back({i, s, r, false});
        if (leader[s] == UINT32_MAX) leader[s] = i; // lowest node id wins
    }
    // A uniform draw can leave a shard empty; reassign the first spare
    // node of the largest shard deterministically.
    for (ShardId s = 0; s < n; ++s) {
        if (leader[s] != UINT32_MAX) continue;
        std::vector<uint32_t> sizes(n, 0);
        for (const auto& v : nodes) ++sizes[v.shard];
        ShardId donor = static_cast<ShardId>(
            std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        for (auto& v : nodes) {
            if (v.shard == donor && leader[donor] != v.node_id) {
                v.shard = s;
                leader[s] = v.node_id;
                break;
            }
        }
    }
    for (ShardId s = 0; s < n; ++s) {
        leader[s] = UINT32_MAX;
        for (const auto& v : nodes)
            if (v.shard == s) leader[s] = std::min(leader[s], v.node_id);
    }
    for (auto& v : nodes) v.is_leader = (v.node_id == leader[v.shard]);
    return nodes;
}

ShardId balanced_input_choice(std::span<const ShardId> input_shards,
                              std::span<const uint64_t> loads) {
    const uint32_t n = static_cast<uint32_t>(loads.size());
    if (n == 0) throw ConfigError("shard count must be >= 1");

    if (input_shards.empty()) {
        ShardId best = 0;
        for (ShardId s = 1; s < n; ++s)
            if (loads[s] < loads[best]) best = s;
        return best;
    }

    // Inputs per candidate shard; candidates are the input shards.
    std::vector<uint32_t> here(n, 0);
    for (ShardId s : input_shards) {
        if (s >= n) throw ConfigError("input shard out of range");
        ++here[s];
    }
    const uint32_t total = static_cast<uint32_t>(input_shards.size());
    ShardId best = UINT32_MAX;
    for (ShardId s = 0; s < n; ++s) {
        if (here[s] == 0) continue;
        if (best == UINT32_MAX) {
            best = s;
            continue;
        }
        uint32_t cross_s = total - here[s];
        uint32_t cross_b = total - here[best];
        if (cross_s != cross_b) {
            if (cross_s < cross_b) best = s;
        } else if (loads[s] != loads[best]) {
            if (loads[s] < loads[best]) best = s;
        }
        // equal on both counts: keep the lower shard id (s > best)
    }
    return best;
}

Simulation::Simulation(const ExperimentConfig& cfg)
    : cfg_(cfg),
      rng_(derive_seed(cfg.rng_seed, 0xc11e, 0)),
      nodes_(cfg.network, cfg.validator_count, derive_seed(cfg.rng_seed, 0x4e7, 0)),
      chains_(cfg.shard_count) {
    if (cfg_.shard_count == 0) throw ConfigError("shard count must be >= 1");
    if (cfg_.block_capacity == 0) throw ConfigError("block capacity must be >= 1");
    if (cfg_.block_interval_ms <= 0) throw ConfigError("block interval must be positive");
    if (cfg_.injection_tps <= 0) throw ConfigError("injection rate must be positive");
    if (cfg_.malicious_fraction < 0 || cfg_.malicious_fraction > 1)
        throw ConfigError("malicious fraction must be in [0, 1]");
    if (cfg_.target_shard >= cfg_.shard_count) throw ConfigError("target shard out of range");

    std::mt19937_64 vrng(derive_seed(cfg.rng_seed, 0x7a1, 0));
    validators_ = assign_validators(cfg_.validator_count, cfg_.shard_count, vrng, &nodes_);
    for (const auto& v : validators_)
        if (v.is_leader) chains_[v.shard].leader_node = v.node_id;

    report_.committed_by_shard.assign(cfg_.shard_count, 0);
    report_.max_queue_by_shard.assign(cfg_.shard_count, 0);
    report_.queue_series.resize(cfg_.shard_count);
}

uint32_t Simulation::intern(const TanRecord& rec, bool genesis) {
    if (index_.count(rec.id)) throw std::logic_error("duplicate txid in workload");
    SimTx tx;
    tx.id = rec.id;
    tx.n_outputs = std::max(1u, rec.n_outputs);
    tx.malicious = rec.malicious;
    tx.inputs.reserve(rec.inputs.size());
    if (!genesis) {
        for (const auto& pid : rec.inputs) {
            auto it = index_.find(pid);
            if (it == index_.end()) throw std::logic_error("workload reference to unknown txid");
            SimTx& parent = store_[it->second];
            // References past the parent's fan-out reuse its last
            // outpoint: a double-spend attempt that the shards reject.
            uint16_t out_idx = parent.next_ref < parent.n_outputs
                                   ? static_cast<uint16_t>(parent.next_ref++)
                                   : static_cast<uint16_t>(parent.n_outputs - 1);
            tx.inputs.push_back({it->second, out_idx, parent.out_shard});
        }
    }
    uint32_t idx = static_cast<uint32_t>(store_.size());
    store_.push_back(std::move(tx));
    index_.emplace(rec.id, idx);
    return idx;
}

void Simulation::seed_genesis(const TanRecord& rec) {
    uint32_t idx = intern(rec, true);
    SimTx& tx = store_[idx];
    // Pre-existing outputs live where the prior chain put them; both
    // placement modes inherit the same spread state.
    tx.out_shard = shard_of(tx.id, cfg_.shard_count, cfg_.bit_order);
    tx.phase = TxPhase::Committed;
    tx.committed_flag = true;
    tx.genesis = true;
    tx.commit_ms = 0;
}

ShardId Simulation::place(const SimTx& tx) const {
    if (cfg_.sharder == SharderKind::Hash)
        return shard_of(tx.id, cfg_.shard_count, cfg_.bit_order);

    std::vector<ShardId> in_shards;
    in_shards.reserve(tx.inputs.size());
    for (const auto& ref : tx.inputs) in_shards.push_back(ref.shard);
    std::vector<uint64_t> loads(cfg_.shard_count);
    for (ShardId s = 0; s < cfg_.shard_count; ++s) loads[s] = chains_[s].queue.size();
    return balanced_input_choice(in_shards, loads);
}

void Simulation::submit(const TanRecord& rec) {
    const TimeMs now = events_.now();
    uint32_t idx = intern(rec, false);
    SimTx& tx = store_[idx];
    tx.submit_ms = now;
    tx.relay_only = cfg_.relay_only_malicious && tx.malicious;
    tx.out_shard = place(tx);
    ++submitted_;

    // Distinct input shards other than the output shard need a
    // confirmation round before the output shard may validate.
    std::vector<ShardId> lock_shards;
    bool touches_target = tx.out_shard == cfg_.target_shard;
    for (const auto& ref : tx.inputs) {
        if (ref.shard == cfg_.target_shard) touches_target = true;
        if (ref.shard == tx.out_shard) continue;
        if (std::find(lock_shards.begin(), lock_shards.end(), ref.shard) == lock_shards.end())
            lock_shards.push_back(ref.shard);
    }
    if (cfg_.malicious_fraction > 0 && touches_target) ++affected_;

    tx.locks_pending = static_cast<uint32_t>(lock_shards.size());
    tx.phase = tx.locks_pending ? TxPhase::PendingInputs : TxPhase::Ready;

    uint32_t client = static_cast<uint32_t>(uniform_below(rng_, cfg_.validator_count));
    for (ShardId s : lock_shards) {
        TimeMs d = nodes_.message_delay(client, chains_[s].leader_node, cfg_.tx_size_bytes);
        events_.schedule(now + d, Payload{Payload::Deliver, idx, s, true});
    }
    TimeMs d = nodes_.message_delay(client, chains_[tx.out_shard].leader_node, cfg_.tx_size_bytes);
    events_.schedule(now + d, Payload{Payload::Deliver, idx, tx.out_shard, false});
}

void Simulation::deliver(uint32_t tx_idx, ShardId shard, bool lock) {
    auto& ch = chains_[shard];
    ch.queue.push_back(lock ? (tx_idx | kLockBit) : tx_idx);
    report_.max_queue_by_shard[shard] =
        std::max<uint64_t>(report_.max_queue_by_shard[shard], ch.queue.size());
}

void Simulation::handle_proof(uint32_t tx_idx, TimeMs now) {
    SimTx& tx = store_[tx_idx];
    if (tx.phase == TxPhase::Rejected) return;
    tx.last_lock_ms = std::max(tx.last_lock_ms, now);
    if (tx.locks_pending > 0 && --tx.locks_pending == 0 && tx.phase == TxPhase::PendingInputs)
        tx.phase = TxPhase::Ready;
}

bool Simulation::inputs_available_here(const SimTx& tx, ShardId shard) const {
    for (const auto& ref : tx.inputs) {
        if (ref.shard != shard) continue;
        if (!store_[ref.parent].committed_flag) return false;
    }
    return true;
}

int Simulation::try_spend_inputs(uint32_t tx_idx, ShardId shard) {
    SimTx& tx = store_[tx_idx];
    for (const auto& ref : tx.inputs) {
        if (ref.shard != shard) continue;
        if (spent_.count(spend_key(ref.parent, ref.out_idx))) return 2;
        if (!store_[ref.parent].committed_flag) return 1;
    }
    for (const auto& ref : tx.inputs) {
        if (ref.shard != shard) continue;
        spent_.insert(spend_key(ref.parent, ref.out_idx));
    }
    return 0;
}

void Simulation::reject(uint32_t tx_idx) {
    SimTx& tx = store_[tx_idx];
    if (tx.phase == TxPhase::Rejected) return;
    tx.phase = TxPhase::Rejected;
    ++rejected_;
}

void Simulation::produce_block(ShardId shard, TimeMs now) {
    auto& ch = chains_[shard];
    std::vector<uint32_t> remaining;
    remaining.reserve(ch.queue.size());
    uint32_t slots = 0;

    size_t i = 0;
    for (; i < ch.queue.size(); ++i) {
        if (slots == cfg_.block_capacity) break;
        uint32_t entry = ch.queue[i];
        uint32_t idx = entry & ~kLockBit;
        SimTx& tx = store_[idx];
        if (tx.phase == TxPhase::Rejected) continue;

        if (entry & kLockBit) {
            int r = try_spend_inputs(idx, shard);
            if (r == 1) {
                remaining.push_back(entry);
                continue;
            }
            if (r == 2) {
                reject(idx);
                continue;
            }
            // Input confirmed here: the proof travels to the output
            // shard's leader. Lock entries ride along without consuming
            // block capacity.
            tx.last_lock_ms = now;
            TimeMs d = nodes_.message_delay(ch.leader_node, chains_[tx.out_shard].leader_node,
                                            cfg_.proof_size_bytes);
            events_.schedule(now + d, Payload{Payload::Proof, idx, tx.out_shard, false});
            continue;
        }

        if (tx.relay_only || tx.phase == TxPhase::PendingInputs) {
            remaining.push_back(entry);
            continue;
        }
        // Ready: inputs in other shards are already locked; any inputs
        // resident here are checked and spent at inclusion time.
        int r = try_spend_inputs(idx, shard);
        if (r == 1) {
            remaining.push_back(entry);
            continue;
        }
        if (r == 2) {
            reject(idx);
            continue;
        }
        tx.phase = TxPhase::Committed;
        tx.committed_flag = true;
        tx.commit_ms = now;
        ++committed_;
        ++report_.committed_by_shard[shard];
        latency_sum_ms_ += static_cast<double>(now - tx.submit_ms);
        last_commit_ms_ = std::max(last_commit_ms_, now);
        ++slots;
    }
    // Entries past the scan stay queued in arrival order.
    remaining.insert(remaining.end(), ch.queue.begin() + i, ch.queue.end());
    ch.queue.swap(remaining);

    ch.blocks.push_back(Block{++ch.height, shard, now, slots});
}

void Simulation::sample_queues(TimeMs now) {
    for (ShardId s = 0; s < cfg_.shard_count; ++s) {
        auto& series = report_.queue_series[s];
        if (!series.empty() && series.back().at_ms == now) continue;
        series.push_back({now, chains_[s].queue.size()});
    }
}

void Simulation::dispatch(const EventQueue<Payload>::Event& ev) {
    switch (ev.payload.kind) {
        case Payload::Arrival: {
            submit(pending_workload_[next_arrival_]);
            pending_workload_[next_arrival_] = TanRecord{}; // release memory early
            ++next_arrival_;
            if (next_arrival_ < pending_workload_.size()) {
                TimeMs t = pending_workload_[next_arrival_].timestamp_ms;
                events_.schedule(std::max(t, ev.at), Payload{Payload::Arrival, 0, 0, false});
            }
            break;
        }
        case Payload::Deliver:
            deliver(ev.payload.tx, ev.payload.shard, ev.payload.lock);
            break;
        case Payload::Proof:
            handle_proof(ev.payload.tx, ev.at);
            break;
        case Payload::BlockTick:
            produce_block(ev.payload.shard, ev.at);
            break;
        case Payload::Sample:
            sample_queues(ev.at);
            break;
    }
}

MetricsReport Simulation::run(std::vector<TanRecord>&& workload) {
    // Split off genesis records and timestamp the rest.
    pending_workload_.clear();
    pending_workload_.reserve(workload.size());
    uint64_t slot = 0;
    for (auto& rec : workload) {
        if (rec.genesis) {
            seed_genesis(rec);
            continue;
        }
        if (rec.timestamp_ms < 0)
            rec.timestamp_ms =
                static_cast<TimeMs>(std::llround(1000.0 * slot / cfg_.injection_tps));
        ++slot;
        pending_workload_.push_back(std::move(rec));
    }
    workload.clear();
    workload.shrink_to_fit();

    injection_end_ms_ =
        pending_workload_.empty() ? 0 : pending_workload_.back().timestamp_ms + 1;
    const TimeMs t_cap = static_cast<TimeMs>(
        injection_end_ms_ * (1.0 + std::max(0.0, cfg_.drain_factor))) + cfg_.block_interval_ms;

    if (!pending_workload_.empty())
        events_.schedule(pending_workload_.front().timestamp_ms,
                         Payload{Payload::Arrival, 0, 0, false});
    for (ShardId s = 0; s < cfg_.shard_count; ++s)
        events_.schedule(cfg_.block_interval_ms, Payload{Payload::BlockTick, 0, s, false});
    if (cfg_.sample_every_ms > 0)
        events_.schedule(0, Payload{Payload::Sample, 0, 0, false});

    TimeMs end_ms = 0;
    while (auto ev = events_.pop_until(t_cap)) {
        dispatch(*ev);
        end_ms = ev->at;

        bool stream_done = next_arrival_ >= pending_workload_.size();
        bool resolved = committed_ + rejected_ == submitted_;
        if (ev->payload.kind == Payload::BlockTick) {
            if (!(stream_done && resolved))
                events_.schedule(ev->at + cfg_.block_interval_ms,
                                 Payload{Payload::BlockTick, 0, ev->payload.shard, false});
        } else if (ev->payload.kind == Payload::Sample) {
            if (!(stream_done && resolved))
                events_.schedule(ev->at + cfg_.sample_every_ms,
                                 Payload{Payload::Sample, 0, 0, false});
        }
    }
    sample_queues(end_ms);

    report_.submitted = submitted_;
    report_.committed = committed_;
    report_.rejected = rejected_;
    report_.pending_at_end = submitted_ - committed_ - rejected_;
    report_.affected_count = affected_;
    report_.active_seconds = submitted_ > 0 ? static_cast<double>(end_ms) / 1000.0 : 0.0;
    report_.throughput_tps =
        report_.active_seconds > 0 ? committed_ / report_.active_seconds : 0.0;
    report_.avg_latency_ms = committed_ > 0 ? latency_sum_ms_ / committed_ : 0.0;
    return report_;
}

void Simulation::audit() const {
    // Conservation over submitted transactions.
    uint64_t committed = 0, rejected = 0, pending = 0;
    for (const auto& tx : store_) {
        if (tx.genesis) continue;
        switch (tx.phase) {
            case TxPhase::Committed: ++committed; break;
            case TxPhase::Rejected: ++rejected; break;
            default: ++pending; break;
        }
    }
    if (committed != committed_ || rejected != rejected_ ||
        committed + rejected + pending != submitted_)
        throw std::logic_error("audit: conservation violated");

    // No outpoint spent twice: at most one committed spender per key,
    // and every committed transaction's inputs are in the spent set.
    std::unordered_map<uint64_t, uint32_t> spender_count;
    for (const auto& tx : store_) {
        if (tx.phase != TxPhase::Committed || tx.genesis) continue;
        for (const auto& ref : tx.inputs) {
            uint64_t key = spend_key(ref.parent, ref.out_idx);
            if (!spent_.count(key))
                throw std::logic_error("audit: committed tx with unspent input");
            if (++spender_count[key] > 1)
                throw std::logic_error("audit: outpoint spent by two committed txs");
        }
    }

    // Cross-shard ordering: commits never precede their last input
    // confirmation.
    for (const auto& tx : store_) {
        if (tx.phase != TxPhase::Committed || tx.genesis) continue;
        if (tx.last_lock_ms >= 0 && tx.commit_ms < tx.last_lock_ms)
            throw std::logic_error("audit: commit before input confirmation");
    }

    // Event accounting.
    if (events_.scheduled_count() !=
        events_.processed_count() + events_.pending())
        throw std::logic_error("audit: event loss");
}

const SimTx* Simulation::find_tx(const Hash256& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &store_[it->second];
}

MetricsReport run_experiment(const ExperimentConfig& cfg, std::vector<TanRecord> workload) {
    Simulation sim(cfg);
    return sim.run(std::move(workload));
}

} // namespace shardsim
} // namespace floodshard
