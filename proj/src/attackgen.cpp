// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/attackgen.hpp>

#include <floodshard/rng.hpp>

#include <openssl/sha.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>

namespace floodshard {
namespace attackgen {

namespace {

void store_i64_le(uint8_t* dst, int64_t v) {
    uint64_t u = static_cast<uint64_t>(v);
    for (int i = 0; i < 8; ++i) dst[i] = static_cast<uint8_t>(u >> (8 * i));
}

// Grinds the output side of a fixed-input transaction until the txid
// suffix selects the target shard. The serialized candidate is patched
// in place between attempts; only the two outputs and the 8-byte nonce
// region ever change.
class Grinder {
public:
    Grinder(const std::vector<Outpoint>& inputs, std::vector<Address> out_pool, Satoshi out_sum,
            uint32_t size_bytes, ShardId target, uint32_t n, BitOrder order)
        : out_pool_(std::move(out_pool)), out_sum_(out_sum), target_(target), n_(n), order_(order) {
        tx_.inputs = inputs;
        tx_.outputs.resize(2);
        tx_.outputs[0].address = out_pool_[0];
        tx_.outputs[1].address = out_pool_[0];
        tx_.outputs[0].value = out_sum;
        tx_.nonce_bytes.assign(8, 0);
        tx_.size_bytes = size_bytes;
        buf_ = serialize(tx_);
        out_off_ = 4 + 36 * tx_.inputs.size() + 4;
        nonce_off_ = out_off_ + 2 * 28 + 4;
    }

    Transaction grind(std::mt19937_64& rng, GrindStats* stats) {
        uint64_t attempts = 0;
        // Re-sampling tx.out alone may not offer enough distinct
        // candidates for tiny address pools; past this many misses the
        // nonce bytes start varying too, so the loop always terminates.
        const uint64_t nonce_after = 8ULL * n_ + 32;
        for (;;) {
            ++attempts;
            sample_outputs(rng);
            if (attempts > nonce_after) {
                uint64_t w = rng();
                std::memcpy(buf_.data() + nonce_off_, &w, 8);
                std::memcpy(tx_.nonce_bytes.data(), &w, 8);
            }
            if (shard_of(hash_candidate(), n_, order_) == target_) break;
        }
        if (stats) stats->attempts += attempts;
        return tx_;
    }

private:
    void sample_outputs(std::mt19937_64& rng) {
        const Address& a0 = out_pool_[uniform_below(rng, out_pool_.size())];
        const Address& a1 = out_pool_[uniform_below(rng, out_pool_.size())];
        Satoshi v0 = static_cast<Satoshi>(uniform_below(rng, static_cast<uint64_t>(out_sum_) + 1));
        tx_.outputs[0].address = a0;
        tx_.outputs[0].value = v0;
        tx_.outputs[1].address = a1;
        tx_.outputs[1].value = out_sum_ - v0;
        uint8_t* p = buf_.data() + out_off_;
        std::memcpy(p, a0.data(), 20);
        store_i64_le(p + 20, v0);
        std::memcpy(p + 28, a1.data(), 20);
        store_i64_le(p + 48, out_sum_ - v0);
    }

    Hash256 hash_candidate() const {
        Hash256 h;
        SHA256(buf_.data(), buf_.size(), h.bytes.data());
        SHA256(h.bytes.data(), 32, h.bytes.data());
        return h;
    }

    Transaction tx_;
    std::vector<uint8_t> buf_;
    std::vector<Address> out_pool_;
    Satoshi out_sum_;
    size_t out_off_ = 0;
    size_t nonce_off_ = 0;
    ShardId target_;
    uint32_t n_;
    BitOrder order_;
};

} // namespace

Satoshi relay_fee_for(Satoshi min_relay_fee_per_kb, uint32_t size_bytes) {
    return (min_relay_fee_per_kb * static_cast<Satoshi>(size_bytes) + 999) / 1000;
}

Transaction generate_malicious_tx(const AttackConfig& cfg, std::mt19937_64& rng,
                                  GrindStats* stats) {
    if (cfg.target_shard >= cfg.shard_count) throw ConfigError("target shard out of range");
    if (cfg.min_relay_fee <= 0) throw ConfigError("min relay fee must be positive");

    const Satoshi fee = relay_fee_for(cfg.min_relay_fee, cfg.tx_size_bytes);
    auto entries = cfg.funded.funded_entries();
    if (entries.empty()) throw InsufficientFunds("attacker wallet has no funded addresses");

    // tx.in <-$ I: start from a random funded outpoint and widen until
    // the inputs can cover the relay fee.
    std::vector<Outpoint> inputs;
    Satoshi in_sum = 0;
    size_t start = uniform_below(rng, entries.size());
    for (size_t k = 0; k < entries.size() && in_sum < fee; ++k) {
        const auto& e = entries[(start + k) % entries.size()];
        inputs.push_back(e.outpoint);
        in_sum += e.value;
    }
    if (in_sum < fee)
        throw InsufficientFunds("wallet balance " + std::to_string(in_sum) +
                                " cannot pay relay fee " + std::to_string(fee));

    std::vector<Address> pool(cfg.funded.all_addresses().begin(), cfg.funded.all_addresses().end());
    Grinder grinder(inputs, std::move(pool), in_sum - fee, cfg.tx_size_bytes, cfg.target_shard,
                    cfg.shard_count, cfg.bit_order);
    return grinder.grind(rng, stats);
}

RateReport bench_generation(const AttackConfig& cfg, double duration_seconds) {
    if (duration_seconds <= 0) throw ConfigError("bench duration must be positive");
    const uint32_t threads = std::max(1u, cfg.worker_count);

    std::atomic<uint64_t> total_hashes{0};
    std::atomic<uint64_t> total_accepted{0};
    auto t0 = std::chrono::steady_clock::now();
    auto deadline = t0 + std::chrono::duration<double>(duration_seconds);

    auto work = [&](uint32_t worker) {
        std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0xbe7c, worker));
        uint64_t hashes = 0, accepted = 0;
        GrindStats stats;
        while (std::chrono::steady_clock::now() < deadline) {
            // A burst of generations between clock checks.
            for (int i = 0; i < 32; ++i) {
                stats.attempts = 0;
                generate_malicious_tx(cfg, rng, &stats);
                hashes += stats.attempts;
                ++accepted;
            }
        }
        total_hashes += hashes;
        total_accepted += accepted;
    };

    std::vector<std::thread> pool;
    for (uint32_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    RateReport r;
    r.shard_count = cfg.shard_count;
    r.threads = threads;
    r.seconds = elapsed;
    r.hashes_per_sec = static_cast<double>(total_hashes.load()) / elapsed;
    r.malicious_per_sec = static_cast<double>(total_accepted.load()) / elapsed;
    return r;
}

double attack_cost(uint64_t tx_count, Satoshi min_relay_fee_per_kb, uint32_t avg_size_bytes,
                   double usd_per_satoshi) {
    if (min_relay_fee_per_kb <= 0 || avg_size_bytes == 0 || usd_per_satoshi <= 0)
        throw ConfigError("attack cost inputs must be positive");
    Satoshi fee_per_tx = relay_fee_for(min_relay_fee_per_kb, avg_size_bytes);
    return static_cast<double>(tx_count) * static_cast<double>(fee_per_tx) * usd_per_satoshi;
}

AttackStream attack_stream(const StreamConfig& cfg, std::vector<TanRecord> legit_source) {
    if (cfg.malicious_fraction < 0 || cfg.malicious_fraction > 1)
        throw ConfigError("malicious fraction must be in [0, 1]");
    if (cfg.total_rate_tps <= 0) throw ConfigError("rate must be positive");
    if (cfg.target_shard >= cfg.shard_count) throw ConfigError("target shard out of range");

    uint64_t total = cfg.total_count;
    if (total == 0) {
        if (cfg.malicious_fraction >= 1.0)
            throw ConfigError("total_count is required when the stream is fully malicious");
        total = static_cast<uint64_t>(
            std::llround(static_cast<double>(legit_source.size()) / (1.0 - cfg.malicious_fraction)));
    }

    // Slot plan first: timestamps and malicious markers are decided by a
    // dedicated rng so grinding never perturbs the interleaving.
    std::mt19937_64 slot_rng(derive_seed(cfg.rng_seed, 0x5107, 0));
    std::bernoulli_distribution is_malicious(cfg.malicious_fraction);

    AttackStream out;
    out.stream.reserve(total);
    std::vector<uint64_t> malicious_slots;
    size_t legit_next = 0;
    for (uint64_t i = 0; i < total; ++i) {
        int64_t t_ms = static_cast<int64_t>(std::llround(1000.0 * i / cfg.total_rate_tps));
        bool mal = cfg.malicious_fraction >= 1.0 ||
                   (cfg.malicious_fraction > 0.0 && is_malicious(slot_rng));
        if (!mal) {
            if (legit_next >= legit_source.size()) break;
            TanRecord rec = std::move(legit_source[legit_next++]);
            rec.timestamp_ms = t_ms;
            rec.malicious = false;
            out.stream.push_back(std::move(rec));
        } else {
            TanRecord placeholder;
            placeholder.timestamp_ms = t_ms;
            placeholder.malicious = true;
            malicious_slots.push_back(out.stream.size());
            out.stream.push_back(std::move(placeholder));
        }
    }

    // Wallet: one pre-existing two-output parent per malicious slot.
    out.genesis.reserve(malicious_slots.size());
    std::vector<Address> addr_pool(16);
    {
        std::mt19937_64 wallet_rng(derive_seed(cfg.rng_seed, 0xadd2, 0));
        for (auto& a : addr_pool)
            for (auto& b : a) b = static_cast<uint8_t>(wallet_rng());
        for (uint64_t k = 0; k < malicious_slots.size(); ++k) {
            TanRecord parent;
            std::mt19937_64 id_rng(derive_seed(cfg.rng_seed, 0x6e51, k));
            for (size_t i = 0; i < 32; i += 8) {
                uint64_t w = id_rng();
                std::memcpy(parent.id.bytes.data() + i, &w, 8);
            }
            parent.n_outputs = 2;
            parent.genesis = true;
            out.genesis.push_back(std::move(parent));
        }
    }

    // Grind the malicious slots; each slot derives its own seed so the
    // result is identical for any worker count.
    const uint32_t threads = std::max(1u, cfg.worker_count);
    auto grind_slot = [&](uint64_t k) {
        std::mt19937_64 rng(derive_seed(cfg.rng_seed, 0x9f1d, k));
        const TanRecord& parent = out.genesis[k];
        uint32_t m = 1 + static_cast<uint32_t>(uniform_below(rng, 2));
        std::vector<Outpoint> inputs;
        for (uint32_t j = 0; j < m; ++j) inputs.push_back({parent.id, j});
        Satoshi in_sum = 100000 * m;
        Grinder grinder(inputs, addr_pool, in_sum - 500, 500, cfg.target_shard, cfg.shard_count,
                        cfg.bit_order);
        Transaction tx = grinder.grind(rng, nullptr);

        TanRecord& rec = out.stream[malicious_slots[k]];
        rec.id = compute_txid(tx);
        rec.inputs.push_back(parent.id);
        rec.n_outputs = static_cast<uint32_t>(tx.outputs.size());
    };

    if (threads == 1 || malicious_slots.size() < 256) {
        for (uint64_t k = 0; k < malicious_slots.size(); ++k) grind_slot(k);
    } else {
        std::vector<std::thread> pool;
        std::atomic<uint64_t> next{0};
        for (uint32_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    uint64_t k = next.fetch_add(64);
                    if (k >= malicious_slots.size()) return;
                    uint64_t end = std::min<uint64_t>(k + 64, malicious_slots.size());
                    for (; k < end; ++k) grind_slot(k);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    return out;
}

} // namespace attackgen
} // namespace floodshard
