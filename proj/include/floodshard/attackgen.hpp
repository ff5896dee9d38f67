// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_ATTACKGEN_HPP
#define FLOODSHARD_ATTACKGEN_HPP

#include <floodshard/sharder.hpp>
#include <floodshard/tan.hpp>
#include <floodshard/tx.hpp>
#include <floodshard/utxo.hpp>

#include <cstdint>
#include <functional>
#include <random>

namespace floodshard {
namespace attackgen {

class InsufficientFunds : public std::runtime_error {
public:
    explicit InsufficientFunds(const std::string& what) : std::runtime_error(what) {}
};

struct AttackConfig {
    ShardId target_shard = 0;
    uint32_t shard_count = 16;
    AddressBook funded;
    Satoshi min_relay_fee = 1000;  // satoshi per kB
    uint32_t worker_count = 1;
    uint64_t rng_seed = 1;
    BitOrder bit_order = BitOrder::BigEndian;
    uint32_t tx_size_bytes = 500;
};

struct GrindStats {
    uint64_t attempts = 0; // candidate hashes computed, accepted one included
};

Satoshi relay_fee_for(Satoshi min_relay_fee_per_kb, uint32_t size_bytes);

// Brute-force generation of one transaction whose txid routes to the
// target shard: inputs are drawn once from the funded addresses, the
// output side is re-sampled until the digest suffix matches. With a very
// small address pool the nonce bytes are varied as well so the loop
// always terminates.
Transaction generate_malicious_tx(const AttackConfig& cfg, std::mt19937_64& rng,
                                  GrindStats* stats = nullptr);

struct RateReport {
    uint32_t shard_count = 0;
    uint32_t threads = 0;
    double seconds = 0;
    double hashes_per_sec = 0;
    double malicious_per_sec = 0;
};

// Measures grinding throughput on this machine for `duration_seconds`
// of wall-clock time. Rates are machine-dependent.
RateReport bench_generation(const AttackConfig& cfg, double duration_seconds);

// Cost of an attack in USD: tx_count transactions each paying the
// minimum relay fee for avg_size_bytes.
double attack_cost(uint64_t tx_count, Satoshi min_relay_fee_per_kb, uint32_t avg_size_bytes,
                   double usd_per_satoshi);

struct StreamConfig {
    double total_rate_tps = 5000;
    double malicious_fraction = 0.1;
    ShardId target_shard = 0;
    uint32_t shard_count = 16;
    uint64_t rng_seed = 1;
    BitOrder bit_order = BitOrder::BigEndian;
    uint32_t worker_count = 1;
    uint64_t total_count = 0; // 0 = sized so the legit source is consumed
};

struct AttackStream {
    std::vector<TanRecord> genesis; // attacker wallet outputs, pre-existing
    std::vector<TanRecord> stream;  // timestamped, interleaved by rate
};

// Interleaves ground malicious transactions with a legitimate workload
// at the given rate. Each slot is malicious with probability
// `malicious_fraction`; malicious slots carry real ground transactions
// spending the synthetic wallet in `genesis`. Deterministic for a fixed
// seed at any worker count (each malicious slot is ground from its own
// derived seed).
AttackStream attack_stream(const StreamConfig& cfg, std::vector<TanRecord> legit_source);

} // namespace attackgen
} // namespace floodshard

#endif // FLOODSHARD_ATTACKGEN_HPP
