// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_TAN_HPP
#define FLOODSHARD_TAN_HPP

#include <floodshard/hash.hpp>
#include <floodshard/powerlaw.hpp>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace floodshard {

// One node of the transaction-as-nodes graph: a transaction identified
// by txid, with directed edges to the earlier transactions it spends.
struct TanRecord {
    Hash256 id;
    std::vector<Hash256> inputs; // referenced parent txids
    uint32_t n_outputs = 1;
    int64_t timestamp_ms = -1;   // <0 when the record carries no timestamp
    bool malicious = false;
    bool genesis = false;        // pre-existing output, never submitted

    bool operator==(const TanRecord&) const = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_no(line) {}
    size_t line_no;
};

struct LoadStats {
    uint64_t loaded = 0;
    uint64_t skipped_dangling = 0; // records dropped for unknown references
};

// Streaming reader for the line-record dataset format (docs/formats.md).
// References must point at records already seen: unknown references make
// the record a dangler (skip-and-count); a self or forward reference is
// an ordering violation and raises ParseError, keeping graphs acyclic.
class DatasetReader {
public:
    explicit DatasetReader(std::istream& in);

    std::optional<TanRecord> next();
    const LoadStats& stats() const { return stats_; }

private:
    std::istream& in_;
    LoadStats stats_;
    size_t line_no_ = 0;
    std::unordered_set<Hash256, Hash256Hasher> seen_;
};

std::vector<TanRecord> load_dataset(const std::string& path, LoadStats* stats = nullptr);
void write_dataset(std::ostream& out, const std::vector<TanRecord>& records);
std::string format_record(const TanRecord& rec);

struct SynthConfig {
    uint64_t count = 0;             // total records emitted, seeds included
    uint32_t shard_count = 16;
    PowerLawSpec degree{std::pow(10.0, 6.7), -2.3};    // inputs per tx
    PowerLawSpec input_shards{std::pow(10.0, 7.2), -2.2}; // distinct input shards per tx
    uint32_t max_degree = 100;
    uint32_t seed_records = 0;      // 0 = derived from shard_count
    uint64_t rng_seed = 1;
};

// Deterministic synthetic workload stream. Spending records reference
// earlier records only; every referenced output is consumed at most
// once.
class SynthGenerator {
public:
    explicit SynthGenerator(const SynthConfig& cfg);

    const SynthConfig& config() const { return cfg_; }

    std::optional<TanRecord> next();
    uint64_t emitted() const { return emitted_; }

private:
    struct PoolEntry {
        Hash256 id;
        uint16_t avail;
    };

    Hash256 fresh_id();
    uint32_t pick_nonempty_shard();

    SynthConfig cfg_;
    std::mt19937_64 rng_;
    PowerLawSampler degree_sampler_;
    PowerLawSampler inshard_sampler_;
    std::vector<std::vector<PoolEntry>> pools_; // available outputs by shard
    uint64_t available_outputs_ = 0;
    uint64_t emitted_ = 0;
    uint32_t seed_target_;
};

std::vector<TanRecord> synth_generate(const SynthConfig& cfg);

} // namespace floodshard

#endif // FLOODSHARD_TAN_HPP
