// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_METRICS_HPP
#define FLOODSHARD_METRICS_HPP

#include <floodshard/event_queue.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace floodshard {

struct QueueSample {
    TimeMs at_ms;
    uint64_t size;
};

// Immutable result of one experiment run. Throughput is committed
// transactions divided by active seconds; latency is commit minus
// submit, averaged over committed transactions.
struct MetricsReport {
    double throughput_tps = 0;
    double avg_latency_ms = 0;
    double active_seconds = 0;

    uint64_t submitted = 0;
    uint64_t committed = 0;
    uint64_t rejected = 0;
    uint64_t pending_at_end = 0;
    uint64_t affected_count = 0; // txs touching the attacked shard

    std::vector<uint64_t> committed_by_shard;
    std::vector<uint64_t> max_queue_by_shard;
    std::vector<std::vector<QueueSample>> queue_series; // by shard

    uint64_t max_queue(uint32_t shard) const { return max_queue_by_shard.at(shard); }
};

// CSV emission with stable documented headers (docs/formats.md).
void write_throughput_csv(std::ostream& out, const MetricsReport& r);
void write_latency_csv(std::ostream& out, const MetricsReport& r);
void write_queue_csv(std::ostream& out, const MetricsReport& r, uint32_t shard);
void write_metrics_files(const std::string& dir, const MetricsReport& r);

} // namespace floodshard

#endif // FLOODSHARD_METRICS_HPP
