// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/analytics.hpp>

#include <cmath>
#include <unordered_set>

namespace floodshard {
namespace analytics {

double expected_attempts(uint32_t n) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
    // Geometric with success probability 1/n, first trial included.
    return static_cast<double>(n);
}

double affected_probability(uint32_t n, uint32_t m) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
    // m input shards plus the output shard, each i.i.d. uniform over n.
    return 1.0 - std::pow(static_cast<double>(n - 1) / n, static_cast<double>(m) + 1.0);
}

double affected_fraction_empirical(const std::vector<TanRecord>& workload, uint32_t n,
                                   ShardId target, BitOrder order, bool* warned) {
    if (n == 0) throw ConfigError("shard count must be >= 1");
    if (warned) *warned = false;
    if (workload.empty()) {
        if (warned) *warned = true;
        return 0.0;
    }

    std::unordered_set<Hash256, Hash256Hasher> seen;
    seen.reserve(workload.size());
    uint64_t affected = 0;
    for (const auto& rec : workload) {
        bool hit = shard_of(rec.id, n, order) == target;
        for (const auto& in : rec.inputs) {
            if (!seen.count(in))
                throw DanglingReference("input " + in.hex() + " not present in workload");
            if (!hit && shard_of(in, n, order) == target) hit = true;
        }
        seen.insert(rec.id);
        if (hit) ++affected;
    }
    return static_cast<double>(affected) / static_cast<double>(workload.size());
}

} // namespace analytics
} // namespace floodshard
