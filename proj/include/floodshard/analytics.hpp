// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_ANALYTICS_HPP
#define FLOODSHARD_ANALYTICS_HPP

#include <floodshard/sharder.hpp>
#include <floodshard/tan.hpp>

#include <cstdint>

namespace floodshard {
namespace analytics {

// Expected number of candidate transactions ground per accepted one.
double expected_attempts(uint32_t n);

// Probability that a transaction with m inputs has the attacked shard
// among its input shards or as its output shard: 1 - ((n-1)/n)^(m+1).
double affected_probability(uint32_t n, uint32_t m);

class DanglingReference : public std::runtime_error {
public:
    explicit DanglingReference(const std::string& what) : std::runtime_error(what) {}
};

// Fraction of workload transactions directly affected by an attack on
// shard `target` under hash-based sharding: target appears among the
// input shards (the output shards of the referenced parents) or is the
// transaction's own output shard. Input references must resolve to
// earlier records; unknown references raise DanglingReference. Returns 0
// for an empty workload (`*warned` reports that degenerate case).
double affected_fraction_empirical(const std::vector<TanRecord>& workload, uint32_t n,
                                   ShardId target, BitOrder order = BitOrder::BigEndian,
                                   bool* warned = nullptr);

} // namespace analytics
} // namespace floodshard

#endif // FLOODSHARD_ANALYTICS_HPP
