// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_NETWORK_HPP
#define FLOODSHARD_NETWORK_HPP

#include <floodshard/event_queue.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace floodshard {

// Six geographic regions, in the order used by the latency matrix.
enum class Region : uint8_t {
    NorthAmerica = 0,
    Europe,
    SouthAmerica,
    AsiaPacific,
    Japan,
    Australia,
};
inline constexpr size_t kRegionCount = 6;

const char* region_name(Region r);

// Region-pair propagation latencies plus per-region bandwidth, the same
// shape of table SimBlock ships. Values are overridable from a config
// file (configs/network_default.json carries the defaults).
struct NetworkModel {
    // milliseconds, symmetric
    std::array<std::array<int64_t, kRegionCount>, kRegionCount> latency_ms;
    // bytes per second
    std::array<int64_t, kRegionCount> bandwidth_bps;
    // cumulative distribution for assigning node regions
    std::array<double, kRegionCount> region_weight;

    static NetworkModel defaults();
    static NetworkModel from_json_file(const std::string& path);

    void validate() const;
};

class NodeDirectory {
public:
    NodeDirectory(const NetworkModel& model, uint32_t node_count, uint64_t rng_seed);

    uint32_t size() const { return static_cast<uint32_t>(regions_.size()); }
    Region region_of(uint32_t node) const;

    // latency(region_a, region_b) + size / min(bandwidth_a, bandwidth_b)
    TimeMs message_delay(uint32_t from, uint32_t to, uint64_t size_bytes) const;

    const NetworkModel& model() const { return model_; }

private:
    NetworkModel model_;
    std::vector<Region> regions_;
};

} // namespace floodshard

#endif // FLOODSHARD_NETWORK_HPP
