// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <floodshard/event_queue.hpp>
#include <floodshard/network.hpp>
#include <floodshard/sharder.hpp>

#include <algorithm>
#include <random>

using namespace floodshard;

TEST_CASE("two events at the same time fire in scheduling order") {
    EventQueue<char> q;
    q.schedule(5, 'A');
    q.schedule(5, 'B');
    auto a = q.pop_until(10);
    auto b = q.pop_until(10);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->payload == 'A');
    CHECK(b->payload == 'B');
    CHECK(q.now() == 5);
}

TEST_CASE("run_until(0) does not process later events") {
    EventQueue<int> q;
    q.schedule(1, 1);
    q.schedule(7, 2);
    CHECK_FALSE(q.pop_until(0).has_value());
    CHECK(q.pending() == 2);
}

TEST_CASE("scheduling into the past is a logic error") {
    EventQueue<int> q;
    q.schedule(10, 1);
    REQUIRE(q.pop_until(10));
    CHECK(q.now() == 10);
    CHECK_THROWS_AS(q.schedule(9, 2), std::logic_error);
}

TEST_CASE("delivery order of 1e5 random events equals the sort oracle") {
    std::mt19937_64 rng(13);
    EventQueue<uint32_t> q;
    struct Expect {
        TimeMs at;
        uint64_t seq;
        uint32_t id;
    };
    std::vector<Expect> expect;
    for (uint32_t i = 0; i < 100000; ++i) {
        TimeMs t = static_cast<TimeMs>(rng() % 10000);
        q.schedule(t, i);
        expect.push_back({t, i, i});
    }
    std::stable_sort(expect.begin(), expect.end(), [](const Expect& a, const Expect& b) {
        if (a.at != b.at) return a.at < b.at;
        return a.seq < b.seq;
    });

    size_t k = 0;
    TimeMs prev = 0;
    while (auto ev = q.pop_until(10000)) {
        REQUIRE(ev->payload == expect[k].id);
        REQUIRE(ev->at >= prev); // the clock never decreases
        prev = ev->at;
        ++k;
    }
    CHECK(k == expect.size());
    CHECK(q.scheduled_count() == q.processed_count() + q.pending());
}

TEST_CASE("same-region zero-size message costs the intra-region latency") {
    NetworkModel model = NetworkModel::defaults();
    // Two nodes pinned into one region by a weight table.
    model.region_weight = {1, 0, 0, 0, 0, 0};
    NodeDirectory dir(model, 2, 1);
    CHECK(dir.region_of(0) == Region::NorthAmerica);
    CHECK(dir.message_delay(0, 1, 0) == model.latency_ms[0][0]);
}

TEST_CASE("transfer time is linear in size under zero latency") {
    NetworkModel model = NetworkModel::defaults();
    for (auto& row : model.latency_ms) row.fill(0);
    model.bandwidth_bps.fill(1000000); // 1 MB/s -> 1 ms per kB
    model.region_weight = {1, 0, 0, 0, 0, 0};
    NodeDirectory dir(model, 2, 1);
    TimeMs d1 = dir.message_delay(0, 1, 50000);
    TimeMs d2 = dir.message_delay(0, 1, 100000);
    CHECK(d1 == 50);
    CHECK(d2 == 100);
}

TEST_CASE("delays equal the matrix entry plus the bottleneck transfer") {
    NetworkModel model = NetworkModel::defaults();
    NodeDirectory dir(model, 500, 7);
    for (uint32_t a = 0; a < 20; ++a) {
        for (uint32_t b = 0; b < 20; ++b) {
            size_t ra = static_cast<size_t>(dir.region_of(a));
            size_t rb = static_cast<size_t>(dir.region_of(b));
            int64_t bw = std::min(model.bandwidth_bps[ra], model.bandwidth_bps[rb]);
            TimeMs want = model.latency_ms[ra][rb] + (500 * 1000 + bw - 1) / bw;
            REQUIRE(dir.message_delay(a, b, 500) == want);
        }
    }
}

TEST_CASE("unknown node is an error") {
    NodeDirectory dir(NetworkModel::defaults(), 4, 1);
    CHECK_THROWS_AS(dir.message_delay(0, 99, 100), std::out_of_range);
}

TEST_CASE("asymmetric latency matrix is rejected") {
    NetworkModel model = NetworkModel::defaults();
    model.latency_ms[0][1] = 1;
    CHECK_THROWS_AS(model.validate(), ConfigError);
}

TEST_CASE("checked-in network config matches the built-in defaults") {
    NetworkModel file = NetworkModel::from_json_file(std::string(FLOODSHARD_SOURCE_DIR) +
                                                     "/configs/network_default.json");
    NetworkModel def = NetworkModel::defaults();
    CHECK(file.latency_ms == def.latency_ms);
    CHECK(file.bandwidth_bps == def.bandwidth_bps);
    CHECK(file.region_weight == def.region_weight);
}
