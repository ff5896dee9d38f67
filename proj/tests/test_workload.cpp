// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <floodshard/powerlaw.hpp>
#include <floodshard/sharder.hpp>
#include <floodshard/tan.hpp>

#include "test_util.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

using namespace floodshard;

namespace {

std::map<uint32_t, double> degree_histogram(const std::vector<TanRecord>& recs) {
    std::map<uint32_t, double> hist;
    for (const auto& r : recs) {
        if (r.inputs.empty()) continue; // coinbase-like records are excluded
        hist[static_cast<uint32_t>(r.inputs.size())] += 1;
    }
    return hist;
}

} // namespace

TEST_CASE("three-line dataset parses into the expected edges") {
    std::mt19937_64 rng(1);
    Hash256 a = testutil::random_hash(rng);
    Hash256 b = testutil::random_hash(rng);
    Hash256 c = testutil::random_hash(rng);

    std::ostringstream file;
    file << a.hex() << " 0 2\n";                                     // coinbase-like
    file << b.hex() << " 1 " << a.hex() << " 1\n";                   // B spends A
    file << c.hex() << " 2 " << a.hex() << ' ' << b.hex() << " 1\n"; // C spends A and B

    std::istringstream in(file.str());
    DatasetReader reader(in);
    std::vector<TanRecord> recs;
    while (auto r = reader.next()) recs.push_back(*r);

    REQUIRE(recs.size() == 3);
    CHECK(recs[0].inputs.empty());
    CHECK(recs[1].inputs == std::vector<Hash256>{a});
    CHECK(recs[2].inputs == std::vector<Hash256>{a, b});
    CHECK(reader.stats().loaded == 3);
    CHECK(reader.stats().skipped_dangling == 0);
}

TEST_CASE("a record referencing a missing txid is skipped and counted") {
    std::mt19937_64 rng(2);
    Hash256 a = testutil::random_hash(rng);
    Hash256 b = testutil::random_hash(rng);
    Hash256 ghost = testutil::random_hash(rng);

    std::ostringstream file;
    file << a.hex() << " 0 1\n";
    file << b.hex() << " 1 " << ghost.hex() << " 1\n";

    std::istringstream in(file.str());
    DatasetReader reader(in);
    std::vector<TanRecord> recs;
    while (auto r = reader.next()) recs.push_back(*r);

    CHECK(recs.size() == 1);
    CHECK(reader.stats().skipped_dangling == 1);
}

TEST_CASE("self reference is a cycle error with a line number") {
    std::mt19937_64 rng(3);
    Hash256 a = testutil::random_hash(rng);
    std::ostringstream file;
    file << "# comment line\n";
    file << a.hex() << " 1 " << a.hex() << " 1\n";
    std::istringstream in(file.str());
    DatasetReader reader(in);
    try {
        reader.next();
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line_no == 2);
    }
}

TEST_CASE("malformed lines report parse errors") {
    std::istringstream bad_hex("zz 0 1\n");
    DatasetReader r1(bad_hex);
    CHECK_THROWS_AS(r1.next(), ParseError);

    std::mt19937_64 rng(4);
    std::istringstream missing(testutil::random_hash(rng).hex() + " 2 \n");
    DatasetReader r2(missing);
    CHECK_THROWS_AS(r2.next(), ParseError);
}

TEST_CASE("dataset write/load round-trip preserves records") {
    SynthConfig cfg;
    cfg.count = 300;
    cfg.shard_count = 8;
    cfg.rng_seed = 5;
    auto recs = synth_generate(cfg);

    std::ostringstream out;
    write_dataset(out, recs);
    std::istringstream in(out.str());
    DatasetReader reader(in);
    std::vector<TanRecord> back;
    while (auto r = reader.next()) back.push_back(*r);

    REQUIRE(back.size() == recs.size());
    for (size_t i = 0; i < recs.size(); ++i) REQUIRE(back[i] == recs[i]);
}

TEST_CASE("power-law fit recovers an exact synthetic curve") {
    std::map<uint32_t, double> hist;
    for (uint32_t x = 1; x <= 100; ++x)
        hist[x] = std::pow(10.0, 6.7) * std::pow(static_cast<double>(x), -2.3);
    PowerLawSpec spec = fit_power_law(hist);
    CHECK(spec.exponent == doctest::Approx(-2.3).epsilon(1e-6));
    CHECK(std::log10(spec.scale) == doctest::Approx(6.7).epsilon(1e-6));
}

TEST_CASE("constant histogram fits exponent 0") {
    std::map<uint32_t, double> hist;
    for (uint32_t x = 1; x <= 50; ++x) hist[x] = 1234.0;
    CHECK(fit_power_law(hist).exponent == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("single-bin histogram is degenerate") {
    std::map<uint32_t, double> hist{{3, 10.0}};
    CHECK_THROWS_AS(fit_power_law(hist), std::invalid_argument);
    std::map<uint32_t, double> zeros{{1, 0.0}, {2, 0.0}, {3, 7.0}};
    CHECK_THROWS_AS(fit_power_law(zeros), std::invalid_argument);
}

TEST_CASE("sampler pmf matches the inverse-CDF oracle on small support") {
    PowerLawSampler sampler(-2.0, 4);
    // P(x) = x^-2 / Z with Z = 1 + 1/4 + 1/9 + 1/16
    const double z = 1 + 0.25 + 1.0 / 9 + 0.0625;
    CHECK(sampler.pmf(1) == doctest::Approx(1.0 / z));
    CHECK(sampler.pmf(2) == doctest::Approx(0.25 / z));
    CHECK(sampler.pmf(3) == doctest::Approx((1.0 / 9) / z));
    CHECK(sampler.pmf(4) == doctest::Approx(0.0625 / z));

    std::mt19937_64 rng(6);
    std::vector<uint64_t> counts(5, 0);
    const uint64_t n = 400000;
    for (uint64_t i = 0; i < n; ++i) ++counts[sampler.sample(rng)];
    for (uint32_t x = 1; x <= 4; ++x) {
        double p = sampler.pmf(x);
        double sigma = std::sqrt(p * (1 - p) * n);
        CHECK(std::abs(counts[x] - p * n) < 4 * sigma);
    }
}

TEST_CASE("noisy power-law sample refits within 0.1 of the truth") {
    PowerLawSampler sampler(-2.3, 100);
    std::mt19937_64 rng(7);
    std::map<uint32_t, double> hist;
    for (uint64_t i = 0; i < 1000000; ++i) hist[sampler.sample(rng)] += 1;
    PowerLawSpec fit = fit_power_law(hist);
    CHECK(fit.exponent == doctest::Approx(-2.3).epsilon(0.045)); // |err| < ~0.1
}

TEST_CASE("synthetic workload degree distribution refits the configured exponent") {
    SynthConfig cfg;
    cfg.count = 1000000;
    cfg.shard_count = 16;
    cfg.rng_seed = 8;
    auto recs = synth_generate(cfg);
    REQUIRE(recs.size() == cfg.count);

    PowerLawSpec fit = fit_power_law(degree_histogram(recs));
    CHECK(std::abs(fit.exponent - (-2.3)) < 0.15);
}

TEST_CASE("references always point to earlier records and outputs are not oversubscribed") {
    SynthConfig cfg;
    cfg.count = 20000;
    cfg.shard_count = 16;
    cfg.rng_seed = 9;
    auto recs = synth_generate(cfg);

    std::unordered_map<Hash256, uint32_t, Hash256Hasher> remaining;
    for (const auto& r : recs) {
        for (const auto& in : r.inputs) {
            auto it = remaining.find(in);
            REQUIRE(it != remaining.end()); // acyclic: parent seen earlier
            REQUIRE(it->second > 0);        // spendable output available
            --it->second;
        }
        // Distinct parents within one record.
        std::unordered_set<Hash256, Hash256Hasher> uniq(r.inputs.begin(), r.inputs.end());
        REQUIRE(uniq.size() == r.inputs.size());
        remaining.emplace(r.id, r.n_outputs);
    }
}

TEST_CASE("one shard: every spending record has exactly one input shard") {
    SynthConfig cfg;
    cfg.count = 2000;
    cfg.shard_count = 1;
    cfg.rng_seed = 10;
    auto recs = synth_generate(cfg);
    for (const auto& r : recs) {
        if (r.inputs.empty()) continue;
        std::unordered_set<ShardId> shards;
        for (const auto& in : r.inputs) shards.insert(shard_of(in, cfg.shard_count));
        CHECK(shards.size() == 1);
    }
}

TEST_CASE("fixed seed gives a bit-identical stream") {
    SynthConfig cfg;
    cfg.count = 5000;
    cfg.shard_count = 16;
    cfg.rng_seed = 11;
    auto a = synth_generate(cfg);
    auto b = synth_generate(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);

    std::ostringstream sa, sb;
    write_dataset(sa, a);
    write_dataset(sb, b);
    CHECK(sa.str() == sb.str());
}
