// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <floodshard/tee.hpp>

#include "test_util.hpp"

#include <chrono>
#include <random>

using namespace floodshard;
using namespace floodshard::tee;

namespace {

struct Fixture {
    TeePlatform platform;
    EnclaveInstance enclave{platform, 16};
    ProgDescriptor prog;

    Fixture() {
        enclave.install(prog);
        // A spread of known outputs: shard = low nibble of the txid.
        std::mt19937_64 rng(1);
        std::vector<std::pair<Outpoint, ShardId>> created;
        for (int i = 0; i < 256; ++i) {
            Outpoint op{testutil::random_hash(rng), 0};
            created.push_back({op, shard_of(op.txid, 16)});
        }
        enclave.update_state({}, {created, {}, {}});
    }

    Transaction tx_spending(const std::vector<Outpoint>& inputs, std::mt19937_64& rng) {
        Transaction tx;
        tx.inputs = inputs;
        tx.outputs = {{testutil::random_address(rng), 100}};
        return tx;
    }

    std::vector<uint8_t> encrypt(const Transaction& tx) {
        return crypto::hybrid_encrypt(enclave.public_key().enc_pk, serialize(tx));
    }
};

Outpoint known_outpoint_in_shard(ShardId shard, const EnclaveState& st) {
    for (const auto& [op, s] : st.utxo_location)
        if (s == shard) return op;
    throw std::runtime_error("no outpoint in wanted shard");
}

} // namespace

TEST_CASE("install is idempotent; resume before install returns bottom") {
    TeePlatform platform;
    EnclaveInstance enclave(platform, 16);
    std::mt19937_64 rng(2);
    Transaction tx;
    tx.outputs = {{testutil::random_address(rng), 1}};
    auto inp = crypto::hybrid_encrypt(platform.public_key().enc_pk, serialize(tx));
    CHECK_FALSE(enclave.resume(inp).has_value()); // not installed yet

    ProgDescriptor prog;
    enclave.install(prog);
    REQUIRE(enclave.installed());
    ProgDescriptor other;
    other.version = 99;
    enclave.install(other); // second install is a no-op
    CHECK(*enclave.installed_prog() == prog.id());
}

TEST_CASE("distinct program descriptors have distinct identities") {
    ProgDescriptor a;
    ProgDescriptor b;
    b.version = 2;
    ProgDescriptor c;
    c.shard_count = 32;
    CHECK(a.id() != b.id());
    CHECK(a.id() != c.id());
    CHECK(b.id() != c.id());
}

TEST_CASE("resume returns a verifiable attestation bound to the transaction") {
    Fixture fx;
    std::mt19937_64 rng(3);
    Outpoint in = known_outpoint_in_shard(7, fx.enclave.state());
    Transaction tx = fx.tx_spending({in}, rng);

    auto att = fx.enclave.resume(fx.encrypt(tx));
    REQUIRE(att.has_value());
    CHECK(att->status == PlacementStatus::Ok);
    CHECK(att->s_out == 7); // single input shard wins
    CHECK(att->st == fx.enclave.state().state_height);
    CHECK(att->h_tx == compute_txid(tx));
    CHECK(att->prog == fx.prog.id());
    CHECK(verify_attestation(fx.enclave.public_key().sign_pk, *att));
}

TEST_CASE("any bit flip in the attested response fails verification") {
    Fixture fx;
    std::mt19937_64 rng(4);
    Outpoint in = known_outpoint_in_shard(3, fx.enclave.state());
    Transaction tx = fx.tx_spending({in}, rng);
    auto att = fx.enclave.resume(fx.encrypt(tx));
    REQUIRE(att);
    auto bytes = att->to_bytes();

    int false_accepts = 0;
    for (int i = 0; i < 1000; ++i) {
        auto mutated = bytes;
        size_t bit = rng() % (mutated.size() * 8);
        mutated[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        auto parsed = AttestedPlacement::from_bytes(mutated);
        if (!parsed) continue; // unparseable counts as rejected
        if (verify_attestation(fx.enclave.public_key().sign_pk, *parsed)) ++false_accepts;
    }
    CHECK(false_accepts == 0);
}

TEST_CASE("a different plaintext transaction yields a mismatched h_tx") {
    Fixture fx;
    std::mt19937_64 rng(5);
    Outpoint in = known_outpoint_in_shard(2, fx.enclave.state());
    Transaction real = fx.tx_spending({in}, rng);
    Transaction fake = fx.tx_spending({in}, rng);

    // Host substitutes another transaction before encryption; the
    // attested hash then pins the substitution at the client.
    auto att = fx.enclave.resume(fx.encrypt(fake));
    REQUIRE(att);
    CHECK(att->h_tx != compute_txid(real));
    CHECK(att->h_tx == compute_txid(fake));
}

TEST_CASE("undecryptable input returns bottom") {
    Fixture fx;
    std::vector<uint8_t> garbage(96, 0xab);
    CHECK_FALSE(fx.enclave.resume(garbage).has_value());

    // Encrypted to a different enclave's key.
    TeePlatform other;
    std::mt19937_64 rng(6);
    Transaction tx = fx.tx_spending({}, rng);
    auto inp = crypto::hybrid_encrypt(other.public_key().enc_pk, serialize(tx));
    CHECK_FALSE(fx.enclave.resume(inp).has_value());
}

TEST_CASE("unresolvable inputs are signalled in the attested output") {
    Fixture fx;
    std::mt19937_64 rng(7);
    Transaction tx = fx.tx_spending({{testutil::random_hash(rng), 5}}, rng);
    auto att = fx.enclave.resume(fx.encrypt(tx));
    REQUIRE(att);
    CHECK(att->status == PlacementStatus::UnresolvableInput);
    // Still signed: the host cannot forge an "ok" version.
    CHECK(verify_attestation(fx.enclave.public_key().sign_pk, *att));
}

TEST_CASE("update_state accepts extensions and rejects replays") {
    Fixture fx;
    uint64_t v0 = fx.enclave.state().version;
    fx.enclave.update_state({{0, 1}, {1, 1}}, {});
    CHECK(fx.enclave.state().shard_heights[0] == 1);
    CHECK(fx.enclave.state().state_height == 1);
    CHECK(fx.enclave.state().version == v0 + 1);

    fx.enclave.update_state({{0, 2}}, {});
    CHECK(fx.enclave.state().state_height == 2);

    CHECK_THROWS_AS(fx.enclave.update_state({{0, 2}}, {}), RollbackError); // replay
    CHECK_THROWS_AS(fx.enclave.update_state({{0, 4}}, {}), RollbackError); // gap
    CHECK_THROWS_AS(fx.enclave.update_state({{99, 1}}, {}), ConfigError);
}

TEST_CASE("sealed state: tampered bytes fail, stale versions are rolled back") {
    Fixture fx;
    fx.enclave.update_state({{0, 1}}, {});
    auto blob_v1 = fx.enclave.seal_state();
    fx.enclave.update_state({{0, 2}}, {});
    auto blob_v2 = fx.enclave.seal_state();

    // Tamper: flip one ciphertext byte.
    auto tampered = blob_v2;
    tampered[tampered.size() / 2] ^= 1;
    EnclaveInstance fresh(fx.platform, 16);
    CHECK_THROWS_AS(fresh.load_sealed_state(tampered), crypto::CryptoError);

    // Rollback: the older snapshot is authentic but outdated.
    CHECK_THROWS_AS(fresh.load_sealed_state(blob_v1), RollbackError);

    // The latest snapshot loads.
    fresh.load_sealed_state(blob_v2);
    CHECK(fresh.state().shard_heights[0] == 2);
}

TEST_CASE("statelessness: restart plus unseal replays the last request byte-identically") {
    TeePlatform platform;
    ProgDescriptor prog;
    std::mt19937_64 rng(8);

    std::vector<uint8_t> blob;
    std::vector<uint8_t> first_output;
    Outpoint in;
    Transaction tx;
    std::vector<uint8_t> inp_c;
    {
        EnclaveInstance enclave(platform, 16);
        enclave.install(prog);
        std::vector<std::pair<Outpoint, ShardId>> created;
        for (int i = 0; i < 64; ++i) {
            Outpoint op{testutil::random_hash(rng), 0};
            created.push_back({op, shard_of(op.txid, 16)});
        }
        enclave.update_state({{0, 1}}, {created, {}, {}});
        blob = enclave.seal_state();

        in = created[17].first;
        tx.inputs = {in};
        tx.outputs = {{testutil::random_address(rng), 1}};
        inp_c = crypto::hybrid_encrypt(enclave.public_key().enc_pk, serialize(tx));
        auto att = enclave.resume(inp_c);
        REQUIRE(att);
        first_output = att->to_bytes();
        // Enclave destroyed here: the host killed it.
    }

    EnclaveInstance revived(platform, 16);
    revived.install(prog);
    revived.load_sealed_state(blob);
    auto att = revived.resume(inp_c);
    REQUIRE(att);
    CHECK(att->to_bytes() == first_output);
}

TEST_CASE("txsharding: all inputs in one shard map there") {
    Fixture fx;
    std::mt19937_64 rng(9);
    const auto& st = fx.enclave.state();
    Outpoint a = known_outpoint_in_shard(3, st);
    Transaction tx = fx.tx_spending({a}, rng);
    auto [status, s] = txsharding(tx, st);
    CHECK(status == PlacementStatus::Ok);
    CHECK(s == 3);
}

TEST_CASE("placement is invariant under hash-only mutations") {
    Fixture fx;
    std::mt19937_64 rng(10);
    const auto& st = fx.enclave.state();
    Outpoint a = known_outpoint_in_shard(5, st);
    Outpoint b = known_outpoint_in_shard(11, st);

    Transaction tx = fx.tx_spending({a, b}, rng);
    auto [st0, base] = txsharding(tx, st);
    REQUIRE(st0 == PlacementStatus::Ok);

    Hash256 h0 = compute_txid(tx);
    int digest_changes = 0;
    for (int i = 0; i < 10000; ++i) {
        Transaction mut = tx;
        // Regrind the output side: addresses, values, nonce. tx.in is
        // untouched.
        mut.outputs[0].address = testutil::random_address(rng);
        mut.outputs[0].value = static_cast<int64_t>(rng() % 100000);
        mut.nonce_bytes.assign(8, 0);
        for (auto& bb : mut.nonce_bytes) bb = static_cast<uint8_t>(rng());
        if (compute_txid(mut) != h0) ++digest_changes;
        auto [s_mut, shard_mut] = txsharding(mut, st);
        REQUIRE(s_mut == PlacementStatus::Ok);
        REQUIRE(shard_mut == base);
    }
    CHECK(digest_changes == 10000); // the grind really moved the hash
}

TEST_CASE("zero-input stream stays balanced when the monitor refreshes loads") {
    const uint32_t n = 16;
    EnclaveState st;
    st.shard_heights.assign(n, 0);
    st.shard_loads.assign(n, 0);

    std::mt19937_64 rng(11);
    std::vector<uint64_t> assigned(n, 0);
    const uint64_t total = 100000, refresh_every = 100;
    Transaction tx;
    tx.outputs = {{testutil::random_address(rng), 1}};
    for (uint64_t i = 0; i < total; ++i) {
        auto [status, s] = txsharding(tx, st);
        REQUIRE(status == PlacementStatus::Ok);
        ++assigned[s];
        if ((i + 1) % refresh_every == 0)
            st.shard_loads.assign(assigned.begin(), assigned.end());
    }
    uint64_t lo = *std::min_element(assigned.begin(), assigned.end());
    uint64_t hi = *std::max_element(assigned.begin(), assigned.end());
    CHECK(static_cast<double>(hi) / lo <= 1.05);
}

TEST_CASE("no signature produced outside resume verifies") {
    Fixture fx;
    std::mt19937_64 rng(12);
    Outpoint in = known_outpoint_in_shard(1, fx.enclave.state());
    Transaction tx = fx.tx_spending({in}, rng);

    AttestedPlacement forged;
    forged.prog = fx.prog.id();
    forged.s_out = 0;
    forged.st = fx.enclave.state().state_height;
    forged.h_tx = compute_txid(tx);
    for (int i = 0; i < 200; ++i) {
        for (auto& byte : forged.sigma) byte = static_cast<uint8_t>(rng());
        REQUIRE_FALSE(verify_attestation(fx.enclave.public_key().sign_pk, forged));
    }
    // A signature from a different (attacker-held) key does not verify
    // under the enclave public key either.
    auto attacker = crypto::SigKeyPair::generate();
    forged.sigma = crypto::sign(attacker.secret_key, forged.signed_payload());
    CHECK_FALSE(verify_attestation(fx.enclave.public_key().sign_pk, forged));
    CHECK(verify_attestation(attacker.public_key, forged)); // sanity: right key would
}

TEST_CASE("resume stays under the latency budget with a compact payload") {
    Fixture fx;
    std::mt19937_64 rng(13);
    Outpoint in = known_outpoint_in_shard(9, fx.enclave.state());
    Transaction tx = fx.tx_spending({in}, rng);
    auto inp = fx.encrypt(tx);

    auto t0 = std::chrono::steady_clock::now();
    const int rounds = 50;
    for (int i = 0; i < rounds; ++i) {
        auto att = fx.enclave.resume(inp);
        REQUIRE(att);
        REQUIRE(att->to_bytes().size() <= 1024);
    }
    double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() /
        rounds;
    CHECK(ms < 50.0);
}
