// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#ifndef FLOODSHARD_TESTS_TEST_UTIL_HPP
#define FLOODSHARD_TESTS_TEST_UTIL_HPP

#include <floodshard/tx.hpp>
#include <floodshard/utxo.hpp>

#include <random>

namespace testutil {

inline floodshard::Hash256 random_hash(std::mt19937_64& rng) {
    floodshard::Hash256 h;
    for (size_t i = 0; i < 32; i += 8) {
        uint64_t w = rng();
        for (size_t j = 0; j < 8; ++j) h.bytes[i + j] = static_cast<uint8_t>(w >> (8 * j));
    }
    return h;
}

inline floodshard::Address random_address(std::mt19937_64& rng) {
    floodshard::Address a;
    for (auto& b : a) b = static_cast<uint8_t>(rng());
    return a;
}

inline floodshard::Transaction random_tx(std::mt19937_64& rng, size_t max_in = 4,
                                         size_t max_out = 4) {
    floodshard::Transaction tx;
    size_t n_in = rng() % (max_in + 1);
    size_t n_out = 1 + rng() % max_out;
    for (size_t i = 0; i < n_in; ++i)
        tx.inputs.push_back({random_hash(rng), static_cast<uint32_t>(rng() % 16)});
    for (size_t i = 0; i < n_out; ++i)
        tx.outputs.push_back({random_address(rng), static_cast<int64_t>(rng() % 1000000)});
    size_t n_nonce = rng() % 16;
    for (size_t i = 0; i < n_nonce; ++i) tx.nonce_bytes.push_back(static_cast<uint8_t>(rng()));
    tx.size_bytes = 100 + static_cast<uint32_t>(rng() % 900);
    return tx;
}

// Attacker wallet with `addresses` funded addresses, one outpoint each.
inline floodshard::AddressBook make_wallet(std::mt19937_64& rng, size_t addresses,
                                           floodshard::Satoshi value_each = 100000) {
    floodshard::AddressBook book;
    for (size_t i = 0; i < addresses; ++i) {
        auto addr = random_address(rng);
        book.fund(addr, {random_hash(rng), 0}, value_each);
    }
    return book;
}

// Upper 0.99 quantiles of the chi-square distribution, keyed by degrees
// of freedom; a statistic below the bound is "uniform at p > 0.01".
inline double chi2_crit_99(uint32_t df) {
    switch (df) {
        case 1: return 6.635;
        case 3: return 11.345;
        case 7: return 18.475;
        case 11: return 24.725;
        case 15: return 30.578;
        case 31: return 52.191;
        case 63: return 92.010;
        default: throw std::invalid_argument("no tabulated chi-square bound for df");
    }
}

} // namespace testutil

#endif // FLOODSHARD_TESTS_TEST_UTIL_HPP
