// Copyright (c) 2026 The Floodshard developers
// Distributed under the MIT software license, see the accompanying
// file LICENSE or http://www.opensource.org/licenses/mit-license.php.

#include <floodshard/crypto.hpp>

#include <floodshard/hash.hpp>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <cstring>
#include <memory>

namespace floodshard {
namespace crypto {

namespace {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
struct CtxDeleter {
    void operator()(EVP_PKEY_CTX* p) const { EVP_PKEY_CTX_free(p); }
};
struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* p) const { EVP_MD_CTX_free(p); }
};
struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* p) const { EVP_CIPHER_CTX_free(p); }
};

using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;
using CipherCtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

constexpr size_t kNonceLen = 12;
constexpr size_t kTagLen = 16;

std::pair<Key32, Key32> generate_raw_keypair(int type) {
    std::unique_ptr<EVP_PKEY_CTX, CtxDeleter> ctx(EVP_PKEY_CTX_new_id(type, nullptr));
    if (!ctx || EVP_PKEY_keygen_init(ctx.get()) <= 0) throw CryptoError("keygen init failed");
    EVP_PKEY* raw = nullptr;
    if (EVP_PKEY_keygen(ctx.get(), &raw) <= 0) throw CryptoError("keygen failed");
    PkeyPtr key(raw);

    Key32 pub{}, sec{};
    size_t len = pub.size();
    if (EVP_PKEY_get_raw_public_key(key.get(), pub.data(), &len) <= 0 || len != 32)
        throw CryptoError("raw public key extraction failed");
    len = sec.size();
    if (EVP_PKEY_get_raw_private_key(key.get(), sec.data(), &len) <= 0 || len != 32)
        throw CryptoError("raw private key extraction failed");
    return {pub, sec};
}

PkeyPtr load_private(int type, const Key32& sk) {
    PkeyPtr key(EVP_PKEY_new_raw_private_key(type, nullptr, sk.data(), sk.size()));
    if (!key) throw CryptoError("bad private key");
    return key;
}

PkeyPtr load_public(int type, const Key32& pk) {
    PkeyPtr key(EVP_PKEY_new_raw_public_key(type, nullptr, pk.data(), pk.size()));
    if (!key) throw CryptoError("bad public key");
    return key;
}

Key32 x25519_shared_key(EVP_PKEY* self, EVP_PKEY* peer, const Key32& eph_pk,
                        const Key32& recip_pk) {
    std::unique_ptr<EVP_PKEY_CTX, CtxDeleter> ctx(EVP_PKEY_CTX_new(self, nullptr));
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) <= 0 ||
        EVP_PKEY_derive_set_peer(ctx.get(), peer) <= 0)
        throw CryptoError("x25519 derive init failed");
    Key32 shared{};
    size_t len = shared.size();
    if (EVP_PKEY_derive(ctx.get(), shared.data(), &len) <= 0 || len != 32)
        throw CryptoError("x25519 derive failed");

    // KDF: SHA-256 over shared secret and both public halves.
    std::vector<uint8_t> ikm;
    ikm.insert(ikm.end(), shared.begin(), shared.end());
    ikm.insert(ikm.end(), eph_pk.begin(), eph_pk.end());
    ikm.insert(ikm.end(), recip_pk.begin(), recip_pk.end());
    Hash256 h = sha256(ikm);
    Key32 out{};
    std::memcpy(out.data(), h.bytes.data(), 32);
    return out;
}

} // namespace

void random_bytes(std::span<uint8_t> out) {
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw CryptoError("RAND_bytes failed");
}

SigKeyPair SigKeyPair::generate() {
    auto [pub, sec] = generate_raw_keypair(EVP_PKEY_ED25519);
    return SigKeyPair{pub, sec};
}

Signature sign(const Key32& secret_key, std::span<const uint8_t> msg) {
    PkeyPtr key = load_private(EVP_PKEY_ED25519, secret_key);
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) <= 0)
        throw CryptoError("sign init failed");
    Signature sig{};
    size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, msg.data(), msg.size()) <= 0 || len != 64)
        throw CryptoError("sign failed");
    return sig;
}

bool verify(const Key32& public_key, std::span<const uint8_t> msg, const Signature& sig) {
    PkeyPtr key;
    try {
        key = load_public(EVP_PKEY_ED25519, public_key);
    } catch (const CryptoError&) {
        return false;
    }
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, key.get()) <= 0)
        return false;
    return EVP_DigestVerify(ctx.get(), sig.data(), sig.size(), msg.data(), msg.size()) == 1;
}

BoxKeyPair BoxKeyPair::generate() {
    auto [pub, sec] = generate_raw_keypair(EVP_PKEY_X25519);
    return BoxKeyPair{pub, sec};
}

std::vector<uint8_t> hybrid_encrypt(const Key32& recipient_pk,
                                    std::span<const uint8_t> plaintext) {
    auto eph = BoxKeyPair::generate();
    PkeyPtr self = load_private(EVP_PKEY_X25519, eph.secret_key);
    PkeyPtr peer = load_public(EVP_PKEY_X25519, recipient_pk);
    Key32 key = x25519_shared_key(self.get(), peer.get(), eph.public_key, recipient_pk);

    std::vector<uint8_t> box(eph.public_key.begin(), eph.public_key.end());
    std::vector<uint8_t> sealed = aead_seal(key, plaintext, {});
    box.insert(box.end(), sealed.begin(), sealed.end());
    return box;
}

std::optional<std::vector<uint8_t>> hybrid_decrypt(const BoxKeyPair& recipient,
                                                   std::span<const uint8_t> box) {
    if (box.size() < 32 + kNonceLen + kTagLen) return std::nullopt;
    Key32 eph_pk{};
    std::memcpy(eph_pk.data(), box.data(), 32);
    Key32 key;
    try {
        PkeyPtr self = load_private(EVP_PKEY_X25519, recipient.secret_key);
        PkeyPtr peer = load_public(EVP_PKEY_X25519, eph_pk);
        key = x25519_shared_key(self.get(), peer.get(), eph_pk, recipient.public_key);
    } catch (const CryptoError&) {
        return std::nullopt;
    }
    return aead_open(key, box.subspan(32), {});
}

std::vector<uint8_t> aead_seal(const Key32& key, std::span<const uint8_t> plaintext,
                               std::span<const uint8_t> aad) {
    std::vector<uint8_t> out(kNonceLen + plaintext.size() + kTagLen);
    random_bytes(std::span<uint8_t>(out.data(), kNonceLen));

    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1)
        throw CryptoError("gcm init failed");
    int len = 0;
    if (!aad.empty() &&
        EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
        throw CryptoError("gcm aad failed");
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), out.data() + kNonceLen, &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1)
        throw CryptoError("gcm encrypt failed");
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceLen + plaintext.size(), &fin) != 1)
        throw CryptoError("gcm final failed");
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagLen,
                            out.data() + kNonceLen + plaintext.size()) != 1)
        throw CryptoError("gcm tag failed");
    return out;
}

std::optional<std::vector<uint8_t>> aead_open(const Key32& key, std::span<const uint8_t> sealed,
                                              std::span<const uint8_t> aad) {
    if (sealed.size() < kNonceLen + kTagLen) return std::nullopt;
    const size_t ct_len = sealed.size() - kNonceLen - kTagLen;

    CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx ||
        EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), sealed.data()) != 1)
        return std::nullopt;
    int len = 0;
    if (!aad.empty() &&
        EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
        return std::nullopt;
    std::vector<uint8_t> plain(ct_len);
    if (ct_len > 0 &&
        EVP_DecryptUpdate(ctx.get(), plain.data(), &len, sealed.data() + kNonceLen,
                          static_cast<int>(ct_len)) != 1)
        return std::nullopt;
    std::array<uint8_t, kTagLen> tag;
    std::memcpy(tag.data(), sealed.data() + kNonceLen + ct_len, kTagLen);
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagLen, tag.data()) != 1)
        return std::nullopt;
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + ct_len, &fin) != 1) return std::nullopt;
    return plain;
}

} // namespace crypto
} // namespace floodshard
