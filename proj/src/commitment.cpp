#include "trustnet/commitment.hpp"

#include <openssl/evp.h>

#include <memory>

#include "trustnet/errors.hpp"

namespace trustnet {

namespace {

const EVP_MD* md_for(HashAlg alg)
{
    switch (alg) {
    case HashAlg::sha256:
        return EVP_sha256();
    case HashAlg::sha3_256:
        return EVP_sha3_256();
    }
    throw PreconditionError("unknown hash algorithm");
}

} // namespace

std::string to_string(HashAlg alg)
{
    return alg == HashAlg::sha256 ? "sha256" : "sha3-256";
}

HashAlg hash_alg_from_string(const std::string& name)
{
    if (name == "sha256") {
        return HashAlg::sha256;
    }
    if (name == "sha3-256" || name == "sha3_256") {
        return HashAlg::sha3_256;
    }
    throw ConfigError("unknown hash algorithm: " + name);
}

Commitment commit(std::uint32_t value, std::span<const std::uint8_t> nonce, HashAlg alg)
{
    if (nonce.size() < kMinNonceLen) {
        throw PreconditionError("commitment nonce shorter than 16 bytes");
    }
    const std::array<std::uint8_t, 4> be{
        static_cast<std::uint8_t>(value >> 24),
        static_cast<std::uint8_t>(value >> 16),
        static_cast<std::uint8_t>(value >> 8),
        static_cast<std::uint8_t>(value),
    };

    Commitment c;
    c.alg = alg;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                EVP_MD_CTX_free);
    unsigned int len = 0;
    if (ctx == nullptr || EVP_DigestInit_ex(ctx.get(), md_for(alg), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), be.data(), be.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), nonce.data(), nonce.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), c.digest.data(), &len) != 1 || len != c.digest.size()) {
        throw NumericalFailure("digest computation failed");
    }
    return c;
}

bool verify(const Commitment& c, const Opening& opening)
{
    if (opening.nonce.size() < kMinNonceLen) {
        return false;
    }
    return commit(opening.value, opening.nonce, c.alg) == c;
}

std::array<std::uint8_t, kNonceLen> random_nonce(Rng& rng)
{
    std::array<std::uint8_t, kNonceLen> nonce{};
    rng.fill(nonce);
    return nonce;
}

std::string hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

} // namespace trustnet
