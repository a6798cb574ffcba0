#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "bigint.hpp"

namespace mlab {

inline constexpr std::uint64_t kDefaultPrimalitySeed = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// base^exponent mod modulus by square-and-multiply. modulus 1 gives 0.
inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
    if (modulus == 0) throw std::invalid_argument("pow_mod: modulus must be >= 1");
    if (modulus == 1) return 0;
    std::uint64_t result = 1;
    base %= modulus;
    while (exponent > 0) {
        if (exponent & 1) result = mul_mod(result, base, modulus);
        base = mul_mod(base, base, modulus);
        exponent >>= 1;
    }
    return result;
}

/// Big-integer variant; negative bases are reduced into [0, modulus).
inline BigInt pow_mod(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
    if (modulus < 1) throw std::invalid_argument("pow_mod: modulus must be >= 1");
    if (sgn(exponent) < 0) throw std::invalid_argument("pow_mod: exponent must be non-negative");
    BigInt r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

namespace detail {

inline constexpr std::array<std::uint32_t, 25> kSmallPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                               43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

// The first 13 prime bases (2..41) are a proven deterministic set for every n < 3.3e24.
inline constexpr std::array<std::uint32_t, 13> kDeterministicBases = {2,  3,  5,  7,  11, 13, 17,
                                                                      19, 23, 29, 31, 37, 41};

inline constexpr int kRandomRounds = 64;  // 4^-64 = 2^-128

inline bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uint64_t x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

inline bool strong_probable_prime(const BigInt& n, const BigInt& a, const BigInt& d, std::uint64_t s) {
    const BigInt n_minus_1 = n - 1;
    BigInt x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) return true;
    for (std::uint64_t i = 1; i < s; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == n_minus_1) return true;
        if (x == 1) return false;
    }
    return false;
}

}  // namespace detail

/// Deterministic Miller-Rabin; exact for every 64-bit input.
inline bool is_prime(std::uint64_t m) {
    if (m < 2) return false;
    for (std::uint32_t p : detail::kSmallPrimes) {
        if (m == p) return true;
        if (m % p == 0) return false;
    }
    for (std::uint32_t a : detail::kDeterministicBases)
        if (!detail::strong_probable_prime(m, a)) return false;
    return true;
}

/// Exact below 3.3e24; above that, the fixed bases are followed by 64 rounds
/// with witnesses drawn from a generator seeded with `seed` (error < 2^-128).
inline bool is_prime(const BigInt& m, std::uint64_t seed = kDefaultPrimalitySeed) {
    if (m < 2) return false;
    if (fits_u64(m)) return is_prime(to_u64(m));
    for (std::uint32_t p : detail::kSmallPrimes)
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) return false;

    const BigInt n_minus_1 = m - 1;
    const std::uint64_t s = mpz_scan1(n_minus_1.get_mpz_t(), 0);
    BigInt d;
    mpz_tdiv_q_2exp(d.get_mpz_t(), n_minus_1.get_mpz_t(), s);

    for (std::uint32_t a : detail::kDeterministicBases)
        if (!detail::strong_probable_prime(m, BigInt(a), d, s)) return false;

    static const BigInt kDeterministicLimit("3317044064679887385961981", 10);
    if (m < kDeterministicLimit) return true;

    // Witness a in [2, m-2], built from 64-bit draws.
    std::mt19937_64 gen(seed);
    const BigInt span = m - 3;
    const std::size_t words = bit_length(m) / 64 + 2;
    for (int round = 0; round < detail::kRandomRounds; ++round) {
        BigInt a = 0;
        for (std::size_t w = 0; w < words; ++w) {
            a <<= 64;
            a += to_big(gen());
        }
        a %= span;
        a += 2;
        if (!detail::strong_probable_prime(m, a, d, s)) return false;
    }
    return true;
}

}  // namespace mlab
