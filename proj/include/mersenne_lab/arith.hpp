#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bigint.hpp"
#include "factored_integer.hpp"
#include "primality.hpp"

namespace mlab {

// Classical arithmetic functions on a complete factorization. All of them
// reject Partial records: a missing prime would change every one of them.

template <typename Int>
std::uint64_t tau(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "tau");
    std::uint64_t t = 1;
    for (const auto& pp : f.factors()) t *= pp.exponent + 1;
    return t;
}

template <typename Int>
std::size_t omega(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "omega");
    return f.factors().size();
}

template <typename Int>
Int phi(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "phi");
    Int r = 1;
    for (const auto& pp : f.factors()) {
        r *= pp.prime - 1;
        for (unsigned e = 1; e < pp.exponent; ++e) r *= pp.prime;
    }
    return r;
}

template <typename Int>
int moebius(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "moebius");
    for (const auto& pp : f.factors())
        if (pp.exponent > 1) return 0;
    return f.factors().size() % 2 == 0 ? 1 : -1;
}

/// P(n); undefined (and rejected) for n = 1.
template <typename Int>
Int largest_prime_factor(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "largest_prime_factor");
    if (f.factors().empty()) throw std::invalid_argument("largest_prime_factor: P(1) is undefined");
    return f.factors().back().prime;
}

/// All divisors, ascending.
template <typename Int>
std::vector<Int> divisors(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "divisors");
    std::vector<Int> out{Int(1)};
    out.reserve(tau(f));
    for (const auto& pp : f.factors()) {
        const std::size_t base = out.size();
        Int power = 1;
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            power *= pp.prime;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline bool is_one_pow(std::uint64_t a, std::uint64_t t, std::uint64_t m) { return pow_mod(a, t, m) == 1 % m; }
inline bool is_one_pow(const BigInt& a, const BigInt& t, const BigInt& m) { return pow_mod(a, t, m) == BigInt(1) % m; }

}  // namespace detail

/// Least t >= 1 with a^t == 1 (mod m), found by stripping primes from m-1
/// while the congruence persists. Needs the complete factorization of m-1 and
/// a^(m-1) == 1 (mod m), which holds for every prime m.
template <typename Int>
Int multiplicative_order(const Int& a, const Int& m, const BasicFactoredInteger<Int>& m_minus_1) {
    if (m < 2) throw std::invalid_argument("multiplicative_order: modulus must be >= 2");
    if (int_gcd(Int(a % m), m) != 1) throw std::invalid_argument("multiplicative_order: a and m are not coprime");
    require_complete(m_minus_1.status(), "multiplicative_order");
    if (m_minus_1.value() != m - 1) throw std::invalid_argument("multiplicative_order: factorization is not of m-1");
    Int t = m - 1;
    if (!detail::is_one_pow(a, t, m)) throw std::invalid_argument("multiplicative_order: order does not divide m-1");
    for (const auto& pp : m_minus_1.factors()) {
        for (unsigned e = 0; e < pp.exponent; ++e) {
            Int candidate = t / pp.prime;
            if (!detail::is_one_pow(a, candidate, m)) break;
            t = candidate;
        }
    }
    return t;
}

}  // namespace mlab
