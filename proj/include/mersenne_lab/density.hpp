#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "bigint.hpp"
#include "factored_integer.hpp"
#include "prime_sieve.hpp"
#include "ratio.hpp"

namespace mlab {

namespace detail {

// Largest d[i+1]/d[i] over an ascending list; 1 for fewer than two entries.
template <typename Int>
BasicRatio<Int> max_consecutive_ratio(const std::vector<Int>& ds) {
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < ds.size(); ++i) {
        // ds[i+1]/ds[i] > ds[best+1]/ds[best]
        if (product_lt(ds[best + 1], ds[i], ds[i + 1], ds[best])) best = i;
    }
    if (ds.size() < 2) return BasicRatio<Int>(Int(1));
    return BasicRatio<Int>(ds[best + 1], ds[best]);
}

}  // namespace detail

/// Δ₀(n): the largest ratio of consecutive divisors of n; Δ₀(1) = 1.
template <typename Int>
BasicRatio<Int> delta0(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "delta0");
    return detail::max_consecutive_ratio(divisors(f));
}

/// Δ(n): the same maximum over the 2^ω(n) divisors d with n/d square-free.
template <typename Int>
BasicRatio<Int> delta(const BasicFactoredInteger<Int>& f) {
    require_complete(f.status(), "delta");
    if (f.value() < 2) throw std::invalid_argument("delta: n must be >= 2");
    std::vector<Int> ds{f.value()};
    for (const auto& pp : f.factors()) {
        const std::size_t k = ds.size();
        for (std::size_t i = 0; i < k; ++i) ds.push_back(ds[i] / pp.prime);
    }
    std::sort(ds.begin(), ds.end());
    return detail::max_consecutive_ratio(ds);
}

/// p_i <= z * prod_{j<i} p_j^e_j for every prime of n, decided exactly.
/// Equivalent to Δ₀(n) <= z; true for n = 1.
template <typename Int>
bool dense_chain_test(const BasicFactoredInteger<Int>& f, const BasicRatio<Int>& z) {
    require_complete(f.status(), "dense_chain_test");
    Int prefix = 1;
    for (const auto& pp : f.factors()) {
        // p * den(z) <= num(z) * prefix
        if (!product_le(pp.prime, z.denominator(), z.numerator(), prefix)) return false;
        for (unsigned e = 0; e < pp.exponent; ++e) prefix *= pp.prime;
    }
    return true;
}

template <typename Int>
bool dense_chain_test(const BasicFactoredInteger<Int>& f, std::uint64_t z) {
    return dense_chain_test(f, BasicRatio<Int>(Int(z)));
}

/// Visits every n <= x with Δ₀(n) <= z (1 first, then depth-first): a partial
/// product m is extended by primes p in (largest used prime, min(z*m, x/m)]
/// with every exponent keeping m*p^e <= x.
template <typename Visitor>
void for_each_dense(std::uint64_t x, std::uint64_t z, Visitor&& visit, PrimeTable& table) {
    if (x < 1) return;
    visit(std::uint64_t{1});
    auto extend = [&](auto&& self, std::uint64_t m, std::size_t first) -> void {
        const unsigned __int128 zm = static_cast<unsigned __int128>(z) * m;
        const std::uint64_t bound = std::min<unsigned __int128>(zm, x / m);
        if (bound < 2) return;
        table.ensure(bound);
        const auto& primes = table.primes();
        for (std::size_t i = first; i < primes.size() && primes[i] <= bound; ++i) {
            const std::uint64_t p = primes[i];
            std::uint64_t v = m * p;
            while (true) {
                visit(v);
                self(self, v, i + 1);
                if (v > x / p) break;
                v *= p;
            }
        }
    };
    extend(extend, 1, 0);
}

template <typename Visitor>
void for_each_dense(std::uint64_t x, std::uint64_t z, Visitor&& visit) {
    PrimeTable table;
    for_each_dense(x, z, std::forward<Visitor>(visit), table);
}

/// Members of G(x, z) = {n <= x : Δ₀(n) <= z}, in generation (DFS) order.
inline std::vector<std::uint64_t> generate_dense(std::uint64_t x, std::uint64_t z) {
    if (z < 1) throw std::invalid_argument("generate_dense: z must be >= 1");
    std::vector<std::uint64_t> out;
    for_each_dense(x, z, [&](std::uint64_t n) { out.push_back(n); });
    return out;
}

/// is_dense[n] = (Δ₀(n) <= z) for 0 < n <= x, computing Δ₀ of every n from a
/// smallest-prime-factor sieve. Slow reference for the generator.
inline std::vector<bool> brute_force_dense_flags(std::uint64_t x, std::uint64_t z) {
    const SmallestPrimeFactorSieve sieve(x);
    std::vector<bool> flags(x + 1, false);
    const SmallRatio zr(z);
    for (std::uint64_t n = 1; n <= x; ++n) flags[n] = delta0(sieve.factor(n)) <= zr;
    return flags;
}

enum class DenseMethod { Generate, BruteForce };

inline const char* to_string(DenseMethod m) { return m == DenseMethod::Generate ? "generate" : "sieve"; }

struct DenseCount {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::uint64_t count = 0;
    DenseMethod method = DenseMethod::Generate;
    double saias_ratio = 0.0;  // count * log x / (x * log z)
};

inline double saias_ratio_of(std::uint64_t count, std::uint64_t x, std::uint64_t z) {
    return static_cast<double>(count) * std::log(static_cast<double>(x)) /
           (static_cast<double>(x) * std::log(static_cast<double>(z)));
}

/// #G(x, z) by either route; both give identical counts.
inline DenseCount count_dense(std::uint64_t x, std::uint64_t z, DenseMethod method) {
    if (x < 2) throw std::invalid_argument("count_dense: x must be >= 2");
    if (z < 2) throw std::invalid_argument("count_dense: z must be >= 2");
    DenseCount out{x, z, 0, method, 0.0};
    if (method == DenseMethod::Generate) {
        for_each_dense(x, z, [&](std::uint64_t) { ++out.count; });
    } else {
        const auto flags = brute_force_dense_flags(x, z);
        out.count = static_cast<std::uint64_t>(std::count(flags.begin(), flags.end(), true));
    }
    out.saias_ratio = saias_ratio_of(out.count, x, z);
    return out;
}

/// #G(x, z) * log x / (x * log z).
inline double saias_ratio(std::uint64_t x, std::uint64_t z) {
    return count_dense(x, z, DenseMethod::Generate).saias_ratio;
}

/// Ψ(x, y) = #{n <= x : P(n) <= y}, counting n = 1.
inline std::uint64_t smooth_count(std::uint64_t x, std::uint64_t y) {
    if (x < 1 || y < 1) throw std::invalid_argument("smooth_count: x and y must be >= 1");
    const SmallestPrimeFactorSieve sieve(x);
    // largest[n] = max(spf(n), largest[n / spf(n)])
    std::vector<std::uint32_t> largest(x + 1, 1);
    std::uint64_t count = 1;
    for (std::uint64_t n = 2; n <= x; ++n) {
        const std::uint32_t p = sieve.smallest(n);
        largest[n] = std::max(p, largest[n / p]);
        if (largest[n] <= y) ++count;
    }
    return count;
}

}  // namespace mlab
