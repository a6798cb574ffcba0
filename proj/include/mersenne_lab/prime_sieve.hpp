#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "factored_integer.hpp"

namespace mlab {

/// Primes in ascending order, extended on demand by a segmented sieve of
/// Eratosthenes. Not thread-safe; give each consumer its own table.
class PrimeTable {
public:
    static constexpr std::uint64_t kSegment = 1u << 16;

    PrimeTable() = default;
    explicit PrimeTable(std::uint64_t limit) { ensure(limit); }

    /// Makes sure every prime <= limit is present.
    void ensure(std::uint64_t limit) {
        if (limit <= sieved_) return;
        std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit)));
        while (root * root > limit) --root;
        while ((root + 1) * (root + 1) <= limit) ++root;
        if (root > sieved_) ensure(root);

        // The segment is sized with a little headroom so growth is geometric.
        std::uint64_t target = std::max(limit, sieved_ + sieved_ / 2);
        std::vector<char> composite;
        for (std::uint64_t lo = sieved_ + 1; lo <= target; lo += kSegment) {
            std::uint64_t hi = std::min(target, lo + kSegment - 1);
            composite.assign(hi - lo + 1, 0);
            for (std::uint64_t p : primes_) {
                if (p * p > hi) break;
                std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
                for (std::uint64_t m = start; m <= hi; m += p) composite[m - lo] = 1;
            }
            for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v)
                if (!composite[v - lo]) primes_.push_back(v);
            sieved_ = hi;
        }
    }

    std::uint64_t sieved_limit() const { return sieved_; }
    const std::vector<std::uint64_t>& primes() const { return primes_; }

    /// Primes <= limit as a view over the table.
    std::vector<std::uint64_t>::const_iterator end_of(std::uint64_t limit) {
        ensure(limit);
        return std::upper_bound(primes_.begin(), primes_.end(), limit);
    }

private:
    std::vector<std::uint64_t> primes_;
    std::uint64_t sieved_ = 1;
};

/// spf[n] = smallest prime factor of n for 2 <= n <= limit (spf[0] = spf[1] = 0).
class SmallestPrimeFactorSieve {
public:
    explicit SmallestPrimeFactorSieve(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
        if (limit > 0xffffffffULL) throw std::invalid_argument("sieve limit too large");
        for (std::uint64_t i = 2; i <= limit; ++i) {
            if (spf_[i] != 0) continue;
            spf_[i] = static_cast<std::uint32_t>(i);
            if (i * i > limit) continue;
            for (std::uint64_t j = i * i; j <= limit; j += i)
                if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
        }
    }

    std::uint64_t limit() const { return limit_; }
    std::uint32_t smallest(std::uint64_t n) const { return spf_.at(n); }
    bool is_prime(std::uint64_t n) const { return n >= 2 && spf_.at(n) == n; }

    SmallFactored factor(std::uint64_t n) const {
        if (n == 0 || n > limit_) throw std::out_of_range("value outside sieve range");
        std::vector<PrimePower<std::uint64_t>> out;
        while (n > 1) {
            std::uint64_t p = spf_[n];
            unsigned e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.push_back({p, e});
        }
        return SmallFactored::from_factors(std::move(out));
    }

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
};

}  // namespace mlab
