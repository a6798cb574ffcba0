#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bigint.hpp"
#include "factored_integer.hpp"
#include "primality.hpp"
#include "prime_sieve.hpp"

namespace mlab {

namespace detail {

// Returns (base, k) with r = base^k and k >= 2 maximal, or nothing.
inline std::optional<std::pair<BigInt, unsigned>> perfect_power(const BigInt& r) {
    if (r < 4 || !mpz_perfect_power_p(r.get_mpz_t())) return std::nullopt;
    for (std::size_t k = bit_length(r); k >= 2; --k) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), r.get_mpz_t(), k) != 0) return std::make_pair(root, static_cast<unsigned>(k));
    }
    return std::nullopt;
}

/// Accumulates prime factors of one number under a FactorBudget. Composite
/// pieces that the budget cannot split end up in the cofactor.
class Factorizer {
public:
    using Clock = std::chrono::steady_clock;

    explicit Factorizer(const FactorBudget& budget)
        : Factorizer(budget, Clock::now() + std::chrono::milliseconds(budget.wall_clock_cap_ms)) {}

    Factorizer(const FactorBudget& budget, Clock::time_point deadline) : budget_(budget), deadline_(deadline) {
        budget_.validate();
    }

    const FactorBudget& budget() const { return budget_; }
    std::uint64_t rho_iterations() const { return rho_iterations_; }

    void add_prime(const BigInt& p, unsigned multiplicity = 1) { primes_[p] += multiplicity; }

    /// Divides every prime <= trial_division_bound out of r.
    void trial_divide(BigInt& r) {
        if (r == 1) return;
        PrimeTable& table = shared_table();
        auto end = table.end_of(budget_.trial_division_bound);
        for (auto it = table.primes().begin(); it != end; ++it) {
            const unsigned long p = *it;
            if (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
                unsigned e = 0;
                while (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
                    mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), p);
                    ++e;
                }
                add_prime(BigInt(p), e);
            }
            if (r == 1) return;
            // Everything below p is gone, so r < p^2 means r is prime.
            if (BigInt(BigInt(p) * p) > r) {
                add_prime(r);
                r = 1;
                return;
            }
        }
    }

    /// Perfect-power check, primality, then Brent's cycle-finding on r,
    /// recursing into both halves of each split.
    void split(const BigInt& r, unsigned multiplicity = 1) {
        if (r == 1) return;
        if (is_prime(r, budget_.rng_seed)) {
            add_prime(r, multiplicity);
            return;
        }
        if (auto pp = perfect_power(r)) {
            split(pp->first, multiplicity * pp->second);
            return;
        }
        if (auto d = find_factor(r)) {
            BigInt other = r / *d;
            split(*d, multiplicity);
            split(other, multiplicity);
            return;
        }
        for (unsigned i = 0; i < multiplicity; ++i) unsplit_.push_back(r);
    }

    FactoredInteger finish() {
        BigInt cofactor = 1;
        for (const BigInt& c : unsplit_) cofactor *= c;
        // A prime found elsewhere may still divide an unsplit composite.
        for (auto& [p, e] : primes_) {
            while (cofactor != 1 && mpz_divisible_p(cofactor.get_mpz_t(), p.get_mpz_t())) {
                mpz_divexact(cofactor.get_mpz_t(), cofactor.get_mpz_t(), p.get_mpz_t());
                ++e;
            }
        }
        std::vector<PrimePower<BigInt>> factors;
        factors.reserve(primes_.size());
        for (const auto& [p, e] : primes_) factors.push_back({p, e});
        return FactoredInteger::from_factors(std::move(factors), cofactor);
    }

    bool out_of_time() const { return Clock::now() >= deadline_; }

private:
    static PrimeTable& shared_table() {
        thread_local PrimeTable table;
        return table;
    }

    // Brent's variant of Pollard rho with x <- x^2 + c, c = seed, seed+1, ...
    std::optional<BigInt> find_factor(const BigInt& n) {
        if (mpz_even_p(n.get_mpz_t())) return BigInt(2);
        if (rho_iterations_ >= budget_.rho_iteration_cap || out_of_time()) return std::nullopt;
        constexpr std::uint64_t kBatch = 128;
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            const unsigned long c = static_cast<unsigned long>(budget_.rng_seed + attempt);
            if (c == 0) continue;  // x -> x^2 never mixes
            BigInt y = 2, x, ys, q = 1, g = 1, diff;
            std::uint64_t r = 1;
            auto step = [&](BigInt& v) {
                mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
                mpz_add_ui(v.get_mpz_t(), v.get_mpz_t(), c);
                mpz_tdiv_r(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
            };
            while (g == 1) {
                x = y;
                for (std::uint64_t i = 0; i < r; ++i) step(y);
                std::uint64_t k = 0;
                while (k < r && g == 1) {
                    ys = y;
                    const std::uint64_t len = std::min(kBatch, r - k);
                    for (std::uint64_t i = 0; i < len; ++i) {
                        step(y);
                        mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                        mpz_mul(q.get_mpz_t(), q.get_mpz_t(), diff.get_mpz_t());
                        mpz_tdiv_r(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                    }
                    rho_iterations_ += len;
                    mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                    k += len;
                    if (rho_iterations_ >= budget_.rho_iteration_cap) return std::nullopt;
                    if (out_of_time()) return std::nullopt;
                }
                r *= 2;
            }
            if (g == n) {
                // The batch overshot; replay it one step at a time.
                do {
                    step(ys);
                    mpz_sub(diff.get_mpz_t(), x.get_mpz_t(), ys.get_mpz_t());
                    mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
                } while (g == 1);
            }
            if (g != n && g != 0) return g;
        }
        return std::nullopt;
    }

    FactorBudget budget_;
    Clock::time_point deadline_;
    std::uint64_t rho_iterations_ = 0;
    std::map<BigInt, unsigned> primes_;
    std::vector<BigInt> unsplit_;
};

}  // namespace detail

/// Generic factoring: perfect-power check, trial division to the budget's
/// bound, then Brent rho. Running out of budget yields a Partial record.
inline FactoredInteger factor_integer(const BigInt& m, const FactorBudget& budget = {}) {
    if (m < 1) throw std::invalid_argument("factor_integer: m must be >= 1");
    detail::Factorizer f(budget);
    BigInt r = m;
    unsigned multiplicity = 1;
    if (auto pp = detail::perfect_power(r)) {
        r = pp->first;
        multiplicity = pp->second;
    }
    f.trial_divide(r);
    f.split(r);
    FactoredInteger base = f.finish();
    if (multiplicity == 1) return base;
    std::vector<PrimePower<BigInt>> raised;
    for (auto pp : base.factors()) {
        pp.exponent *= multiplicity;
        raised.push_back(std::move(pp));
    }
    BigInt cof;
    mpz_pow_ui(cof.get_mpz_t(), base.cofactor().get_mpz_t(), multiplicity);
    return FactoredInteger::from_factors(std::move(raised), cof);
}

inline FactoredInteger factor_integer(std::uint64_t m, const FactorBudget& budget = {}) {
    return factor_integer(to_big(m), budget);
}

/// Trial division for small inputs (n up to ~1e12).
inline SmallFactored factor_small(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("factor_small: n must be >= 1");
    std::vector<PrimePower<std::uint64_t>> out;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return SmallFactored::from_factors(std::move(out));
}

inline FactoredInteger to_big(const SmallFactored& f) {
    std::vector<PrimePower<BigInt>> out;
    for (const auto& pp : f.factors()) out.push_back({to_big(pp.prime), pp.exponent});
    return FactoredInteger::from_factors(std::move(out), to_big(f.cofactor()));
}

}  // namespace mlab
