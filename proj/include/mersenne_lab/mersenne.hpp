#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "bigint.hpp"
#include "cache.hpp"
#include "factor.hpp"
#include "factored_integer.hpp"
#include "primality.hpp"

namespace mlab {

/// Φ_d(2) = prod_{e | d} (2^e - 1)^μ(d/e). Every division must be exact.
inline BigInt cyclotomic_value(std::uint64_t d, const FactoredInteger& f_d) {
    require_complete(f_d.status(), "cyclotomic_value");
    if (d == 0 || f_d.value() != to_big(d)) throw std::invalid_argument("cyclotomic_value: f_d does not factor d");
    // Walk the square-free divisors s of d; e = d/s contributes with sign μ(s).
    const auto& ps = f_d.factors();
    BigInt numerator = 1, denominator = 1;
    const std::size_t subsets = std::size_t{1} << ps.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::uint64_t s = 1;
        int bits = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (mask >> i & 1) {
                s *= to_u64(ps[i].prime);
                ++bits;
            }
        }
        const BigInt term = mersenne_number(d / s);
        if (bits % 2 == 0)
            numerator *= term;
        else
            denominator *= term;
    }
    if (!mpz_divisible_p(numerator.get_mpz_t(), denominator.get_mpz_t()))
        throw std::logic_error("cyclotomic_value: inexact division for d=" + std::to_string(d));
    BigInt r;
    mpz_divexact(r.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
    return r;
}

inline BigInt cyclotomic_value(std::uint64_t d) { return cyclotomic_value(d, factor_integer(d)); }

/// Factorization of Φ_d(2) for one divisor d of n.
struct CyclotomicPart {
    std::uint64_t d = 0;
    FactoredInteger factors;
    /// The prime of d dividing Φ_d(2) (always the largest prime of d), if any.
    std::optional<BigInt> intrinsic;

    friend bool operator==(const CyclotomicPart&, const CyclotomicPart&) = default;
};

struct MersenneFactorization {
    std::uint64_t n = 0;
    std::map<std::uint64_t, CyclotomicPart> parts;
    FactoredInteger merged;
    FactorStatus status = FactorStatus::Complete;
    /// Budget the record was produced under; Partial lower bounds rely on its trial bound.
    FactorBudget budget;

    bool complete() const { return status == FactorStatus::Complete; }

    friend bool operator==(const MersenneFactorization&, const MersenneFactorization&) = default;
};

namespace detail {

inline std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (const BigInt& d : divisors(factor_integer(n))) out.push_back(to_u64(d));
    return out;
}

inline std::optional<BigInt> detect_intrinsic(std::uint64_t d, const FactoredInteger& part) {
    if (d <= 2) return std::nullopt;
    for (const auto& pp : part.factors()) {
        BigInt residue = pp.prime % to_big(d);
        if (residue != 1) return pp.prime;
    }
    return std::nullopt;
}

// Trial division over the only primes that can divide Φ_d(2): the largest
// prime of d, and p ≡ 1 (mod d) (mod 2d for odd d, where 2 is also a
// quadratic residue so p ≡ ±1 (mod 8)). Then generic splitting.
inline CyclotomicPart factor_part(std::uint64_t d, const BigInt& value, const FactorBudget& budget,
                                  Factorizer::Clock::time_point deadline) {
    Factorizer f(budget, deadline);
    BigInt r = value;
    const FactoredInteger fd = factor_integer(d);
    if (d > 2 && !fd.factors().empty()) {
        const unsigned long q = to_u64(fd.factors().back().prime);
        unsigned e = 0;
        while (mpz_divisible_ui_p(r.get_mpz_t(), q)) {
            mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), q);
            ++e;
        }
        if (e > 0) f.add_prime(BigInt(q), e);
    }
    const bool odd = d % 2 == 1;
    const std::uint64_t step = odd ? 2 * d : d;
    const std::uint64_t bound = budget.trial_division_bound;
    for (std::uint64_t p = step + 1; r > 1 && p <= bound && p > step; p += step) {
        if (odd && d > 2 && p % 8 != 1 && p % 8 != 7) continue;
        if (!mpz_divisible_ui_p(r.get_mpz_t(), p)) {
            if (BigInt(to_big(p) * p) > r) break;
            continue;
        }
        // A composite candidate cannot divide here: its smaller prime factors
        // are candidates too and were already removed.
        if (!is_prime(p)) throw std::logic_error("cyclotomic trial division hit composite candidate");
        unsigned e = 0;
        while (mpz_divisible_ui_p(r.get_mpz_t(), p)) {
            mpz_divexact_ui(r.get_mpz_t(), r.get_mpz_t(), p);
            ++e;
        }
        f.add_prime(to_big(p), e);
    }
    f.split(r);
    CyclotomicPart part{d, f.finish(), std::nullopt};
    part.intrinsic = detect_intrinsic(d, part.factors);
    return part;
}

// Distributes known primes over the cyclotomic parts of 2^n - 1.
inline MersenneFactorization assemble(std::uint64_t n, std::map<std::uint64_t, CyclotomicPart> parts,
                                      const FactorBudget& budget) {
    MersenneFactorization mf;
    mf.n = n;
    mf.budget = budget;
    std::vector<PrimePower<BigInt>> all;
    BigInt cofactor = 1;
    bool complete = true;
    for (const auto& [d, part] : parts) {
        for (const auto& pp : part.factors.factors()) all.push_back(pp);
        cofactor *= part.factors.cofactor();
        complete = complete && part.factors.complete();
    }
    mf.parts = std::move(parts);
    mf.merged = FactoredInteger::from_factors(std::move(all), cofactor);
    mf.status = complete ? FactorStatus::Complete : FactorStatus::Partial;
    if (mf.merged.value() != mersenne_number(n))
        throw std::logic_error("factor_mersenne: product check failed for n=" + std::to_string(n));
    return mf;
}

}  // namespace detail

/// Rebuilds a factorization from known primes of 2^n - 1 (e.g. a cache record).
inline MersenneFactorization mersenne_from_primes(std::uint64_t n, const std::vector<BigInt>& primes,
                                                  const FactorBudget& budget) {
    std::map<std::uint64_t, CyclotomicPart> parts;
    for (std::uint64_t d : detail::divisors_of(n)) {
        BigInt r = cyclotomic_value(d);
        std::vector<PrimePower<BigInt>> found;
        for (const BigInt& p : primes) {
            unsigned e = 0;
            while (r > 1 && mpz_divisible_p(r.get_mpz_t(), p.get_mpz_t())) {
                mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t());
                ++e;
            }
            if (e > 0) found.push_back({p, e});
        }
        CyclotomicPart part{d, FactoredInteger::from_factors(std::move(found), r), std::nullopt};
        part.intrinsic = detail::detect_intrinsic(d, part.factors);
        parts.emplace(d, std::move(part));
    }
    return detail::assemble(n, std::move(parts), budget);
}

inline FactorCacheRecord to_cache_record(const MersenneFactorization& mf) {
    FactorCacheRecord rec;
    rec.n = mf.n;
    for (const auto& pp : mf.merged.factors()) rec.factors.emplace_back(to_decimal(pp.prime), pp.exponent);
    rec.cofactor = to_decimal(mf.merged.cofactor());
    rec.status = mf.status;
    rec.trial_bound = mf.budget.trial_division_bound;
    rec.rho_cap = mf.budget.rho_iteration_cap;
    rec.timestamp = static_cast<std::int64_t>(std::time(nullptr));
    return rec;
}

inline MersenneFactorization from_cache_record(const FactorCacheRecord& rec, const FactorBudget& budget) {
    std::vector<BigInt> primes;
    for (const auto& [p, e] : rec.factors) primes.push_back(from_decimal(p));
    FactorBudget used = budget;
    used.trial_division_bound = rec.trial_bound;
    used.rho_iteration_cap = rec.rho_cap;
    MersenneFactorization mf = mersenne_from_primes(rec.n, primes, used);
    if (mf.status != rec.status) throw std::logic_error("cache record status disagrees with its factors");
    return mf;
}

/// Factors 2^n - 1 part by part over its cyclotomic decomposition. With a
/// cache, a Complete record is reused as is; a Partial one is reused unless
/// `budget` strictly exceeds the budget it was produced with.
inline MersenneFactorization factor_mersenne(std::uint64_t n, const FactorBudget& budget = {},
                                             FactorCache* cache = nullptr) {
    if (n == 0) throw std::invalid_argument("factor_mersenne: n must be >= 1");
    budget.validate();
    if (cache) {
        if (auto rec = cache->get(n)) {
            if (rec->status == FactorStatus::Complete || !budget.exceeds(rec->trial_bound, rec->rho_cap))
                return from_cache_record(*rec, budget);
        }
    }
    const auto deadline =
        detail::Factorizer::Clock::now() + std::chrono::milliseconds(budget.wall_clock_cap_ms);
    std::map<std::uint64_t, CyclotomicPart> parts;
    for (std::uint64_t d : detail::divisors_of(n))
        parts.emplace(d, detail::factor_part(d, cyclotomic_value(d), budget, deadline));
    MersenneFactorization mf = detail::assemble(n, std::move(parts), budget);
    if (cache) cache->upsert(to_cache_record(mf));
    return mf;
}

/// Product, multiset-union, primality and provenance checks on a record.
inline bool verify_product(const MersenneFactorization& mf) {
    try {
        if (mf.n == 0) return false;
        const BigInt target = mersenne_number(mf.n);
        if (!mf.merged.consistent() || mf.merged.value() != target) return false;

        const std::vector<std::uint64_t> ds = detail::divisors_of(mf.n);
        if (mf.parts.size() != ds.size()) return false;
        std::map<BigInt, unsigned> union_of_parts;
        BigInt product = 1, cofactors = 1;
        bool all_complete = true;
        for (std::uint64_t d : ds) {
            auto it = mf.parts.find(d);
            if (it == mf.parts.end()) return false;
            const CyclotomicPart& part = it->second;
            if (part.d != d || !part.factors.consistent()) return false;
            if (part.factors.value() != cyclotomic_value(d)) return false;
            product *= part.factors.value();
            cofactors *= part.factors.cofactor();
            all_complete = all_complete && part.factors.complete();
            const BigInt dd = to_big(d);
            std::optional<BigInt> largest_prime_of_d;
            if (d > 1) largest_prime_of_d = largest_prime_factor(factor_integer(d));
            for (const auto& pp : part.factors.factors()) {
                if (!is_prime(pp.prime)) return false;
                union_of_parts[pp.prime] += pp.exponent;
                const bool one_mod_d = BigInt(pp.prime % dd) == (d == 1 ? 0 : 1);
                const bool intrinsic = largest_prime_of_d && pp.prime == *largest_prime_of_d;
                if (!one_mod_d && !intrinsic) return false;
                if (intrinsic && !(part.intrinsic && *part.intrinsic == pp.prime) && d > 2) return false;
            }
        }
        if (product != target) return false;
        if (cofactors != mf.merged.cofactor()) return false;
        if ((mf.status == FactorStatus::Complete) != all_complete) return false;
        if (union_of_parts.size() != mf.merged.factors().size()) return false;
        for (const auto& pp : mf.merged.factors()) {
            auto it = union_of_parts.find(pp.prime);
            if (it == union_of_parts.end() || it->second != pp.exponent) return false;
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

struct LargestPrimeBound {
    BigInt lower_bound;
    std::optional<BigInt> exact;
};

/// P(2^n - 1), or a lower bound when the record is Partial: every prime of an
/// unfactored cofactor exceeds the trial bound it was produced with.
inline LargestPrimeBound largest_prime_factor_mersenne(const MersenneFactorization& mf) {
    if (mf.n < 2) throw std::invalid_argument("largest_prime_factor_mersenne: P(1) is undefined");
    if (mf.complete()) {
        BigInt p = largest_prime_factor(mf.merged);
        return {p, p};
    }
    BigInt lower = to_big(mf.budget.trial_division_bound);
    if (!mf.merged.factors().empty() && mf.merged.factors().back().prime > lower)
        lower = mf.merged.factors().back().prime;
    return {lower, std::nullopt};
}

/// D(n) = {d : dn+1 is a prime factor of 2^n - 1}, and D+(n) = max D(n).
struct MultiplierSet {
    std::uint64_t n = 0;
    std::vector<BigInt> multipliers;
    std::optional<BigInt> d_plus;
};

inline MultiplierSet divisor_multiplier_set(const MersenneFactorization& mf) {
    require_complete(mf.status, "divisor_multiplier_set");
    MultiplierSet out;
    out.n = mf.n;
    const BigInt n = to_big(mf.n);
    for (const auto& pp : mf.merged.factors()) {
        const BigInt p_minus_1 = pp.prime - 1;
        if (mpz_divisible_p(p_minus_1.get_mpz_t(), n.get_mpz_t())) out.multipliers.push_back(p_minus_1 / n);
    }
    // Primes are ascending, so multipliers are too.
    if (!out.multipliers.empty()) out.d_plus = out.multipliers.back();
    return out;
}

/// #{p | 2^n - 1 : p ≡ 1 (mod n)}, primes counted once.
inline std::size_t count_primes_one_mod_n(const MersenneFactorization& mf) {
    return divisor_multiplier_set(mf).multipliers.size();
}

/// Smallest prime p | 2^n - 1 with ord_p(2) = n. Since p | 2^n - 1 the order
/// divides n, so it equals n iff 2^(n/q) ≢ 1 (mod p) for every prime q | n.
inline std::optional<BigInt> primitive_divisor(const MersenneFactorization& mf) {
    require_complete(mf.status, "primitive_divisor");
    if (mf.n < 2) throw std::invalid_argument("primitive_divisor: n must be >= 2");
    const FactoredInteger fn = factor_integer(mf.n);
    for (const auto& pp : mf.merged.factors()) {
        bool primitive = true;
        for (const auto& q : fn.factors()) {
            if (pow_mod(BigInt(2), to_big(mf.n) / q.prime, pp.prime) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return pp.prime;
    }
    return std::nullopt;
}

}  // namespace mlab
