#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bigint.hpp"

namespace mlab {

enum class FactorStatus { Complete, Partial };

inline const char* to_string(FactorStatus s) { return s == FactorStatus::Complete ? "Complete" : "Partial"; }

inline FactorStatus parse_status(const std::string& s) {
    if (s == "Complete") return FactorStatus::Complete;
    if (s == "Partial") return FactorStatus::Partial;
    throw std::invalid_argument("unknown factorization status: " + s);
}

template <typename Int>
struct PrimePower {
    Int prime;
    unsigned exponent = 1;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// value = cofactor * prod(prime^exponent); Complete iff cofactor == 1.
template <typename Int>
class BasicFactoredInteger {
public:
    using int_type = Int;
    using factor_type = PrimePower<Int>;

    BasicFactoredInteger() : value_(1), cofactor_(1) {}

    /// Builds a record from prime powers (any order, repeated primes merged).
    /// The cofactor is the unfactored remainder; it must not be a known prime.
    static BasicFactoredInteger from_factors(std::vector<factor_type> factors, Int cofactor = Int(1)) {
        if (cofactor < 1) throw std::invalid_argument("cofactor must be >= 1");
        std::sort(factors.begin(), factors.end(),
                  [](const factor_type& a, const factor_type& b) { return a.prime < b.prime; });
        std::vector<factor_type> merged;
        for (auto& f : factors) {
            if (f.exponent == 0) continue;
            if (f.prime < 2) throw std::invalid_argument("factor below 2");
            if (!merged.empty() && merged.back().prime == f.prime)
                merged.back().exponent += f.exponent;
            else
                merged.push_back(std::move(f));
        }
        BasicFactoredInteger r;
        r.factors_ = std::move(merged);
        r.cofactor_ = std::move(cofactor);
        r.value_ = r.cofactor_;
        for (const auto& f : r.factors_)
            for (unsigned e = 0; e < f.exponent; ++e) r.value_ *= f.prime;
        return r;
    }

    const Int& value() const { return value_; }
    const std::vector<factor_type>& factors() const { return factors_; }
    const Int& cofactor() const { return cofactor_; }
    FactorStatus status() const { return cofactor_ == 1 ? FactorStatus::Complete : FactorStatus::Partial; }
    bool complete() const { return cofactor_ == 1; }

    /// Recomputes the product; false if the stored value disagrees or factors are out of order.
    bool consistent() const {
        Int product = cofactor_;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].exponent == 0 || factors_[i].prime < 2) return false;
            if (i > 0 && !(factors_[i - 1].prime < factors_[i].prime)) return false;
            for (unsigned e = 0; e < factors_[i].exponent; ++e) product *= factors_[i].prime;
        }
        return cofactor_ >= 1 && product == value_;
    }

    // Mutable access for tests that need to corrupt a record.
    std::vector<factor_type>& mutable_factors() { return factors_; }

    friend bool operator==(const BasicFactoredInteger&, const BasicFactoredInteger&) = default;

private:
    Int value_;
    std::vector<factor_type> factors_;
    Int cofactor_;
};

using FactoredInteger = BasicFactoredInteger<BigInt>;
using SmallFactored = BasicFactoredInteger<std::uint64_t>;

inline void require_complete(FactorStatus s, const char* what) {
    if (s != FactorStatus::Complete)
        throw std::invalid_argument(std::string(what) + " requires a complete factorization");
}

struct FactorBudget {
    std::uint64_t trial_division_bound = 1'000'000;
    std::uint64_t rho_iteration_cap = 200'000'000;
    std::uint64_t wall_clock_cap_ms = 60'000;
    std::uint64_t rng_seed = 1;

    void validate() const {
        if (trial_division_bound == 0 || rho_iteration_cap == 0 || wall_clock_cap_ms == 0)
            throw std::invalid_argument("factor budget caps must be positive");
    }

    /// At least as large in every cap and strictly larger in one.
    bool exceeds(std::uint64_t trial_bound, std::uint64_t rho_cap) const {
        return trial_division_bound >= trial_bound && rho_iteration_cap >= rho_cap &&
               (trial_division_bound > trial_bound || rho_iteration_cap > rho_cap);
    }

    friend bool operator==(const FactorBudget&, const FactorBudget&) = default;
};

}  // namespace mlab
