#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "bigint.hpp"
#include "cache.hpp"
#include "density.hpp"
#include "factor.hpp"
#include "mersenne.hpp"
#include "prime_sieve.hpp"

namespace mlab {

/// Neumaier's compensated summation; order of add() calls fixes the result.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

namespace detail {

// loglog t, defined only for t > e.
inline std::optional<double> loglog(double t) {
    if (!(t > M_E)) return std::nullopt;
    return std::log(std::log(t));
}

inline void for_each_mersenne(std::uint64_t n_lo, std::uint64_t n_hi, FactorCache* cache,
                              const FactorBudget& budget,
                              const std::function<void(std::uint64_t, const MersenneFactorization&)>& fn) {
    for (std::uint64_t n = n_lo; n <= n_hi; ++n) fn(n, factor_mersenne(n, budget, cache));
}

}  // namespace detail

enum class TermStatus { Exact, Bounded };

inline const char* to_string(TermStatus s) { return s == TermStatus::Exact ? "Exact" : "Bounded"; }

/// One summand (log n)^α / P(2^n - 1), as an interval when P is only bounded.
struct TermRecord {
    std::uint64_t n = 0;
    double alpha = 0.0;
    std::optional<BigInt> p_exact;
    BigInt p_lower;
    double term_low = 0.0;
    double term_high = 0.0;
    TermStatus status = TermStatus::Exact;
};

struct ExcludedTerm {
    std::uint64_t n = 0;
    std::string reason;
};

struct PartialSumReport {
    double alpha = 0.0;
    std::uint64_t n_max = 0;
    double sum_low = 0.0;
    double sum_high = 0.0;
    std::vector<TermRecord> terms;
    std::vector<ExcludedTerm> excluded;

    /// α < 1/2, where the series is known to converge.
    bool theorem_regime() const { return alpha < 0.5; }
};

inline TermRecord make_term(std::uint64_t n, double alpha, const MersenneFactorization& mf) {
    TermRecord t;
    t.n = n;
    t.alpha = alpha;
    const LargestPrimeBound b = largest_prime_factor_mersenne(mf);
    t.p_lower = b.lower_bound;
    t.p_exact = b.exact;
    const double numerator = std::pow(std::log(static_cast<double>(n)), alpha);
    const double denom = b.lower_bound < 1 ? 1.0 : to_double(b.lower_bound);
    t.term_high = numerator / denom;
    if (b.exact) {
        t.status = TermStatus::Exact;
        t.term_low = t.term_high;
    } else {
        t.status = TermStatus::Bounded;
        t.term_low = 0.0;
    }
    return t;
}

/// Partial sum of σ_α over 2 <= n <= n_max, ascending n with compensated
/// accumulation. Bounded terms contribute [0, (log n)^α / p_lower].
inline PartialSumReport partial_sum_sigma(double alpha, std::uint64_t n_max, FactorCache* cache,
                                          const FactorBudget& budget = {}) {
    if (n_max < 2) throw std::invalid_argument("partial_sum_sigma: n_max must be >= 2");
    PartialSumReport report;
    report.alpha = alpha;
    report.n_max = n_max;
    CompensatedSum low, high;
    detail::for_each_mersenne(2, n_max, cache, budget, [&](std::uint64_t n, const MersenneFactorization& mf) {
        TermRecord t = make_term(n, alpha, mf);
        if (t.status == TermStatus::Bounded)
            report.excluded.push_back({n, "2^n-1 not completely factored; cofactor " +
                                              to_decimal(mf.merged.cofactor()) + " left after budget"});
        low.add(t.term_low);
        high.add(t.term_high);
        report.terms.push_back(std::move(t));
    });
    report.sum_low = low.value();
    report.sum_high = high.value();
    return report;
}

/// Membership of n in the exceptional sets E and F and the D+(n) bound.
struct ClassificationFlags {
    std::uint64_t n = 0;
    std::uint64_t tau = 0;
    bool in_E = false;
    std::optional<bool> in_F;
    std::optional<BigInt> d_plus;
    std::optional<bool> d_plus_bound_holds;
};

inline double e_threshold(std::uint64_t n) { return std::pow(std::log(static_cast<double>(n)), 3.0); }

/// n (log n)^(1+α) (loglog n)^2, or nothing below the loglog guard.
inline std::optional<double> f_threshold(std::uint64_t n, double alpha) {
    const double x = static_cast<double>(n);
    auto ll = detail::loglog(x);
    if (!ll) return std::nullopt;
    return x * std::pow(std::log(x), 1.0 + alpha) * *ll * *ll;
}

/// (log n)^(1+α) (loglog n)^2
inline std::optional<double> d_plus_threshold(std::uint64_t n, double alpha) {
    const double x = static_cast<double>(n);
    auto ll = detail::loglog(x);
    if (!ll) return std::nullopt;
    return std::pow(std::log(x), 1.0 + alpha) * *ll * *ll;
}

inline ClassificationFlags classify_n(std::uint64_t n, double alpha, const MersenneFactorization& mf) {
    if (n < 2) throw std::invalid_argument("classify_n: n must be >= 2");
    if (mf.n != n) throw std::invalid_argument("classify_n: factorization is for a different n");
    ClassificationFlags c;
    c.n = n;
    c.tau = tau(factor_small(n));
    c.in_E = static_cast<double>(c.tau) >= e_threshold(n);
    if (!mf.complete()) return c;
    const BigInt p = largest_prime_factor(mf.merged);
    if (auto thr = f_threshold(n, alpha)) c.in_F = to_double(p) > *thr;
    c.d_plus = divisor_multiplier_set(mf).d_plus;
    if (n >= 16 && !c.in_E && c.in_F == false && c.d_plus) {
        c.d_plus_bound_holds = to_double(*c.d_plus) <= *d_plus_threshold(n, alpha);
    }
    return c;
}

/// #{p | 2^n-1 : p ≡ 1 (mod n)} * loglog P(2^n-1) / log(2 + Δ(n)/τ(n)).
inline double stewart_lemma_ratio(const MersenneFactorization& mf) {
    require_complete(mf.status, "stewart_lemma_ratio");
    if (mf.n <= 6) throw std::invalid_argument("stewart_lemma_ratio: n must be > 6");
    const BigInt p = largest_prime_factor(mf.merged);
    auto ll = detail::loglog(to_double(p));
    if (!ll) throw std::invalid_argument("stewart_lemma_ratio: P(2^n-1) must exceed e");
    const SmallFactored fn = factor_small(mf.n);
    const double gap = delta(fn).to_double();
    const double denom = std::log(2.0 + gap / static_cast<double>(tau(fn)));
    return static_cast<double>(count_primes_one_mod_n(mf)) * *ll / denom;
}

struct SchinzelViolation {
    std::uint64_t n = 0;
    BigInt p;
};

struct SchinzelReport {
    std::uint64_t n_lo = 0, n_hi = 0;
    std::uint64_t checked = 0;
    std::vector<SchinzelViolation> violations;
    std::vector<std::uint64_t> unverified;  // Partial and not certified by the lower bound
};

/// Checks P(2^n-1) >= 2n+1 over [n_lo, n_hi]. The bound is stated for
/// n >= 13; `permissive` allows probing below that.
inline SchinzelReport schinzel_check(std::uint64_t n_lo, std::uint64_t n_hi, FactorCache* cache,
                                     const FactorBudget& budget = {}, bool permissive = false) {
    if (n_lo > n_hi) throw std::invalid_argument("schinzel_check: empty range");
    if (n_lo < (permissive ? 2 : 13)) throw std::invalid_argument("schinzel_check: range must start at n >= 13");
    SchinzelReport r;
    r.n_lo = n_lo;
    r.n_hi = n_hi;
    detail::for_each_mersenne(n_lo, n_hi, cache, budget, [&](std::uint64_t n, const MersenneFactorization& mf) {
        const LargestPrimeBound b = largest_prime_factor_mersenne(mf);
        const BigInt bound = to_big(2 * n + 1);
        ++r.checked;
        if (b.exact) {
            if (*b.exact < bound) r.violations.push_back({n, *b.exact});
        } else if (b.lower_bound < bound) {
            r.unverified.push_back(n);
        }
    });
    return r;
}

struct StewartAException {
    std::uint64_t n = 0;
    BigInt p;
    double threshold = 0.0;
};

struct StewartAReport {
    std::uint64_t n_max = 0;
    double epsilon = 0.0;
    std::uint64_t checked = 0;
    std::vector<StewartAException> exceptions;
    std::vector<std::uint64_t> skipped;  // Partial factorizations
    double density = 0.0;                // #exceptions / n_max
};

/// n (log n)^2 / (f(n) loglog n) with f(n) = (log n)^ε.
inline std::optional<double> stewart_a_threshold(std::uint64_t n, double epsilon) {
    const double x = static_cast<double>(n);
    auto ll = detail::loglog(x);
    if (!ll) return std::nullopt;
    const double lg = std::log(x);
    return x * lg * lg / (std::pow(lg, epsilon) * *ll);
}

inline StewartAReport stewart_A_exceptions(std::uint64_t n_max, double epsilon, FactorCache* cache,
                                           const FactorBudget& budget = {}) {
    if (n_max < 16) throw std::invalid_argument("stewart_A_exceptions: n_max must be >= 16");
    StewartAReport r;
    r.n_max = n_max;
    r.epsilon = epsilon;
    // n = 2 sits below the loglog guard.
    detail::for_each_mersenne(3, n_max, cache, budget, [&](std::uint64_t n, const MersenneFactorization& mf) {
        if (!mf.complete()) {
            r.skipped.push_back(n);
            return;
        }
        ++r.checked;
        const BigInt p = largest_prime_factor(mf.merged);
        const double thr = *stewart_a_threshold(n, epsilon);
        if (!(to_double(p) > thr)) r.exceptions.push_back({n, p, thr});
    });
    r.density = static_cast<double>(r.exceptions.size()) / static_cast<double>(n_max);
    return r;
}

struct StewartBEntry {
    std::uint64_t n = 0;
    double ratio = 0.0;
};

struct StewartBReport {
    std::uint64_t n_max = 0;
    double kappa = 0.0;
    double big_c = 0.0;
    std::vector<std::uint64_t> qualifying;
    std::optional<StewartBEntry> minimum;  // empirical C(κ)
    std::vector<StewartBEntry> below_c;
    std::vector<std::uint64_t> skipped;
};

/// P(2^n-1) 2^ω(n) / (φ(n) log n)
inline double stewart_b_ratio(std::uint64_t n, const BigInt& p) {
    const SmallFactored fn = factor_small(n);
    return to_double(p) * std::ldexp(1.0, static_cast<int>(omega(fn))) /
           (static_cast<double>(phi(fn)) * std::log(static_cast<double>(n)));
}

/// Minimum of P(2^n-1) 2^ω(n) / (φ(n) log n) over n <= n_max with
/// ω(n) < κ loglog n. Entries below big_c are listed.
inline StewartBReport stewart_B_check(std::uint64_t n_max, double kappa, double big_c, FactorCache* cache,
                                      const FactorBudget& budget = {}) {
    if (n_max < 16) throw std::invalid_argument("stewart_B_check: n_max must be >= 16");
    if (!(kappa < 1.0 / std::log(2.0))) throw std::invalid_argument("stewart_B_check: kappa must be < 1/log 2");
    StewartBReport r;
    r.n_max = n_max;
    r.kappa = kappa;
    r.big_c = big_c;
    for (std::uint64_t n = 3; n <= n_max; ++n) {
        const double ll = *detail::loglog(static_cast<double>(n));
        if (!(static_cast<double>(omega(factor_small(n))) < kappa * ll)) continue;
        r.qualifying.push_back(n);
        const MersenneFactorization mf = factor_mersenne(n, budget, cache);
        if (!mf.complete()) {
            r.skipped.push_back(n);
            continue;
        }
        const StewartBEntry e{n, stewart_b_ratio(n, largest_prime_factor(mf.merged))};
        if (!r.minimum || e.ratio < r.minimum->ratio) r.minimum = e;
        if (e.ratio < big_c) r.below_c.push_back(e);
    }
    return r;
}

struct TauSum {
    std::uint64_t sum = 0;
    double reference = 0.0;  // x log x + (2γ - 1) x
};

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// sum_{n<=x} τ(n) = sum_{k<=x} floor(x/k), evaluated by the hyperbola
/// identity 2 sum_{k<=√x} floor(x/k) - floor(√x)^2.
inline TauSum tau_sum_check(std::uint64_t x) {
    if (x < 1) throw std::invalid_argument("tau_sum_check: x must be >= 1");
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    std::uint64_t s = 0;
    for (std::uint64_t k = 1; k <= r; ++k) s += x / k;
    TauSum out;
    out.sum = 2 * s - r * r;
    const double xd = static_cast<double>(x);
    out.reference = xd * std::log(xd) + (2.0 * kEulerGamma - 1.0) * xd;
    return out;
}

struct PhiMinimum {
    double value = 0.0;  // φ(n) loglog n / n
    std::uint64_t argmin = 0;
};

/// Minimum of φ(n) loglog n / n over [x_lo, x_hi] from a φ sieve.
inline PhiMinimum phi_min_order(std::uint64_t x_lo, std::uint64_t x_hi) {
    if (x_lo < 3) throw std::invalid_argument("phi_min_order: x_lo must be >= 3");
    if (x_lo > x_hi) throw std::invalid_argument("phi_min_order: empty range");
    std::vector<std::uint64_t> ph(x_hi + 1);
    for (std::uint64_t i = 0; i <= x_hi; ++i) ph[i] = i;
    for (std::uint64_t p = 2; p <= x_hi; ++p) {
        if (ph[p] != p) continue;  // composite: already reduced by a smaller prime
        for (std::uint64_t m = p; m <= x_hi; m += p) ph[m] -= ph[m] / p;
    }
    PhiMinimum best{INFINITY, 0};
    for (std::uint64_t n = x_lo; n <= x_hi; ++n) {
        const double v = static_cast<double>(ph[n]) * std::log(std::log(static_cast<double>(n))) /
                         static_cast<double>(n);
        if (v < best.value) best = {v, n};
    }
    return best;
}

/// #E(x) = #{n <= x : τ(n) >= (log n)^3}, from a divisor-count sieve.
inline std::uint64_t e_set_count(std::uint64_t x) {
    std::vector<std::uint32_t> t(x + 1, 0);
    for (std::uint64_t d = 1; d <= x; ++d)
        for (std::uint64_t m = d; m <= x; m += d) ++t[m];
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n)
        if (static_cast<double>(t[n]) >= e_threshold(n)) ++count;
    return count;
}

}  // namespace mlab
