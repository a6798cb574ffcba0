// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include <mersenne_lab/cli.hpp>
#include <mersenne_lab/mersenne_lab.hpp>

using namespace mlab;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

std::filesystem::path g_dir;

std::filesystem::path cache_path() { return g_dir / "acceptance_cache.jsonl"; }

std::string fmt(double v) { return cli::fmt_double(v); }

Outcome factorization_soundness() {
    const auto start = std::chrono::steady_clock::now();
    FactorCache cache(cache_path());
    std::vector<std::uint64_t> incomplete, unverified, mismatched;
    for (std::uint64_t n = 1; n <= 120; ++n) {
        const MersenneFactorization mf = factor_mersenne(n, {}, &cache);
        if (!mf.complete()) incomplete.push_back(n);
        if (!verify_product(mf)) unverified.push_back(n);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (std::uint64_t n = 1; n <= 64; ++n)
        if (factor_mersenne(n, {}, &cache).merged != factor_integer(mersenne_number(n))) mismatched.push_back(n);
    std::ostringstream d;
    d << "n<=120 in " << fmt(secs) << " s; incomplete=" << incomplete.size() << " unverified=" << unverified.size()
      << " direct-factoring mismatches (n<=64)=" << mismatched.size();
    return {incomplete.empty() && unverified.empty() && mismatched.empty() && secs <= 120.0, d.str()};
}

Outcome schinzel_bound() {
    FactorCache cache(cache_path());
    const SchinzelReport r = schinzel_check(13, 120, &cache);
    std::ostringstream d;
    d << "checked " << r.checked << "; violations=" << r.violations.size() << " unverified=" << r.unverified.size();
    return {r.violations.empty() && r.unverified.empty() && r.checked == 108, d.str()};
}

Outcome primitive_divisors() {
    FactorCache cache(cache_path());
    std::vector<std::uint64_t> empty_d, no_primitive;
    for (std::uint64_t n = 2; n <= 120; ++n) {
        const MersenneFactorization mf = factor_mersenne(n, {}, &cache);
        if (n >= 7 && divisor_multiplier_set(mf).multipliers.empty()) empty_d.push_back(n);
        if (!primitive_divisor(mf)) no_primitive.push_back(n);
    }
    std::ostringstream d;
    d << "empty D(n) for n>=7: " << empty_d.size() << "; no primitive divisor at {";
    for (std::size_t i = 0; i < no_primitive.size(); ++i) d << (i ? "," : "") << no_primitive[i];
    d << "}";
    return {empty_d.empty() && no_primitive == std::vector<std::uint64_t>{6}, d.str()};
}

Outcome lemma3_equivalence() {
    const std::uint64_t x = 100000;
    const SmallestPrimeFactorSieve sieve(x);
    std::uint64_t mismatches = 0, checks = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        const SmallFactored f = sieve.factor(n);
        const SmallRatio d0 = delta0(f);
        for (std::uint64_t z : {2, 3, 4, 5, 8, 16, 100}) {
            ++checks;
            if (dense_chain_test(f, z) != (d0 <= SmallRatio(z))) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(checks) + " (n, z) pairs, " + std::to_string(mismatches) + " mismatches"};
}

Outcome generator_equivalence() {
    const std::uint64_t x = 100000;
    std::ostringstream d;
    bool ok = true;
    for (std::uint64_t z : {2, 5, 30}) {
        const auto gen = generate_dense(x, z);
        const std::set<std::uint64_t> got(gen.begin(), gen.end());
        const auto flags = brute_force_dense_flags(x, z);
        std::set<std::uint64_t> expect;
        for (std::uint64_t n = 1; n <= x; ++n)
            if (flags[n]) expect.insert(n);
        const bool same = got == expect && got.size() == gen.size();
        ok = ok && same;
        d << "z=" << z << ": " << gen.size() << (same ? " equal" : " DIFFER") << "; ";
    }
    std::string text = d.str();
    return {ok, text.substr(0, text.size() - 2)};
}

Outcome saias_band() {
    std::ostringstream d;
    bool ok = true;
    for (std::uint64_t z : {2, 10, 100}) {
        double lo = INFINITY, hi = -INFINITY;
        d << "z=" << z << " [";
        for (std::uint64_t x : {1000u, 10000u, 100000u, 1000000u}) {
            const double r = saias_ratio(x, z);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            d << (x == 1000 ? "" : " ") << std::fixed;
            d.precision(3);
            d << r;
        }
        d << "] spread " << hi / lo << "; ";
        ok = ok && lo >= 0.3 && hi <= 3.5 && hi / lo < 3.0;
    }
    std::string text = d.str();
    return {ok, text.substr(0, text.size() - 2)};
}

Outcome series_sums() {
    FactorCache cache(cache_path());
    const PartialSumReport s0 = partial_sum_sigma(0.0, 13, &cache);
    bool ok = std::abs(s0.sum_high - 1.0523) <= 5e-4 && s0.excluded.empty();
    const PartialSumReport a = partial_sum_sigma(0.4, 120, &cache);
    const PartialSumReport b = partial_sum_sigma(0.4, 120, nullptr);
    bool all_exact = a.excluded.empty();
    std::uint64_t over = 0;
    for (const TermRecord& t : a.terms) {
        all_exact = all_exact && t.status == TermStatus::Exact;
        if (t.n >= 13 && t.term_high > std::pow(std::log(static_cast<double>(t.n)), 0.4) / (2.0 * t.n + 1)) ++over;
    }
    const double drift = std::abs(a.sum_high - b.sum_high);
    ok = ok && all_exact && over == 0 && drift <= 1e-12;
    std::ostringstream d;
    d << "alpha=0 to 13: " << fmt(s0.sum_high) << "; alpha=0.4 to 120: " << fmt(a.sum_high)
      << (all_exact ? " all Exact" : " NOT all Exact") << ", rerun drift " << fmt(drift) << ", terms over bound "
      << over;
    return {ok, d.str()};
}

Outcome divisor_gap_ordering() {
    const SmallestPrimeFactorSieve sieve(100000);
    std::uint64_t bad = 0;
    for (std::uint64_t n = 2; n <= 100000; ++n) {
        const SmallFactored f = sieve.factor(n);
        if (!(delta0(f) <= delta(f))) ++bad;
    }
    return {bad == 0, "n in [2, 1e5]: " + std::to_string(bad) + " with delta0 > delta"};
}

Outcome tau_sum() {
    const TauSum big = tau_sum_check(1000000);
    const TauSum small = tau_sum_check(100);
    const double diff = static_cast<double>(big.sum) - big.reference;
    std::ostringstream d;
    d << "sum(1e6)=" << big.sum << " reference " << fmt(big.reference) << " diff " << fmt(diff) << "; sum(100)="
      << small.sum;
    return {std::abs(diff) < 1e4 && small.sum == 482, d.str()};
}

Outcome phi_minimal_order() {
    const PhiMinimum m = phi_min_order(100, 1000000);
    std::ostringstream d;
    d << "minimum " << fmt(m.value) << " at n=" << m.argmin << " (required >= 0.3 at n=510510)";
    return {m.value >= 0.3 && m.argmin == 510510, d.str()};
}

Outcome smooth_counts() {
    const std::uint64_t a = smooth_count(10, 2), b = smooth_count(16, 3), c = smooth_count(10, 10),
                        e = smooth_count(100, 100);
    std::ostringstream d;
    d << "psi(10,2)=" << a << " psi(16,3)=" << b << " psi(10,10)=" << c << " psi(100,100)=" << e;
    return {a == 4 && b == 9 && c == 10 && e == 100, d.str()};
}

Outcome cache_and_cli() {
    const std::string cache = (g_dir / "cli_cache.jsonl").string();
    auto sigma = [&](const std::string& path) {
        std::ostringstream out, err;
        const int code = cli::run_command({"sigma", "--alpha", "0.4", "--max-n", "120", "--cache", path}, out, err);
        return std::make_pair(code, out.str());
    };
    const auto cold = sigma(cache);  // populates the cache
    const auto warm1 = sigma(cache);
    const auto warm2 = sigma(cache);
    bool ok = cold.first == 0 && warm1.first == 0 && warm2.first == 0;
    const bool identical = warm1.second == warm2.second && cold.second == warm1.second;

    // Round trip: every stored record reloads and rebuilds the same factorization.
    std::size_t records = 0, faithful = 0;
    {
        FactorCache reopened(cache);
        for (const FactorCacheRecord& rec : reopened.records()) {
            ++records;
            const MersenneFactorization mf = from_cache_record(rec, {});
            if (verify_product(mf) && to_cache_record(mf).factors == rec.factors && mf.status == rec.status &&
                mf.merged == factor_mersenne(rec.n, {}, &reopened).merged)
                ++faithful;
        }
    }
    ok = ok && identical && records == 119 && faithful == records;
    std::ostringstream d;
    d << "sigma output " << cold.second.size() << " bytes, repeated runs "
      << (identical ? "byte-identical" : "DIFFER") << "; cache round trip " << faithful << "/" << records;
    return {ok, d.str()};
}

}  // namespace

int main() {
    g_dir = std::filesystem::temp_directory_path() / ("mlab_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(g_dir);
    std::filesystem::create_directories(g_dir);

    const std::vector<Criterion> criteria = {
        {1, "factorization soundness", factorization_soundness},
        {2, "largest prime factor >= 2n+1 for 13 <= n <= 120", schinzel_bound},
        {3, "primitive divisors and D(n)", primitive_divisors},
        {4, "prime-chain test equals delta0 <= z", lemma3_equivalence},
        {5, "generator equals sieve census", generator_equivalence},
        {6, "G(x,z) ratio band", saias_band},
        {7, "series partial sums", series_sums},
        {8, "delta0 <= delta", divisor_gap_ordering},
        {9, "divisor-count sum estimate", tau_sum},
        {10, "phi minimal order", phi_minimal_order},
        {11, "smooth counts", smooth_counts},
        {12, "cache round trip and CLI determinism", cache_and_cli},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    std::filesystem::remove_all(g_dir);
    return failures == 0 ? 0 : 1;
}
