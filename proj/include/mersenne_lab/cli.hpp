#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cache.hpp"
#include "density.hpp"
#include "factor.hpp"
#include "mersenne.hpp"
#include "series.hpp"

namespace mlab::cli {

inline constexpr const char* kCacheEnv = "MERSENNE_LAB_CACHE";
inline constexpr const char* kDefaultCachePath = "mersenne_lab_cache.jsonl";

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kInternal = 3 };

using ojson = nlohmann::ordered_json;

/// Shortest text that round-trips the double.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
    os << "\r\n";
}

inline std::string opt_bool(const std::optional<bool>& b) {
    if (!b) return "";
    return *b ? "true" : "false";
}

inline ojson factors_json(const FactoredInteger& f) {
    ojson arr = ojson::array();
    for (const auto& pp : f.factors()) arr.push_back(ojson::array({to_decimal(pp.prime), pp.exponent}));
    return arr;
}

inline std::string factors_text(const std::vector<std::pair<std::string, std::uint32_t>>& fs) {
    std::string s;
    for (const auto& [p, e] : fs) s += (s.empty() ? "" : "*") + p + "^" + std::to_string(e);
    return s;
}

inline constexpr const char* kCsvColumnsHelp =
    "CSV column orders (fixed):\n"
    "  sigma:    n,status,p_exact,p_lower,term_low,term_high,sum_low,sum_high\n"
    "            (sum_* are running totals; the last row is the partial sum)\n"
    "  classify: n,tau,in_E,p_exact,in_F,d_plus,d_plus_bound_holds\n"
    "  export:   n,status,factors,cofactor,trial_bound,rho_cap,timestamp\n"
    "            (factors written as p^e*p^e...)\n"
    "Exit codes: 0 success, 1 verification found violations, 2 usage error.\n"
    "Cache path: --cache, else $MERSENNE_LAB_CACHE, else ./mersenne_lab_cache.jsonl.";

struct CommonOptions {
    FactorBudget budget;
    std::string cache_path;
    bool no_cache = false;
};

inline void add_budget_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--trial-bound", o.budget.trial_division_bound, "trial division bound")->check(CLI::PositiveNumber);
    cmd->add_option("--rho-cap", o.budget.rho_iteration_cap, "rho iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--budget-ms", o.budget.wall_clock_cap_ms, "wall-clock cap in ms")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.budget.rng_seed, "rng seed for rho and primality");
    cmd->add_option("--cache", o.cache_path, "factor cache file (JSON lines)");
    cmd->add_flag("--no-cache", o.no_cache, "do not read or write the factor cache");
}

inline std::unique_ptr<FactorCache> open_cache(const CommonOptions& o, std::ostream& err) {
    if (o.no_cache) return nullptr;
    std::string path = o.cache_path;
    if (path.empty()) {
        const char* env = std::getenv(kCacheEnv);
        path = (env && *env) ? env : kDefaultCachePath;
    }
    auto cache = cache_open(path);
    for (const auto& w : cache->warnings()) err << "warning: " << w << '\n';
    return cache;
}

namespace detail {

inline int cmd_factor(std::uint64_t n, bool parts, const CommonOptions& o, std::ostream& out, std::ostream& err) {
    auto cache = open_cache(o, err);
    const MersenneFactorization mf = factor_mersenne(n, o.budget, cache.get());
    ojson j;
    j["n"] = n;
    j["factors"] = factors_json(mf.merged);
    j["cofactor"] = to_decimal(mf.merged.cofactor());
    j["status"] = to_string(mf.status);
    if (parts) {
        ojson arr = ojson::array();
        for (const auto& [d, part] : mf.parts) {
            ojson pj;
            pj["d"] = d;
            pj["value"] = to_decimal(part.factors.value());
            pj["factors"] = factors_json(part.factors);
            pj["cofactor"] = to_decimal(part.factors.cofactor());
            pj["intrinsic"] = part.intrinsic ? ojson(to_decimal(*part.intrinsic)) : ojson(nullptr);
            arr.push_back(pj);
        }
        j["parts"] = arr;
    }
    out << j.dump() << '\n';
    return kOk;
}

inline int cmd_density(std::uint64_t n, std::ostream& out) {
    if (n < 1) throw std::invalid_argument("density: n must be >= 1");
    const SmallFactored f = factor_small(n);
    ojson j;
    j["n"] = n;
    j["delta"] = n >= 2 ? ojson(delta(f).to_string()) : ojson(nullptr);
    j["delta0"] = delta0(f).to_string();
    j["tau"] = tau(f);
    j["omega"] = omega(f);
    out << j.dump() << '\n';
    return kOk;
}

inline int cmd_gxz(std::uint64_t x, std::uint64_t z, const std::string& method, bool emit, std::ostream& out) {
    const DenseMethod m = method == "sieve" ? DenseMethod::BruteForce : DenseMethod::Generate;
    const DenseCount c = count_dense(x, z, m);
    ojson j;
    j["x"] = x;
    j["z"] = z;
    j["method"] = to_string(m);
    j["count"] = c.count;
    j["saias_ratio"] = c.saias_ratio;
    if (emit) {
        std::vector<std::uint64_t> members;
        if (m == DenseMethod::Generate) {
            members = generate_dense(x, z);
            std::sort(members.begin(), members.end());
        } else {
            const auto flags = brute_force_dense_flags(x, z);
            for (std::uint64_t k = 1; k <= x; ++k)
                if (flags[k]) members.push_back(k);
        }
        j["members"] = members;
    }
    out << j.dump() << '\n';
    return kOk;
}

inline int cmd_sigma(double alpha, std::uint64_t max_n, const std::string& format, const CommonOptions& o,
                     std::ostream& out, std::ostream& err) {
    auto cache = open_cache(o, err);
    const PartialSumReport r = partial_sum_sigma(alpha, max_n, cache.get(), o.budget);
    if (!r.theorem_regime()) err << "note: alpha >= 1/2 is outside the convergence regime\n";
    if (format == "json") {
        ojson j;
        j["alpha"] = alpha;
        j["n_max"] = max_n;
        j["sum_low"] = r.sum_low;
        j["sum_high"] = r.sum_high;
        ojson terms = ojson::array();
        for (const auto& t : r.terms) {
            ojson tj;
            tj["n"] = t.n;
            tj["status"] = to_string(t.status);
            tj["p_exact"] = t.p_exact ? ojson(to_decimal(*t.p_exact)) : ojson(nullptr);
            tj["p_lower"] = to_decimal(t.p_lower);
            tj["term_low"] = t.term_low;
            tj["term_high"] = t.term_high;
            terms.push_back(tj);
        }
        j["terms"] = terms;
        ojson ex = ojson::array();
        for (const auto& e : r.excluded) ex.push_back({{"n", e.n}, {"reason", e.reason}});
        j["excluded"] = ex;
        out << j.dump() << '\n';
        return kOk;
    }
    csv_row(out, {"n", "status", "p_exact", "p_lower", "term_low", "term_high", "sum_low", "sum_high"});
    CompensatedSum low, high;
    for (const auto& t : r.terms) {
        low.add(t.term_low);
        high.add(t.term_high);
        csv_row(out, {std::to_string(t.n), to_string(t.status), t.p_exact ? to_decimal(*t.p_exact) : "",
                      to_decimal(t.p_lower), fmt_double(t.term_low), fmt_double(t.term_high),
                      fmt_double(low.value()), fmt_double(high.value())});
    }
    return kOk;
}

inline int cmd_classify(double alpha, std::uint64_t max_n, const CommonOptions& o, std::ostream& out,
                        std::ostream& err) {
    if (max_n < 2) throw std::invalid_argument("classify: --max-n must be >= 2");
    auto cache = open_cache(o, err);
    csv_row(out, {"n", "tau", "in_E", "p_exact", "in_F", "d_plus", "d_plus_bound_holds"});
    for (std::uint64_t n = 2; n <= max_n; ++n) {
        const MersenneFactorization mf = factor_mersenne(n, o.budget, cache.get());
        const ClassificationFlags c = classify_n(n, alpha, mf);
        const auto b = largest_prime_factor_mersenne(mf);
        csv_row(out, {std::to_string(n), std::to_string(c.tau), c.in_E ? "true" : "false",
                      b.exact ? to_decimal(*b.exact) : "", opt_bool(c.in_F), c.d_plus ? to_decimal(*c.d_plus) : "",
                      opt_bool(c.d_plus_bound_holds)});
    }
    return kOk;
}

struct VerifyOptions {
    std::string suite;
    std::uint64_t max_n = 120;
    std::uint64_t min_n = 13;
    std::optional<std::uint64_t> max_x;
    std::uint64_t x_lo = 100;
    double epsilon = 0.1;
    double kappa = 1.2;
    double big_c = 0.0;
};

inline int cmd_verify(const VerifyOptions& v, const CommonOptions& o, std::ostream& out, std::ostream& err) {
    ojson report;
    report["suite"] = v.suite;
    ojson violations = ojson::array();

    if (v.suite == "schinzel") {
        auto cache = open_cache(o, err);
        const SchinzelReport r = schinzel_check(v.min_n, v.max_n, cache.get(), o.budget);
        report["n_lo"] = r.n_lo;
        report["n_hi"] = r.n_hi;
        report["checked"] = r.checked;
        for (const auto& x : r.violations) violations.push_back({{"n", x.n}, {"p", to_decimal(x.p)}});
        report["unverified"] = r.unverified;
    } else if (v.suite == "lemma3") {
        const std::uint64_t max_x = v.max_x.value_or(100000);
        const SmallestPrimeFactorSieve sieve(max_x);
        const std::uint64_t zs[] = {2, 3, 4, 5, 8, 16, 100};
        for (std::uint64_t n = 1; n <= max_x; ++n) {
            const SmallFactored f = sieve.factor(n);
            const SmallRatio d0 = delta0(f);
            for (std::uint64_t z : zs)
                if (dense_chain_test(f, z) != (d0 <= SmallRatio(z)))
                    violations.push_back({{"n", n}, {"z", z}, {"delta0", d0.to_string()}});
        }
        report["max_x"] = max_x;
        report["z"] = zs;
    } else if (v.suite == "saias") {
        const std::uint64_t max_x = v.max_x.value_or(1000000);
        ojson rows = ojson::array();
        for (std::uint64_t z : {2u, 10u, 100u}) {
            double lo = INFINITY, hi = -INFINITY;
            ojson ratios = ojson::array();
            for (std::uint64_t x = 1000; x <= max_x; x *= 10) {
                const double r = saias_ratio(x, z);
                ratios.push_back({{"x", x}, {"ratio", r}});
                lo = std::min(lo, r);
                hi = std::max(hi, r);
                if (r < 0.3 || r > 3.5) violations.push_back({{"z", z}, {"x", x}, {"ratio", r}});
            }
            if (hi / lo >= 3.0) violations.push_back({{"z", z}, {"spread", hi / lo}});
            rows.push_back({{"z", z}, {"ratios", ratios}, {"spread", hi / lo}});
        }
        report["band"] = {0.3, 3.5};
        report["rows"] = rows;
    } else if (v.suite == "primitive") {
        auto cache = open_cache(o, err);
        for (std::uint64_t n = 2; n <= v.max_n; ++n) {
            const MersenneFactorization mf = factor_mersenne(n, o.budget, cache.get());
            if (!mf.complete()) {
                violations.push_back({{"n", n}, {"reason", "incomplete factorization"}});
                continue;
            }
            if (n >= 7 && divisor_multiplier_set(mf).multipliers.empty())
                violations.push_back({{"n", n}, {"reason", "D(n) empty"}});
            const auto pd = primitive_divisor(mf);
            if (pd.has_value() == (n == 6))
                violations.push_back({{"n", n}, {"reason", pd ? "unexpected primitive divisor" : "no primitive divisor"}});
        }
        report["max_n"] = v.max_n;
    } else if (v.suite == "product") {
        auto cache = open_cache(o, err);
        for (std::uint64_t n = 1; n <= v.max_n; ++n) {
            const MersenneFactorization mf = factor_mersenne(n, o.budget, cache.get());
            if (!mf.complete()) violations.push_back({{"n", n}, {"reason", "incomplete factorization"}});
            if (!verify_product(mf)) violations.push_back({{"n", n}, {"reason", "verify_product failed"}});
            if (n <= 64 && factor_integer(mersenne_number(n), o.budget) != mf.merged)
                violations.push_back({{"n", n}, {"reason", "disagrees with direct factoring"}});
        }
        report["max_n"] = v.max_n;
    } else if (v.suite == "stewartA") {
        auto cache = open_cache(o, err);
        const StewartAReport r = stewart_A_exceptions(v.max_n, v.epsilon, cache.get(), o.budget);
        report["max_n"] = r.n_max;
        report["epsilon"] = r.epsilon;
        report["checked"] = r.checked;
        ojson ex = ojson::array();
        for (const auto& e : r.exceptions) ex.push_back({{"n", e.n}, {"p", to_decimal(e.p)}, {"threshold", e.threshold}});
        report["exceptions"] = ex;
        report["density"] = r.density;
        report["skipped"] = r.skipped;
    } else if (v.suite == "stewartB") {
        auto cache = open_cache(o, err);
        const StewartBReport r = stewart_B_check(v.max_n, v.kappa, v.big_c, cache.get(), o.budget);
        report["max_n"] = r.n_max;
        report["kappa"] = r.kappa;
        report["big_c"] = r.big_c;
        report["qualifying"] = r.qualifying.size();
        report["minimum"] = r.minimum ? ojson({{"n", r.minimum->n}, {"ratio", r.minimum->ratio}}) : ojson(nullptr);
        for (const auto& e : r.below_c) violations.push_back({{"n", e.n}, {"ratio", e.ratio}});
        report["skipped"] = r.skipped;
    } else if (v.suite == "tausum") {
        const std::uint64_t x = v.max_x.value_or(1000000);
        const TauSum t = tau_sum_check(x);
        const TauSum small = tau_sum_check(100);
        report["x"] = x;
        report["sum"] = t.sum;
        report["reference"] = t.reference;
        report["difference"] = static_cast<double>(t.sum) - t.reference;
        if (std::abs(static_cast<double>(t.sum) - t.reference) >= 1e4)
            violations.push_back({{"x", x}, {"reason", "|sum - reference| >= 1e4"}});
        if (small.sum != 482) violations.push_back({{"x", 100}, {"sum", small.sum}, {"expected", 482}});
    } else if (v.suite == "phimin") {
        const std::uint64_t hi = v.max_x.value_or(1000000);
        const PhiMinimum m = phi_min_order(v.x_lo, hi);
        report["x_lo"] = v.x_lo;
        report["x_hi"] = hi;
        report["minimum"] = m.value;
        report["argmin"] = m.argmin;
        if (m.value < 0.3) violations.push_back({{"argmin", m.argmin}, {"minimum", m.value}});
    } else {
        throw std::invalid_argument("unknown suite: " + v.suite);
    }

    report["violations"] = violations;
    out << report.dump() << '\n';
    out << violations.size() << " violations\n";
    return violations.empty() ? kOk : kVerificationFailed;
}

inline int cmd_export(const std::string& format, const std::string& path, const CommonOptions& o, std::ostream& out,
                      std::ostream& err) {
    CommonOptions with_cache = o;
    with_cache.no_cache = false;
    auto cache = open_cache(with_cache, err);
    const auto records = cache->records();
    std::ofstream file(path, std::ios::trunc | std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    if (format == "json") {
        ojson arr = ojson::array();
        for (const auto& r : records) arr.push_back(to_json(r));
        file << arr.dump(2) << '\n';
    } else {
        csv_row(file, {"n", "status", "factors", "cofactor", "trial_bound", "rho_cap", "timestamp"});
        for (const auto& r : records)
            csv_row(file, {std::to_string(r.n), to_string(r.status), factors_text(r.factors), r.cofactor,
                           std::to_string(r.trial_bound), std::to_string(r.rho_cap), std::to_string(r.timestamp)});
    }
    if (!file) throw std::runtime_error("failed writing " + path);
    out << "exported " << records.size() << " records to " << path << '\n';
    return kOk;
}

}  // namespace detail

/// Parses argv (without the program name) and runs one subcommand.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    CLI::App app{"Mersenne number and dense-divisor workbench", "mersenne-lab"};
    app.footer(kCsvColumnsHelp);
    app.require_subcommand(1);

    CommonOptions common;
    std::uint64_t n = 0, x = 0, y = 0, z = 0, max_n = 0;
    double alpha = 0.0;
    std::string method = "generate", format = "csv", out_path;
    bool emit = false, parts = false;
    detail::VerifyOptions vopt;

    auto* factor = app.add_subcommand("factor", "factor 2^n-1 (JSON)");
    factor->add_option("--n", n, "exponent n")->required()->check(CLI::PositiveNumber);
    factor->add_flag("--parts", parts, "include the cyclotomic parts");
    add_budget_options(factor, common);

    auto* density = app.add_subcommand("density", "Δ, Δ₀, τ, ω of n (JSON)");
    density->add_option("--n", n, "integer n")->required()->check(CLI::PositiveNumber);

    auto* gxz = app.add_subcommand("gxz", "count G(x,z) = {n <= x : Δ₀(n) <= z} (JSON)");
    gxz->add_option("--x", x, "upper limit x")->required();
    gxz->add_option("--z", z, "density bound z")->required();
    gxz->add_option("--method", method, "generate|sieve")->check(CLI::IsMember({"generate", "sieve"}));
    gxz->add_flag("--emit-members", emit, "list the members, ascending");

    auto* smooth = app.add_subcommand("smooth", "Ψ(x,y) (JSON)");
    smooth->add_option("--x", x, "upper limit x")->required();
    smooth->add_option("--y", y, "smoothness bound y")->required();

    auto* sigma = app.add_subcommand("sigma", "partial sums of sum (log n)^α / P(2^n-1)");
    sigma->add_option("--alpha", alpha, "exponent α")->required();
    sigma->add_option("--max-n", max_n, "last n")->required();
    sigma->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    add_budget_options(sigma, common);

    auto* classify = app.add_subcommand("classify", "membership in E, F and the D+(n) bound (CSV)");
    classify->add_option("--alpha", alpha, "exponent α")->required();
    classify->add_option("--max-n", max_n, "last n")->required();
    add_budget_options(classify, common);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", vopt.suite, "suite name")
        ->required()
        ->check(CLI::IsMember(
            {"schinzel", "lemma3", "saias", "primitive", "product", "stewartA", "stewartB", "tausum", "phimin"}));
    verify->add_option("--max-n", vopt.max_n, "last n (default 120)");
    verify->add_option("--min-n", vopt.min_n, "first n for schinzel (default 13)");
    verify->add_option("--max-x", vopt.max_x, "upper limit for lemma3/saias/tausum/phimin");
    verify->add_option("--x-lo", vopt.x_lo, "lower limit for phimin (default 100)");
    verify->add_option("--epsilon", vopt.epsilon, "ε in f(n) = (log n)^ε for stewartA (default 0.1)");
    verify->add_option("--kappa", vopt.kappa, "κ for stewartB (default 1.2)");
    verify->add_option("--big-c", vopt.big_c, "report stewartB ratios below this (default 0)");
    add_budget_options(verify, common);

    auto* exp = app.add_subcommand("export", "export the factor cache");
    exp->add_option("--format", format, "csv|json")->required()->check(CLI::IsMember({"csv", "json"}));
    exp->add_option("--out", out_path, "output file")->required();
    exp->add_option("--cache", common.cache_path, "factor cache file (JSON lines)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kOk;
        }
        app.exit(e, err, err);
        return kUsage;
    }

    try {
        if (*factor) return detail::cmd_factor(n, parts, common, out, err);
        if (*density) return detail::cmd_density(n, out);
        if (*gxz) return detail::cmd_gxz(x, z, method, emit, out);
        if (*smooth) {
            ojson j;
            j["x"] = x;
            j["y"] = y;
            j["psi"] = smooth_count(x, y);
            out << j.dump() << '\n';
            return kOk;
        }
        if (*sigma) return detail::cmd_sigma(alpha, max_n, format == "json" ? "json" : "csv", common, out, err);
        if (*classify) return detail::cmd_classify(alpha, max_n, common, out, err);
        if (*verify) return detail::cmd_verify(vopt, common, out, err);
        if (*exp) return detail::cmd_export(format, out_path, common, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

inline int run_command(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, out, err);
}

}  // namespace mlab::cli
