#pragma once

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bigint.hpp"
#include "factored_integer.hpp"

namespace mlab {

/// One line of the factor cache: the (possibly partial) factorization of 2^n - 1.
struct FactorCacheRecord {
    std::uint64_t n = 0;
    std::vector<std::pair<std::string, std::uint32_t>> factors;  // (prime, exponent), prime ascending
    std::string cofactor = "1";
    FactorStatus status = FactorStatus::Complete;
    std::uint64_t trial_bound = 0;
    std::uint64_t rho_cap = 0;
    std::int64_t timestamp = 0;

    friend bool operator==(const FactorCacheRecord&, const FactorCacheRecord&) = default;
};

inline nlohmann::ordered_json to_json(const FactorCacheRecord& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["factors"] = nlohmann::ordered_json::array();
    for (const auto& [p, e] : r.factors) j["factors"].push_back(nlohmann::ordered_json::array({p, e}));
    j["cofactor"] = r.cofactor;
    j["status"] = to_string(r.status);
    j["trial_bound"] = r.trial_bound;
    j["rho_cap"] = r.rho_cap;
    j["timestamp"] = r.timestamp;
    return j;
}

/// Parses one JSON line; throws on malformed input.
inline FactorCacheRecord record_from_json(const nlohmann::json& j) {
    FactorCacheRecord r;
    r.n = j.at("n").get<std::uint64_t>();
    for (const auto& f : j.at("factors")) {
        if (!f.is_array() || f.size() != 2) throw std::invalid_argument("factor entry must be [prime, exponent]");
        r.factors.emplace_back(f.at(0).get<std::string>(), f.at(1).get<std::uint32_t>());
    }
    r.cofactor = j.at("cofactor").get<std::string>();
    r.status = parse_status(j.at("status").get<std::string>());
    r.trial_bound = j.at("trial_bound").get<std::uint64_t>();
    r.rho_cap = j.at("rho_cap").get<std::uint64_t>();
    r.timestamp = j.at("timestamp").get<std::int64_t>();
    return r;
}

/// Empty string when the record reconstructs 2^n - 1; otherwise the reason.
inline std::string validate_record(const FactorCacheRecord& r) {
    if (r.n == 0) return "n must be positive";
    BigInt product = from_decimal(r.cofactor);
    if (product < 1) return "cofactor must be >= 1";
    if ((product == 1) != (r.status == FactorStatus::Complete)) return "status disagrees with cofactor";
    BigInt previous = 1;
    for (const auto& [ps, e] : r.factors) {
        BigInt p = from_decimal(ps);
        if (p <= previous) return "primes not strictly increasing";
        if (e == 0) return "zero exponent";
        BigInt pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        product *= pe;
        previous = p;
    }
    if (product != mersenne_number(r.n)) return "product does not reconstruct 2^n-1";
    return {};
}

/// True when `candidate` should replace `existing`: Complete beats Partial,
/// and among Partial records the larger trial bound (then rho cap) wins.
inline bool supersedes(const FactorCacheRecord& candidate, const FactorCacheRecord& existing) {
    if (candidate.status == FactorStatus::Complete) return true;
    if (existing.status == FactorStatus::Complete) return false;
    if (candidate.trial_bound != existing.trial_bound) return candidate.trial_bound > existing.trial_bound;
    return candidate.rho_cap >= existing.rho_cap;
}

enum class UpsertResult { Inserted, Replaced, Kept };

/// JSON-lines factor cache. Upserts are appended and fsync'd immediately;
/// opening the file compacts it to one line per n. A sidecar lock file makes
/// the first opener the only writer; later openers are read-only.
class FactorCache {
public:
    explicit FactorCache(std::filesystem::path path) : path_(std::move(path)) {
        if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
        acquire_lock();
        load();
    }

    FactorCache(const FactorCache&) = delete;
    FactorCache& operator=(const FactorCache&) = delete;

    ~FactorCache() {
        if (lock_fd_ >= 0) {
            ::flock(lock_fd_, LOCK_UN);
            ::close(lock_fd_);
        }
    }

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path quarantine_path() const { return path_.string() + ".quarantine"; }
    bool writable() const { return lock_fd_ >= 0; }

    std::optional<FactorCacheRecord> get(std::uint64_t n) const {
        std::lock_guard lock(mutex_);
        auto it = records_.find(n);
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    UpsertResult upsert(const FactorCacheRecord& record) {
        if (auto why = validate_record(record); !why.empty())
            throw std::invalid_argument("cache record for n=" + std::to_string(record.n) + " rejected: " + why);
        std::lock_guard lock(mutex_);
        auto it = records_.find(record.n);
        UpsertResult result = UpsertResult::Inserted;
        if (it != records_.end()) {
            if (!supersedes(record, it->second)) return UpsertResult::Kept;
            result = UpsertResult::Replaced;
        }
        records_[record.n] = record;
        if (writable()) append_line(to_json(record).dump());
        return result;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return records_.size();
    }

    std::vector<FactorCacheRecord> records() const {
        std::lock_guard lock(mutex_);
        std::vector<FactorCacheRecord> out;
        out.reserve(records_.size());
        for (const auto& [n, r] : records_) out.push_back(r);
        return out;
    }

    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Rewrites the file with exactly one line per n, ascending.
    void compact() {
        std::lock_guard lock(mutex_);
        compact_locked();
    }

private:
    void acquire_lock() {
        const std::string lock_path = path_.string() + ".lock";
        int fd = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd < 0) {
            warnings_.push_back("cannot open lock file " + lock_path + ": " + std::strerror(errno) +
                                "; cache is read-only");
            return;
        }
        if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
            ::close(fd);
            warnings_.push_back("cache " + path_.string() + " is locked by another writer; cache is read-only");
            return;
        }
        lock_fd_ = fd;
    }

    void load() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        std::size_t line_no = 0, kept_lines = 0;
        std::vector<std::string> quarantined;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            FactorCacheRecord rec;
            try {
                rec = record_from_json(nlohmann::json::parse(line));
            } catch (const std::exception& e) {
                warnings_.push_back("cache line " + std::to_string(line_no) + " is corrupt (" + e.what() +
                                    "); quarantined");
                quarantined.push_back(line);
                continue;
            }
            if (auto why = validate_record(rec); !why.empty()) {
                warnings_.push_back("cache line " + std::to_string(line_no) + " rejected: " + why + "; quarantined");
                quarantined.push_back(line);
                continue;
            }
            ++kept_lines;
            auto it = records_.find(rec.n);
            if (it == records_.end() || supersedes(rec, it->second)) records_[rec.n] = std::move(rec);
        }
        in.close();
        if (!writable()) return;
        if (!quarantined.empty()) {
            std::ofstream q(quarantine_path(), std::ios::app);
            for (const auto& l : quarantined) q << l << '\n';
        }
        if (!quarantined.empty() || kept_lines != records_.size()) compact_locked();
    }

    void compact_locked() {
        if (!writable()) throw std::runtime_error("cache is read-only");
        const std::filesystem::path tmp = path_.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            for (const auto& [n, r] : records_) out << to_json(r).dump() << '\n';
            out.flush();
            if (!out) throw std::runtime_error("failed writing " + tmp.string());
        }
        std::filesystem::rename(tmp, path_);
    }

    void append_line(const std::string& line) {
        int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
        if (fd < 0) throw std::runtime_error("cannot open cache " + path_.string() + ": " + std::strerror(errno));
        const std::string data = line + '\n';
        const char* p = data.data();
        std::size_t left = data.size();
        while (left > 0) {
            ssize_t w = ::write(fd, p, left);
            if (w < 0) {
                if (errno == EINTR) continue;
                ::close(fd);
                throw std::runtime_error("write to cache failed: " + std::string(std::strerror(errno)));
            }
            p += w;
            left -= static_cast<std::size_t>(w);
        }
        ::fsync(fd);
        ::close(fd);
    }

    std::filesystem::path path_;
    int lock_fd_ = -1;
    mutable std::mutex mutex_;
    std::map<std::uint64_t, FactorCacheRecord> records_;
    std::vector<std::string> warnings_;
};

inline std::unique_ptr<FactorCache> cache_open(const std::filesystem::path& path) {
    return std::make_unique<FactorCache>(path);
}

}  // namespace mlab
