#pragma once

#include "hash.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cycleforge {

inline constexpr const char* code_version = "1.0.0";

// Content-addressed store: key = sha256(module, canonical parameters, code version); each entry
// carries the sha256 of its payload so a damaged file is detected and treated as a miss.
class ResultCache {
public:
    struct Stats {
        std::size_t hits = 0, misses = 0, corrupted = 0, writes = 0;
    };

    // dir empty: disabled.
    explicit ResultCache(std::filesystem::path dir, std::string version = code_version, std::ostream* warn = &std::cerr)
        : dir_(std::move(dir)), version_(std::move(version)), warn_(warn) {
        if (dir_.empty()) return;
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        auto probe = dir_ / ".probe";
        {
            std::ofstream f(probe);
            f << "ok";
            if (ec || !f) {
                if (warn_) *warn_ << "warning: cache directory " << dir_.string() << " is not writable; running uncached\n";
                dir_.clear();
                return;
            }
        }
        std::filesystem::remove(probe, ec);
    }

    // --cache-dir wins, then CYCLEFORGE_CACHE, then the default.
    static std::filesystem::path resolve_dir(const std::string& flag, const std::string& fallback = ".cycleforge-cache") {
        if (!flag.empty()) return flag;
        if (const char* env = std::getenv("CYCLEFORGE_CACHE"); env && *env) return env;
        return fallback;
    }

    bool enabled() const { return !dir_.empty(); }
    const std::filesystem::path& dir() const { return dir_; }
    const Stats& stats() const { return stats_; }

    std::string key(const std::string& module, const std::string& params) const {
        return sha256_hex(module + '\n' + params + '\n' + version_);
    }

    std::optional<std::string> get(const std::string& module, const std::string& params) {
        if (!enabled()) return std::nullopt;
        auto path = path_of(module, params);
        std::ifstream f(path, std::ios::binary);
        if (!f) { ++stats_.misses; return std::nullopt; }
        std::string header;
        std::getline(f, header);
        std::ostringstream body;
        body << f.rdbuf();
        std::string payload = body.str();
        if (header != "CFCACHE1 " + sha256_hex(payload)) {
            ++stats_.corrupted;
            ++stats_.misses;
            std::error_code ec;
            std::filesystem::remove(path, ec);
            return std::nullopt;
        }
        ++stats_.hits;
        return payload;
    }

    bool put(const std::string& module, const std::string& params, const std::string& payload) {
        if (!enabled()) return false;
        auto path = path_of(module, params);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            f << "CFCACHE1 " << sha256_hex(payload) << '\n' << payload;
            if (!f) {
                if (warn_) *warn_ << "warning: cannot write cache entry " << path.string() << "\n";
                return false;
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec) return false;
        ++stats_.writes;
        return true;
    }

    std::filesystem::path path_of(const std::string& module, const std::string& params) const {
        return dir_ / (module + "-" + key(module, params) + ".entry");
    }

private:
    std::filesystem::path dir_;
    std::string version_;
    std::ostream* warn_;
    Stats stats_;
};

}  // namespace cycleforge
