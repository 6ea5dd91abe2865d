#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace machclock {

/// Flat key=value file with optional [section] headers; keys are addressed as "section.key"
/// (top-level keys have no prefix). '#' and ';' start comments.
class Config {
public:
    struct Entry {
        std::string value;
        std::string origin; // "file:line" or "flag"
        mutable bool used = false;
    };

    static Config parse(const std::string& text, const std::string& origin = "<string>");
    static Config load(const std::string& path);

    /// Later values win; used for flag overrides.
    void set(const std::string& key, const std::string& value, const std::string& origin = "flag");
    void merge(const Config& other);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Throws ConfigError naming the first key that no experiment read.
    void reject_unused() const;

    /// Ordered (key, value) pairs for the parameter echo.
    std::vector<std::pair<std::string, std::string>> items() const;

private:
    const Entry& entry(const std::string& key) const;
    std::map<std::string, Entry> entries_;
};

} // namespace machclock
