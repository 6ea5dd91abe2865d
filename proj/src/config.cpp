#include "machclock/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "machclock/errors.hpp"

namespace machclock {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
    return !k.empty() && std::all_of(k.begin(), k.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    fail(ErrorCode::ConfigError, where + ": " + what);
}

} // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_error(where, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!valid_key(section)) config_error(where, "invalid section name '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(where, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) config_error(where, "invalid key '" + key + "'");
        if (value.empty()) config_error(where, "key '" + key + "' has an empty value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (c.has(full)) config_error(where, "duplicate key '" + full + "' (first set at " + c.entries_[full].origin + ")");
        c.entries_[full] = {value, where};
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value, const std::string& origin) {
    if (!valid_key(key)) config_error(origin, "invalid key '" + key + "'");
    entries_[key] = {value, origin};
}

void Config::merge(const Config& other) {
    for (const auto& [k, e] : other.entries_) entries_[k] = {e.value, e.origin};
}

const Config::Entry& Config::entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(ErrorCode::ConfigError, "missing required key '" + key + "'");
    it->second.used = true;
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const Entry& e = entry(key);
    // strtod accepts the usual forms (1e-3, 0.5, inf is rejected below)
    char* end = nullptr;
    const double v = std::strtod(e.value.c_str(), &end);
    if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
        config_error(e.origin, "key '" + key + "': expected a finite number, got '" + e.value + "'");
    return v;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const {
    const Entry& e = entry(key);
    std::int64_t v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last)
        config_error(e.origin, "key '" + key + "': expected an integer, got '" + e.value + "'");
    return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entry(key);
    std::uint64_t v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    const auto r = std::from_chars(first, last, v);
    if (r.ec != std::errc() || r.ptr != last)
        config_error(e.origin, "key '" + key + "': expected a non-negative integer, got '" + e.value + "'");
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entry(key);
    std::string v = e.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    config_error(e.origin, "key '" + key + "': expected a boolean, got '" + e.value + "'");
}

void Config::reject_unused() const {
    for (const auto& [k, e] : entries_)
        if (!e.used) config_error(e.origin, "unknown key '" + k + "'");
}

std::vector<std::pair<std::string, std::string>> Config::items() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, e] : entries_) out.emplace_back(k, e.value);
    return out;
}

} // namespace machclock
