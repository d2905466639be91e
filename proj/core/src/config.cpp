#include "spinkin/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "spinkin/common.hpp"

namespace spinkin {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key) {
    if (key.empty() || key.front() == '.' || key.back() == '.') return false;
    return std::all_of(key.begin(), key.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

std::optional<double> to_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
    return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) {
            errors.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) {
            errors.push_back(where + "invalid key '" + key + "'");
            continue;
        }
        if (c.has(key)) {
            errors.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        c.entries_.emplace_back(key, value);
    }
    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::string Config::emit() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

bool Config::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> Config::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return std::nullopt;
}

void Config::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(trim(item));
        if (!v) throw ConfigError("not a number: '" + trim(item) + "'");
        out.push_back(*v);
    }
    return out;
}

double ConfigReader::number(const std::string& key, double fallback) {
    const auto raw = config_.get(key);
    if (!raw) return fallback;
    const auto v = to_double(*raw);
    if (!v) {
        error(key, "expected a number, got '" + *raw + "'");
        return fallback;
    }
    return *v;
}

int ConfigReader::integer(const std::string& key, int fallback) {
    const auto raw = config_.get(key);
    if (!raw) return fallback;
    const auto v = to_double(*raw);
    if (!v || *v != static_cast<double>(static_cast<long>(*v)) || std::abs(*v) > 1e9) {
        error(key, "expected an integer, got '" + *raw + "'");
        return fallback;
    }
    return static_cast<int>(*v);
}

bool ConfigReader::boolean(const std::string& key, bool fallback) {
    const auto raw = config_.get(key);
    if (!raw) return fallback;
    if (*raw == "true" || *raw == "1" || *raw == "yes" || *raw == "on") return true;
    if (*raw == "false" || *raw == "0" || *raw == "no" || *raw == "off") return false;
    error(key, "expected true or false, got '" + *raw + "'");
    return fallback;
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback) {
    return config_.get(key).value_or(fallback);
}

std::vector<double> ConfigReader::numbers(const std::string& key, const std::vector<double>& fallback) {
    const auto raw = config_.get(key);
    if (!raw) return fallback;
    try {
        return parse_number_list(*raw);
    } catch (const ConfigError& e) {
        error(key, e.what());
        return fallback;
    }
}

void ConfigReader::error(const std::string& key, const std::string& message) {
    errors_.push_back(key + ": " + message);
}

void ConfigReader::reject_unknown(const std::vector<std::string>& known_keys) {
    for (const auto& [k, v] : config_.entries())
        if (std::find(known_keys.begin(), known_keys.end(), k) == known_keys.end()) error(k, "unknown key");
}

void ConfigReader::finish() const {
    if (errors_.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw ConfigError(msg);
}

}  // namespace spinkin
