#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinkin {

/// Flat "key = value" text. '#' starts a comment, keys may carry dotted prefixes
/// (grid.position_points = 256). Entry order is preserved.
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);

    std::string emit() const;

    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Collects typed lookups and reports every offending key at once.
class ConfigReader {
public:
    explicit ConfigReader(const Config& config) : config_(config) {}

    double number(const std::string& key, double fallback);
    int integer(const std::string& key, int fallback);
    bool boolean(const std::string& key, bool fallback);
    std::string text(const std::string& key, const std::string& fallback);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);

    void error(const std::string& key, const std::string& message);
    /// Unknown keys are errors too.
    void reject_unknown(const std::vector<std::string>& known_keys);
    /// Throws ConfigError listing every problem found so far.
    void finish() const;

private:
    const Config& config_;
    std::vector<std::string> errors_;
};

std::vector<double> parse_number_list(const std::string& text);

}  // namespace spinkin
