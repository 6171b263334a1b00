#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fracsob::report {

inline constexpr const char* kVersion = "0.1.0";

using Value = std::variant<double, long long, bool, std::string>;

/// Ordered key/value record; insertion order is preserved in every output
/// format so reports are byte-stable across runs.
struct Row {
    std::vector<std::pair<std::string, Value>> fields;

    Row& set(std::string key, double v) { fields.emplace_back(std::move(key), v); return *this; }
    Row& set(std::string key, long long v) { fields.emplace_back(std::move(key), v); return *this; }
    Row& set(std::string key, int v) { return set(std::move(key), static_cast<long long>(v)); }
    Row& set(std::string key, bool v) { fields.emplace_back(std::move(key), v); return *this; }
    Row& set(std::string key, std::string v) { fields.emplace_back(std::move(key), std::move(v)); return *this; }
    Row& set(std::string key, const char* v) { return set(std::move(key), std::string(v)); }
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, Value>> config;
    std::vector<Row> rows;
    bool with_timestamp = false;

    void set_config(std::string key, Value v) { config.emplace_back(std::move(key), std::move(v)); }

    /// {command, config, rows, versions[, timestamp]} as JSON text.
    std::string to_json() const;
    /// Flattened rows; columns in first-appearance order.
    std::string to_csv() const;
};

}  // namespace fracsob::report
