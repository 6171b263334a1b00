#include "fracsob/report.hpp"

#include <chrono>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace fracsob::report {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json_value(const Value& v) {
    return std::visit([](const auto& x) { return ordered_json(x); }, v);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_value(const Value& v) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::string>)
                os << csv_escape(x);
            else if constexpr (std::is_same_v<T, bool>)
                os << (x ? "true" : "false");
            else
                os << x;
        },
        v);
    return os.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string Report::to_json() const {
    ordered_json doc;
    doc["command"] = command;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : config)
        cfg[k] = to_json_value(v);
    doc["config"] = cfg;
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r = ordered_json::object();
        for (const auto& [k, v] : row.fields)
            r[k] = to_json_value(v);
        arr.push_back(r);
    }
    doc["rows"] = arr;
    doc["versions"] = {{"fracsob", kVersion}};
    if (with_timestamp)
        doc["timestamp"] = utc_timestamp();
    return doc.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::vector<std::string> columns;
    for (const auto& row : rows)
        for (const auto& [k, v] : row.fields) {
            bool seen = false;
            for (const auto& c : columns)
                if (c == k)
                    seen = true;
            if (!seen)
                columns.push_back(k);
        }
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << csv_escape(columns[i]);
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i)
                os << ",";
            for (const auto& [k, v] : row.fields)
                if (k == columns[i]) {
                    os << csv_value(v);
                    break;
                }
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace fracsob::report
