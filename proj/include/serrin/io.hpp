#pragma once

#include "serrin/error.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace serrin::io {

/// 17 significant digits, the CSV number format everywhere.
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Comma-separated rows with a header and LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::initializer_list<std::string> header) {
        bool first = true;
        for (const auto& h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

    void row(std::span<const double> values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << fmt(values[i]);
        }
        out_ << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw ConfigError("cannot create directory " + parent.string() + ": " + ec.message());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!f) throw ConfigError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw ConfigError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

/// "start:stop:count" with count >= 1; count == 1 requires start == stop.
inline std::vector<double> parse_range(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? a : text.find(':', a + 1);
    if (b == std::string::npos) throw ConfigError("range '" + text + "' is not start:stop:count");
    double lo, hi;
    long count;
    try {
        std::size_t used = 0;
        lo = std::stod(text.substr(0, a), &used);
        if (used != a) throw std::invalid_argument("start");
        const std::string mid = text.substr(a + 1, b - a - 1);
        hi = std::stod(mid, &used);
        if (used != mid.size()) throw std::invalid_argument("stop");
        const std::string tail = text.substr(b + 1);
        count = std::stol(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("count");
    } catch (const std::exception&) {
        throw ConfigError("range '" + text + "' is not start:stop:count");
    }
    if (count < 1) throw ConfigError("range '" + text + "': count must be >= 1");
    if (count == 1 && lo != hi) throw ConfigError("range '" + text + "': a single point needs start == stop");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * double(i) / double(count - 1);
    return out;
}

/// Comma-separated list of numbers.
inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("'" + item + "' is not a number");
        }
    }
    return out;
}

} // namespace serrin::io
