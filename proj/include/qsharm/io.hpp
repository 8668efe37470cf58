#pragma once

#include <boost/version.hpp>
#include <gmp.h>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

namespace qsharm {

inline constexpr const char* version = "0.1.0";

// 17 significant digits: round-trips every double
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    template <class... Ts>
    void add(const Ts&... cells)
    {
        std::vector<std::string> row;
        (row.push_back(cell(cells)), ...);
        if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
        rows_.push_back(std::move(row));
    }

    std::size_t size() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    std::string str() const
    {
        std::ostringstream os;
        line(os, header_);
        for (const auto& r : rows_) line(os, r);
        return os.str();
    }

    // [{header: cell}]; cells that parse as finite numbers become JSON numbers
    nlohmann::ordered_json json() const
    {
        auto out = nlohmann::ordered_json::array();
        for (const auto& r : rows_) {
            nlohmann::ordered_json o;
            for (std::size_t k = 0; k < header_.size(); ++k) o[header_[k]] = typed(r[k]);
            out.push_back(o);
        }
        return out;
    }

private:
    static std::string cell(double v) { return format_double(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(const T& v)
    {
        std::ostringstream os;
        os << v;
        return os.str();
    }
    static nlohmann::ordered_json typed(const std::string& c)
    {
        if (c.empty()) return c;
        char* end = nullptr;
        errno = 0;
        long long i = std::strtoll(c.c_str(), &end, 10);
        if (*end == '\0' && errno == 0) return i;
        double d = std::strtod(c.c_str(), &end);
        if (*end == '\0' && std::isfinite(d)) return d;
        return c;
    }
    static std::string quoted(const std::string& c)
    {
        if (c.find_first_of(",\"\n") == std::string::npos) return c;
        std::string q = "\"";
        for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    static void line(std::ostream& os, const std::vector<std::string>& r)
    {
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << quoted(r[k]);
        os << "\n";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Write to a sibling temporary file, then rename over the target.
inline void atomic_write(const std::filesystem::path& target, const std::string& content)
{
    namespace fs = std::filesystem;
    if (target.has_parent_path() && !fs::exists(target.parent_path()))
        throw std::runtime_error("atomic_write: directory does not exist: " + target.parent_path().string());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("atomic_write: write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("atomic_write: cannot rename onto " + target.string());
    }
}

inline nlohmann::ordered_json versions_json()
{
    nlohmann::ordered_json v;
    v["qsharm"] = version;
    v["gmp"] = gmp_version;
    v["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." + std::to_string(BOOST_VERSION % 100);
    v["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_PATCH);
    return v;
}

} // namespace qsharm
