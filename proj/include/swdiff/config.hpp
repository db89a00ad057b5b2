#pragma once

// Flat key-value configuration text:  `key = value` lines, '#' comments,
// blank lines ignored. Diagnostics always name the offending field; keys a
// reader never consumed are reported as unknown so typos cannot silently
// fall back to defaults.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swdiff {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

class Config {
public:
    static Config parse_text(const std::string& text, const std::string& origin = "<inline>") {
        Config cfg;
        cfg.origin_ = origin;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string t = detail::trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + t + "'");
            const std::string key = detail::trim(t.substr(0, eq));
            const std::string value = detail::trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
            for (const auto& [k, v] : cfg.entries_)
                if (k == key)
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate field '" +
                                      key + "'");
            cfg.entries_.emplace_back(key, value);
        }
        return cfg;
    }

    static Config parse_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str(), path);
    }

    bool has(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return true;
        return false;
    }

    std::string get_string(const std::string& key) const {
        for (const auto& [k, v] : entries_) {
            if (k == key) {
                consumed_.insert(key);
                return v;
            }
        }
        throw ConfigError(origin_ + ": missing required field '" + key + "'");
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string v = get_string(key);
        try {
            // stoull would accept "-1" by wrapping; require plain digits.
            if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
                throw std::invalid_argument("");
            return std::stoull(v);
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": field '" + key + "': expected a nonnegative integer, got '" +
                              v + "'");
        }
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? get_u64(key) : fallback;
    }

    std::vector<double> get_double_list(const std::string& key) const {
        const std::string v = get_string(key);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            std::stringstream ws(cell);
            std::string tok;
            while (ws >> tok) out.push_back(to_double(key, tok));
        }
        if (out.empty())
            throw ConfigError(origin_ + ": field '" + key + "': expected a list of numbers");
        return out;
    }

    // Fails on any field no reader consumed — catches misspelled keys.
    void reject_unconsumed() const {
        for (const auto& [k, v] : entries_)
            if (consumed_.find(k) == consumed_.end())
                throw ConfigError(origin_ + ": unknown field '" + k + "'");
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    const std::string& origin() const { return origin_; }

private:
    double to_double(const std::string& key, const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double r = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("");
            return r;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": field '" + key + "': expected a number, got '" + v + "'");
        }
    }

    std::vector<std::pair<std::string, std::string>> entries_;
    std::string origin_;
    mutable std::set<std::string> consumed_;
};

}  // namespace swdiff
