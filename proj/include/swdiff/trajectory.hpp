#pragma once

// Uniformly sampled time series of named columns, with round-trip-exact CSV
// serialization. Every CSV starts with '#' comment lines carrying the resolved
// configuration that produced it, so files are self-describing.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swdiff {

struct Trajectory {
    std::vector<double> times;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;  // one vector per name, same length as times

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < column_names.size(); ++i)
            if (column_names[i] == name) return columns[i];
        throw std::out_of_range("Trajectory: no column named '" + name + "'");
    }

    bool has_column(const std::string& name) const {
        for (const auto& n : column_names)
            if (n == name) return true;
        return false;
    }
};

// 17 significant digits round-trips every finite double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                                 const std::vector<std::pair<std::string, std::string>>& header = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : header) out << "# " << key << " = " << value << "\n";
    out << "time";
    for (const auto& name : traj.column_names) out << "," << name;
    out << "\n";
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        out << format_double(traj.times[j]);
        for (const auto& col : traj.columns) out << "," << format_double(col[j]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct CsvFile {
    std::vector<std::pair<std::string, std::string>> header;  // '#' key = value lines, in order
    Trajectory traj;
};

inline CsvFile read_trajectory_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvFile file;
    std::string line;
    bool have_columns = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t#");
                    const auto e = s.find_last_not_of(" \t");
                    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
                };
                file.header.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_columns) {
            bool first = true;
            while (std::getline(ss, cell, ',')) {
                if (first && cell != "time")
                    throw std::runtime_error(path + ": first column must be 'time', got '" + cell + "'");
                if (!first) file.traj.column_names.push_back(cell);
                first = false;
            }
            file.traj.columns.resize(file.traj.column_names.size());
            have_columns = true;
            continue;
        }
        std::size_t idx = 0;
        while (std::getline(ss, cell, ',')) {
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": unparsable number '" + cell + "'");
            }
            if (idx == 0)
                file.traj.times.push_back(v);
            else if (idx - 1 < file.traj.columns.size())
                file.traj.columns[idx - 1].push_back(v);
            else
                throw std::runtime_error(path + ": row wider than header");
            ++idx;
        }
        if (idx != file.traj.column_names.size() + 1)
            throw std::runtime_error(path + ": row narrower than header");
    }
    if (!have_columns) throw std::runtime_error(path + ": no header row found");
    return file;
}

}  // namespace swdiff
