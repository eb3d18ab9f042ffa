#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrcnn {

// All numeric text output goes through this: 17 significant digits, enough
// for a lossless double round-trip.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// key=value text with '#' comments; insertion order preserved for writing.
struct KeyValueFile {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& k, const std::string& v) { entries.emplace_back(k, v); }
    bool has(const std::string& k) const {
        for (const auto& [key, _] : entries)
            if (key == k) return true;
        return false;
    }
    std::string get(const std::string& k) const {
        for (const auto& [key, val] : entries)
            if (key == k) return val;
        throw std::runtime_error("missing key: " + k);
    }
    std::string get_or(const std::string& k, const std::string& dflt) const {
        return has(k) ? get(k) : dflt;
    }

    void save(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot write " + path);
        for (const auto& [k, v] : entries) f << k << "=" << v << "\n";
    }

    static KeyValueFile load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot read " + path);
        KeyValueFile kv;
        std::string line;
        while (std::getline(f, line)) {
            line = trim(line);
            if (line.empty() || line[0] == '#' || line[0] == '[') continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(path + ": malformed line '" + line + "'");
            kv.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return kv;
    }
};

inline double parse_double(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("bad number: '" + s + "'");
    return v;
}

inline long parse_long(const std::string& s) {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::runtime_error("bad integer: '" + s + "'");
    return v;
}

} // namespace rrcnn
