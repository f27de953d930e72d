#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace sobrig {

// 17 significant digits: enough to reproduce the exact double on re-parse
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double parse_real(const std::string& text) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (text.empty() || pos != text.size())
        throw std::runtime_error("expected a number, got '" + text + "'");
    return x;
}

// write-then-rename so readers never observe a half-written file
inline void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace sobrig
