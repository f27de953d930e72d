#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sobrig/sharp_constants.hpp"

namespace sobrig {

class ProfileFormatError : public std::runtime_error {
public:
    explicit ProfileFormatError(const std::string& what) : std::runtime_error(what) {}
};

class TailUndetermined : public std::runtime_error {
public:
    explicit TailUndetermined(const std::string& what) : std::runtime_error(what) {}
};

enum class ProfileKind { euclidean, ratio_family, tabulated };

// radial volume data v(t) = theta(t) * omega_n * t^n, stored through the ratio theta
struct VolumeProfile {
    int n = 0;
    ProfileKind kind = ProfileKind::euclidean;
    double b_inf = 1.0;  // ratio_family parameters
    double t0 = 1.0;
    double p = 1.0;
    std::vector<double> knot_t;      // tabulated knots, (0,1) anchor prepended
    std::vector<double> knot_theta;

    static VolumeProfile euclidean(int n) {
        detail::require_min_dimension(n, 5, "VolumeProfile");
        VolumeProfile v;
        v.n = n;
        v.kind = ProfileKind::euclidean;
        return v;
    }

    static VolumeProfile ratio_family(int n, double b_inf, double t0, double p) {
        detail::require_min_dimension(n, 5, "VolumeProfile");
        if (!(b_inf > 0.0) || b_inf > 1.0)
            throw ProfileFormatError("ratio_family: b_inf must lie in (0,1]");
        if (!(t0 > 0.0)) throw ProfileFormatError("ratio_family: t0 must be positive");
        if (!(p > 0.0)) throw ProfileFormatError("ratio_family: p must be positive");
        VolumeProfile v;
        v.n = n;
        v.kind = ProfileKind::ratio_family;
        v.b_inf = b_inf;
        v.t0 = t0;
        v.p = p;
        return v;
    }

    static VolumeProfile tabulated(int n, const std::vector<std::pair<double, double>>& samples) {
        detail::require_min_dimension(n, 5, "VolumeProfile");
        if (samples.empty()) throw ProfileFormatError("tabulated: empty sample table");
        VolumeProfile v;
        v.n = n;
        v.kind = ProfileKind::tabulated;
        v.knot_t.push_back(0.0);
        v.knot_theta.push_back(1.0);
        const double ln_omega = std::log(unit_ball_volume(n));
        double prev_t = 0.0;
        for (const auto& [t, vol] : samples) {
            if (!(t > 0.0)) throw ProfileFormatError("tabulated: sample t must be positive");
            if (t <= prev_t)
                throw ProfileFormatError("tabulated: sample times must be strictly increasing");
            if (vol < 0.0) throw ProfileFormatError("tabulated: negative volume sample");
            prev_t = t;
            v.knot_t.push_back(t);
            v.knot_theta.push_back(
                vol == 0.0 ? 0.0 : std::exp(std::log(vol) - ln_omega - n * std::log(t)));
        }
        return v;
    }

    double theta(double t) const {
        switch (kind) {
            case ProfileKind::euclidean:
                return 1.0;
            case ProfileKind::ratio_family:
                return t == 0.0 ? 1.0 : b_inf + (1.0 - b_inf) / (1.0 + std::pow(t / t0, p));
            case ProfileKind::tabulated: {
                if (t <= 0.0) return 1.0;
                if (t >= knot_t.back()) return knot_theta.back();
                const auto it = std::upper_bound(knot_t.begin(), knot_t.end(), t);
                const std::size_t hi = std::size_t(it - knot_t.begin());
                const double t1 = knot_t[hi - 1], t2 = knot_t[hi];
                const double w = (t - t1) / (t2 - t1);
                return knot_theta[hi - 1] + w * (knot_theta[hi] - knot_theta[hi - 1]);
            }
        }
        return 1.0;
    }

    double value(double t) const {
        if (t <= 0.0) return 0.0;
        return theta(t) * unit_ball_volume(n) * std::pow(t, n);
    }

    // the exact constant theta settles to; the interpolant is literally constant there
    double theta_tail() const {
        switch (kind) {
            case ProfileKind::euclidean: return 1.0;
            case ProfileKind::ratio_family: return b_inf;
            case ProfileKind::tabulated: return knot_theta.back();
        }
        return 1.0;
    }

    double scale() const {
        switch (kind) {
            case ProfileKind::euclidean: return 1.0;
            case ProfileKind::ratio_family: return t0;
            case ProfileKind::tabulated: return knot_t.back();
        }
        return 1.0;
    }
};

struct ProfileValidation {
    bool valid = true;
    std::string violation;
    double location = 0.0;
};

inline ProfileValidation profile_validate(const VolumeProfile& prof) {
    ProfileValidation report;
    if (std::fabs(prof.theta(0.0) - 1.0) > 1e-12) {
        report.valid = false;
        report.violation = "volume ratio does not approach 1 at the origin";
        report.location = 0.0;
        return report;
    }
    const double s = prof.scale();
    std::vector<double> grid;
    for (int i = 0; i <= 480; ++i) grid.push_back(s * std::pow(10.0, -3.0 + 6.0 * i / 480.0));
    if (prof.kind == ProfileKind::tabulated) {
        for (std::size_t i = 1; i < prof.knot_t.size(); ++i) {
            grid.push_back(prof.knot_t[i]);
            grid.push_back(0.5 * (prof.knot_t[i - 1] + prof.knot_t[i]));
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    double prev_t = 0.0, prev_theta = 1.0;
    for (const double t : grid) {
        if (t <= 0.0) continue;
        const double th = prof.theta(t);
        if (th > 1.0 + 1e-12) {
            report.valid = false;
            report.violation = "volume exceeds the flat-space ball volume";
            report.location = t;
            return report;
        }
        if (th > prev_theta * (1.0 + 1e-12)) {
            report.valid = false;
            report.violation = "volume ratio increases";
            report.location = t;
            return report;
        }
        // v(t2) >= v(t1) via the ratio (theta2/theta1)(t2/t1)^n, safe against overflow
        if (prev_t > 0.0 && prev_theta > 0.0) {
            const double growth = th / prev_theta * std::exp(prof.n * std::log(t / prev_t));
            if (growth < 1.0 - 1e-9) {
                report.valid = false;
                report.violation = "volume decreases";
                report.location = t;
                return report;
            }
        }
        prev_t = t;
        prev_theta = th;
    }
    return report;
}

// limit of theta at infinity: exact for the closed-form kinds, geometric tail
// extrapolation from the last decade of knots for tabulated data
inline double asymptotic_ratio(const VolumeProfile& prof) {
    switch (prof.kind) {
        case ProfileKind::euclidean: return 1.0;
        case ProfileKind::ratio_family: return prof.b_inf;
        case ProfileKind::tabulated: break;
    }
    const double T = prof.knot_t.back();
    const double th_l = prof.theta(T);
    const double d1 = prof.theta(0.50 * T) - th_l;
    const double d2 = prof.theta(0.25 * T) - prof.theta(0.50 * T);
    if (d1 <= 1e-12) return th_l;  // tail already flat
    if (d2 <= 0.0)
        throw TailUndetermined("tabulated tail is not settling: no decay before the last knot");
    const double r = d1 / d2;
    if (r >= 0.95)
        throw TailUndetermined("tabulated tail decays too slowly to extrapolate (ratio "
                               + std::to_string(r) + ")");
    const double b = th_l - d1 * r / (1.0 - r);
    if (!(b > 0.0))
        throw TailUndetermined("tabulated tail extrapolates to a nonpositive ratio");
    return b;
}

namespace detail {

inline std::string strip_comment_and_trim(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, int line_no, const char* key) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || text.empty())
        throw ProfileFormatError("config line " + std::to_string(line_no) + ": key '" + key
                                 + "' needs a number, got '" + text + "'");
    return x;
}

inline std::vector<std::pair<double, double>> parse_table_pairs(const std::string& text,
                                                                int line_no) {
    std::vector<std::pair<double, double>> samples;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::istringstream pair_in(item);
        double t = 0.0, v = 0.0;
        std::string rest;
        if (!(pair_in >> t >> v) || (pair_in >> rest))
            throw ProfileFormatError("config line " + std::to_string(line_no)
                                     + ": table entries must be 't v' pairs, got '" + item + "'");
        samples.emplace_back(t, v);
    }
    if (samples.empty())
        throw ProfileFormatError("config line " + std::to_string(line_no) + ": empty table");
    return samples;
}

inline std::vector<std::pair<double, double>> read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileFormatError("cannot open table file '" + path + "'");
    std::vector<std::pair<double, double>> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = strip_comment_and_trim(line);
        if (s.empty()) continue;
        std::istringstream pair_in(s);
        double t = 0.0, v = 0.0;
        std::string rest;
        if (!(pair_in >> t >> v) || (pair_in >> rest))
            throw ProfileFormatError("table file '" + path + "' line " + std::to_string(line_no)
                                     + ": expected 't v', got '" + s + "'");
        samples.emplace_back(t, v);
    }
    if (samples.empty()) throw ProfileFormatError("table file '" + path + "' holds no samples");
    return samples;
}

}  // namespace detail

// key = value profile definition; see the sample files under configs/
inline VolumeProfile parse_profile_config(std::istream& in, const std::string& base_dir = "") {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string s = detail::strip_comment_and_trim(line);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ProfileFormatError("config line " + std::to_string(line_no)
                                     + ": expected 'key = value', got '" + s + "'");
        const std::string key = detail::strip_comment_and_trim(s.substr(0, eq));
        const std::string val = detail::strip_comment_and_trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ProfileFormatError("config line " + std::to_string(line_no)
                                     + ": empty key or value");
        if (kv.count(key))
            throw ProfileFormatError("config line " + std::to_string(line_no) + ": duplicate key '"
                                     + key + "' (first on line "
                                     + std::to_string(kv[key].second) + ")");
        kv[key] = {val, line_no};
    }

    auto take = [&kv](const char* key) -> std::pair<std::string, int> {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw ProfileFormatError(std::string("config is missing required key '") + key + "'");
        auto out = it->second;
        kv.erase(it);
        return out;
    };

    const auto [n_text, n_line] = take("n");
    const double n_val = detail::parse_number(n_text, n_line, "n");
    if (n_val != std::floor(n_val) || n_val < 5.0 || n_val > 1000.0)
        throw ProfileFormatError("config line " + std::to_string(n_line)
                                 + ": n must be an integer >= 5");
    const int n = int(n_val);

    const auto [kind, kind_line] = take("kind");
    VolumeProfile prof;
    if (kind == "euclidean") {
        prof = VolumeProfile::euclidean(n);
    } else if (kind == "ratio_family") {
        const auto [b_text, b_line] = take("b_inf");
        const auto [t_text, t_line] = take("t0");
        const auto [p_text, p_line] = take("p");
        prof = VolumeProfile::ratio_family(n, detail::parse_number(b_text, b_line, "b_inf"),
                                           detail::parse_number(t_text, t_line, "t0"),
                                           detail::parse_number(p_text, p_line, "p"));
    } else if (kind == "tabulated") {
        const bool inline_table = kv.count("table") > 0;
        const bool file_table = kv.count("table_file") > 0;
        if (inline_table == file_table)
            throw ProfileFormatError(
                "tabulated config needs exactly one of 'table' or 'table_file'");
        std::vector<std::pair<double, double>> samples;
        if (inline_table) {
            const auto [text, table_line] = take("table");
            samples = detail::parse_table_pairs(text, table_line);
        } else {
            const auto [path, path_line] = take("table_file");
            const bool relative = !path.empty() && path.front() != '/';
            samples = detail::read_table_file(
                relative && !base_dir.empty() ? base_dir + "/" + path : path);
        }
        prof = VolumeProfile::tabulated(n, samples);
    } else {
        throw ProfileFormatError("config line " + std::to_string(kind_line)
                                 + ": unknown kind '" + kind
                                 + "' (expected euclidean, ratio_family, or tabulated)");
    }
    if (!kv.empty())
        throw ProfileFormatError("config line " + std::to_string(kv.begin()->second.second)
                                 + ": key '" + kv.begin()->first + "' does not apply here");
    return prof;
}

inline VolumeProfile load_profile_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProfileFormatError("cannot open profile config '" + path + "'");
    const auto slash = path.find_last_of('/');
    return parse_profile_config(in, slash == std::string::npos ? "" : path.substr(0, slash));
}

}  // namespace sobrig
