#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sobrig/io_util.hpp"
#include "sobrig/munn_perelman.hpp"
#include "sobrig/sharp_constants.hpp"

namespace sobrig {

// which k = 1 homotopy threshold the report's headline level uses: the printed
// alpha formula, or the 2^{4/n} shortcut the same theorem asserts independently
enum class ThresholdMode { literal_formula, claimed_identity };

struct RigidityReport {
    int n = 0;
    double C = 0.0;
    double tolerance = 0.0;
    ThresholdMode mode = ThresholdMode::claimed_identity;
    double C_over_K0 = 0.0;
    bool ssi_admissible = false;
    bool isometric_to_euclidean = false;
    bool volume_bound_applicable = false;          // C inside [K0, (n+2)/(n-2) K0]
    std::optional<double> volume_bound;            // (K0/C)^{n/4}
    std::optional<double> pi1_order_value;         // (C/K0)^{n/4}
    std::optional<long long> pi1_order_bound;      // its floor
    bool pi1_bound_unconditional = false;          // false: reported without the volume bound behind it
    std::optional<bool> simply_connected;          // C < 2^{4/n} K0
    std::optional<int> homotopy_vanishing_level;   // k0 under the active mode
    std::optional<int> homotopy_level_literal;     // both modes always recorded
    std::optional<int> homotopy_level_claimed;
    std::optional<bool> contractible;              // k0 = n

    bool operator==(const RigidityReport&) const = default;
};

namespace detail {

// ln(-ln(alpha)) from ln(1 - alpha); once 1 - alpha is tiny, -ln(alpha) ~ 1 - alpha
inline long double ln_neg_ln_alpha(double ln_one_minus_alpha) {
    const long double l = ln_one_minus_alpha;
    if (l < -40.0L) return l;
    return logl(-log1pl(-expl(l)));
}

// C < alpha^{-4/n} K0, compared as ln((n/4) ln(C/K0)) < ln(-ln(alpha)) because the
// threshold sits within one part in e^900 of K0 for k >= 2 and cannot be materialized
inline bool below_alpha_threshold(int n, double C, double K0, double ln_one_minus_alpha) {
    if (C <= K0) return true;  // every threshold exceeds K0 strictly
    const long double y = 0.25L * n * logl((long double)C / (long double)K0);
    return logl(y) < ln_neg_ln_alpha(ln_one_minus_alpha);
}

}  // namespace detail

inline RigidityReport decide(int n, double C,
                             ThresholdMode mode = ThresholdMode::claimed_identity,
                             double tolerance = 1e-12) {
    detail::require_min_dimension(n, 5, "decide");
    detail::require_positive(C, "decide: C");
    if (!(tolerance >= 0.0) || tolerance >= 1.0)
        throw std::domain_error("decide: tolerance must lie in [0,1)");

    RigidityReport r;
    r.n = n;
    r.C = C;
    r.tolerance = tolerance;
    r.mode = mode;
    const double K0 = sharp_constant_second_order(n);
    r.C_over_K0 = C / K0;
    r.ssi_admissible = C >= K0 * (1.0 - tolerance);
    r.isometric_to_euclidean = std::fabs(r.C_over_K0 - 1.0) <= tolerance;
    r.volume_bound_applicable =
        r.ssi_admissible && C <= (n + 2.0) / (n - 2.0) * K0 * (1.0 + tolerance);
    if (r.volume_bound_applicable) r.volume_bound = std::pow(K0 / C, 0.25 * n);

    if (!r.ssi_admissible) return r;  // no conclusions below the sharp constant

    const double order_value = std::pow(r.C_over_K0, 0.25 * n);
    r.pi1_order_value = order_value;
    if (order_value < 9.0e18) r.pi1_order_bound = (long long)std::floor(order_value);
    r.pi1_bound_unconditional = r.volume_bound_applicable;

    const bool below_claimed_k1 = C < std::pow(2.0, 4.0 / n) * K0;
    r.simply_connected = below_claimed_k1;

    int level_literal = 0;
    int level_claimed = 0;
    for (int k = 1; k <= n; ++k) {
        const MunnConstant alpha = munn_alpha(k, n);
        const bool literal = detail::below_alpha_threshold(n, C, K0, alpha.ln_one_minus_alpha);
        const bool claimed = (k == 1) ? below_claimed_k1 : literal;
        if (literal && level_literal == k - 1) level_literal = k;
        if (claimed && level_claimed == k - 1) level_claimed = k;
        if (level_literal < k && level_claimed < k) break;  // both chains stalled
    }
    r.homotopy_level_literal = level_literal;
    r.homotopy_level_claimed = level_claimed;
    r.homotopy_vanishing_level =
        mode == ThresholdMode::claimed_identity ? level_claimed : level_literal;
    r.contractible = *r.homotopy_vanishing_level == n;
    return r;
}

namespace detail {

inline std::string report_field(const std::optional<double>& x) {
    return x ? format_real(*x) : "unavailable";
}

inline std::string report_field(const std::optional<long long>& x) {
    return x ? std::to_string(*x) : "unavailable";
}

inline std::string report_field(const std::optional<int>& x) {
    return x ? std::to_string(*x) : "unavailable";
}

inline std::string report_field(const std::optional<bool>& x) {
    return x ? (*x ? "true" : "false") : "unavailable";
}

inline std::string report_field(bool x) { return x ? "true" : "false"; }

}  // namespace detail

inline std::string serialize_report(const RigidityReport& r) {
    std::ostringstream out;
    out << "# assumes nonnegative Ricci curvature and the distance-Laplacian growth condition"
           " (stated, not verified)\n";
    out << "n = " << r.n << "\n";
    out << "C = " << format_real(r.C) << "\n";
    out << "tolerance = " << format_real(r.tolerance) << "\n";
    out << "threshold_mode = "
        << (r.mode == ThresholdMode::claimed_identity ? "claimed_identity" : "literal_formula")
        << "\n";
    out << "C_over_K0 = " << format_real(r.C_over_K0) << "\n";
    out << "ssi_admissible = " << detail::report_field(r.ssi_admissible) << "\n";
    out << "isometric_to_euclidean = " << detail::report_field(r.isometric_to_euclidean) << "\n";
    out << "volume_bound_applicable = " << detail::report_field(r.volume_bound_applicable)
        << "\n";
    out << "volume_bound = " << detail::report_field(r.volume_bound) << "\n";
    out << "pi1_order_value = " << detail::report_field(r.pi1_order_value) << "\n";
    out << "pi1_order_bound = " << detail::report_field(r.pi1_order_bound) << "\n";
    out << "pi1_bound_unconditional = " << detail::report_field(r.pi1_bound_unconditional)
        << "\n";
    out << "simply_connected = " << detail::report_field(r.simply_connected) << "\n";
    out << "homotopy_vanishing_level = " << detail::report_field(r.homotopy_vanishing_level)
        << "\n";
    out << "homotopy_level_literal = " << detail::report_field(r.homotopy_level_literal) << "\n";
    out << "homotopy_level_claimed = " << detail::report_field(r.homotopy_level_claimed) << "\n";
    out << "contractible = " << detail::report_field(r.contractible) << "\n";
    return out.str();
}

namespace detail {

class ReportReader {
public:
    explicit ReportReader(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find(" = ");
            if (eq == std::string::npos)
                throw std::runtime_error("report line lacks ' = ': '" + line + "'");
            fields_[line.substr(0, eq)] = line.substr(eq + 3);
        }
    }

    std::string take(const std::string& key) {
        const auto it = fields_.find(key);
        if (it == fields_.end()) throw std::runtime_error("report is missing key '" + key + "'");
        std::string out = it->second;
        fields_.erase(it);
        return out;
    }

    bool take_bool(const std::string& key) {
        const std::string v = take(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw std::runtime_error("report key '" + key + "' is not a boolean: '" + v + "'");
    }

    template <class T, class Convert>
    std::optional<T> take_optional(const std::string& key, Convert&& convert) {
        const std::string v = take(key);
        if (v == "unavailable") return std::nullopt;
        return convert(v);
    }

    void expect_empty() const {
        if (!fields_.empty())
            throw std::runtime_error("report holds an unexpected key '" + fields_.begin()->first
                                     + "'");
    }

private:
    std::map<std::string, std::string> fields_;
};

}  // namespace detail

inline RigidityReport parse_report(const std::string& text) {
    detail::ReportReader reader(text);
    RigidityReport r;
    r.n = int(parse_real(reader.take("n")));
    r.C = parse_real(reader.take("C"));
    r.tolerance = parse_real(reader.take("tolerance"));
    const std::string mode = reader.take("threshold_mode");
    if (mode == "claimed_identity")
        r.mode = ThresholdMode::claimed_identity;
    else if (mode == "literal_formula")
        r.mode = ThresholdMode::literal_formula;
    else
        throw std::runtime_error("unknown threshold_mode '" + mode + "'");
    r.C_over_K0 = parse_real(reader.take("C_over_K0"));
    r.ssi_admissible = reader.take_bool("ssi_admissible");
    r.isometric_to_euclidean = reader.take_bool("isometric_to_euclidean");
    r.volume_bound_applicable = reader.take_bool("volume_bound_applicable");
    r.volume_bound =
        reader.take_optional<double>("volume_bound", [](const std::string& v) { return parse_real(v); });
    r.pi1_order_value = reader.take_optional<double>(
        "pi1_order_value", [](const std::string& v) { return parse_real(v); });
    r.pi1_order_bound = reader.take_optional<long long>(
        "pi1_order_bound", [](const std::string& v) { return std::stoll(v); });
    r.pi1_bound_unconditional = reader.take_bool("pi1_bound_unconditional");
    auto to_bool = [](const std::string& v) {
        if (v == "true") return true;
        if (v == "false") return false;
        throw std::runtime_error("expected a boolean, got '" + v + "'");
    };
    r.simply_connected = reader.take_optional<bool>("simply_connected", to_bool);
    r.homotopy_vanishing_level = reader.take_optional<int>(
        "homotopy_vanishing_level", [](const std::string& v) { return std::stoi(v); });
    r.homotopy_level_literal = reader.take_optional<int>(
        "homotopy_level_literal", [](const std::string& v) { return std::stoi(v); });
    r.homotopy_level_claimed = reader.take_optional<int>(
        "homotopy_level_claimed", [](const std::string& v) { return std::stoi(v); });
    r.contractible = reader.take_optional<bool>("contractible", to_bool);
    reader.expect_empty();
    return r;
}

}  // namespace sobrig
