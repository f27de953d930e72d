#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sobrig/log_real.hpp"
#include "sobrig/sharp_constants.hpp"

namespace sobrig {

using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline constexpr long double ln_10l = 2.302585092994045684017991454684364208L;
inline constexpr long double ln_2l = 0.693147180559945309417232121458176568L;

inline void require_recursion_args(int k, int n) {
    require_min_dimension(n, 5, "fundamental-group recursion");
    if (k < 1 || k > n)
        throw std::domain_error("recursion order k must satisfy 1 <= k <= n, got k = "
                                + std::to_string(k) + ", n = " + std::to_string(n));
}

// ln(1 + e^x) without overflow for either sign of x
inline long double ln_one_plus_exp(long double x) {
    return x > 1.0L ? x + log1pl(expl(-x)) : log1pl(expl(x));
}

inline double approx_digits(const BigInt& x) {
    return double(boost::multiprecision::msb(x) + 1) * 0.30102999566398119521;
}

// ln of a positive big integer: top 63 bits give the mantissa, the rest is a shift
inline long double ln_of_integer(const BigInt& x) {
    const std::size_t bits = boost::multiprecision::msb(x);
    if (bits <= 62) return logl((long double)x.convert_to<std::uint64_t>());
    const unsigned shift = unsigned(bits - 62);
    const BigInt top = x >> shift;
    return logl((long double)top.convert_to<std::uint64_t>()) + (long double)shift * ln_2l;
}

// log-domain recursion value C_{k,n}(i); cheap enough to recompute per call
inline LogReal munn_ln_C(int k, int n, int i) {
    const LogReal pref = LogReal::from_ln((n - 1) * logl(16.0L * k));
    LogReal c = LogReal::from_value(1.0);
    for (int step = 1; step <= i; ++step) {
        const LogReal ten_c = LogReal::from_value(10.0) * c;
        c = (LogReal::from_value(3.0) + ten_c)
            + pref * (LogReal::from_value(1.0) + ten_c).pow(double(n));
    }
    return c;
}

// ln(10^{k+2} C_{k,n}(k)), the magnitude every h/delta equation pivots on
inline long double munn_T(int k, int n) {
    return (k + 2) * ln_10l + munn_ln_C(k, n, k).ln_long();
}

}  // namespace detail

struct MunnRecursionValue {
    int k = 0;
    int n = 0;
    int i = 0;
    LogReal value;
    std::optional<BigInt> exact;  // present while the digit budget holds
};

inline MunnRecursionValue munn_C(int k, int n, int i, int digit_budget = 10000) {
    detail::require_recursion_args(k, n);
    if (i < 0 || i > k)
        throw std::domain_error("recursion index i must satisfy 0 <= i <= k, got i = "
                                + std::to_string(i));
    MunnRecursionValue out;
    out.k = k;
    out.n = n;
    out.i = i;
    out.value = detail::munn_ln_C(k, n, i);
    BigInt c = 1;
    bool within_budget = detail::approx_digits(c) <= digit_budget;
    for (int step = 1; within_budget && step <= i; ++step) {
        const BigInt ten_c = 10 * c;
        c = 3 + ten_c
            + boost::multiprecision::pow(BigInt(16 * k), unsigned(n - 1))
                  * boost::multiprecision::pow(1 + ten_c, unsigned(n));
        within_budget = detail::approx_digits(c) <= digit_budget;
    }
    if (within_budget) out.exact = std::move(c);
    return out;
}

// smallest positive root of ln s + k ln(1 + s/(2k)) = -T; the left side is
// strictly increasing, so a short fixed-point iteration from s = e^{-T} settles it
inline LogReal munn_delta(int k, int n) {
    detail::require_recursion_args(k, n);
    const long double T = detail::munn_T(k, n);
    long double x = -T;
    for (int it = 0; it < 8; ++it) {
        const long double next = -T - k * log1pl(expl(x) / (2.0L * k));
        if (next == x) break;
        x = next;
    }
    return LogReal::from_ln(x);
}

// log-form defining-equation residual at a candidate delta; the (x + T) grouping
// cancels the shared magnitude exactly before the small correction is added
inline double munn_delta_residual(int k, int n, const LogReal& delta) {
    detail::require_recursion_args(k, n);
    if (delta.is_zero()) throw std::domain_error("munn_delta_residual: delta must be positive");
    const long double T = detail::munn_T(k, n);
    const long double x = delta.ln_long();
    return double((x + T) + k * log1pl(expl(x) / (2.0L * k)));
}

inline double munn_h(int k, int n, const LogReal& s) {
    detail::require_recursion_args(k, n);
    if (s.is_zero()) throw std::domain_error("munn_h: s must be positive");
    const long double T = detail::munn_T(k, n);
    const long double ln_s = s.ln_long();
    const long double q = (ln_s + T) + k * log1pl(expl(ln_s) / (2.0L * k));
    if (q >= 0.0L)
        throw std::domain_error("munn_h: s must lie below delta, got log-equation value "
                                + std::to_string(double(q)));
    return double(-1.0L / expm1l(q));
}

// h^{-1} with the argument passed as its excess above 1 (y = 1 + excess); the chain
// feeds excesses far below every floating-point ulp of 1, so y itself never exists
inline LogReal munn_h_inv_excess(int k, int n, const LogReal& excess) {
    detail::require_recursion_args(k, n);
    if (excess.is_zero()) throw std::domain_error("munn_h_inv: argument must exceed 1");
    const long double T = detail::munn_T(k, n);
    const long double ln_w = excess.ln_long();
    // ln(1 - 1/y) = ln(w/(1+w))
    const long double target = -T + ln_w - detail::ln_one_plus_exp(ln_w);
    long double x = target;
    for (int it = 0; it < 8; ++it) {
        const long double next = target - k * log1pl(expl(x) / (2.0L * k));
        if (next == x) break;
        x = next;
    }
    return LogReal::from_ln(x);
}

inline LogReal munn_h_inv(int k, int n, double y) {
    if (!(y > 1.0)) throw std::domain_error("munn_h_inv: y must exceed 1");
    return munn_h_inv_excess(k, n, LogReal::from_value(y - 1.0));
}

struct MunnChainStep {
    int j = 0;           // which h_{j,n}^{-1} was applied
    LogReal arg_excess;  // argument minus 1
    LogReal value;       // the resulting h^{-1}
};

struct MunnConstant {
    int k = 0;
    int n = 0;
    LogReal delta;
    double ln_one_minus_alpha = 0.0;
    std::vector<MunnChainStep> chain;
};

class ChainInfeasible : public std::domain_error {
public:
    int failing_j = 0;
    ChainInfeasible(int j, const std::string& what)
        : std::domain_error(what), failing_j(j) {}
};

// alpha(1,n) = 1 - [1 + 2/h_{1,n}^{-1}(2)]^{-1} as printed; for k >= 2 the nested
// numerator is unwound from the innermost term h_{k-1,n}^{-1}(1 + delta/(2k)) outward,
// then alpha = 1 - [1 + (N/h_{1,n}^{-1}(N))^n]^{-1}; stored as ln(1 - alpha) because
// 1 - alpha underflows every standard float format from k = 2 on
inline MunnConstant munn_alpha(int k, int n) {
    detail::require_recursion_args(k, n);
    MunnConstant out;
    out.k = k;
    out.n = n;
    out.delta = munn_delta(k, n);
    auto apply_inv = [&out, n](int j, const LogReal& excess) {
        if (excess.is_zero())
            throw ChainInfeasible(j, "h_inv argument fell to 1 applying h_{" + std::to_string(j)
                                         + "," + std::to_string(n) + "}^{-1}");
        const LogReal s = munn_h_inv_excess(j, n, excess);
        out.chain.push_back({j, excess, s});
        return s;
    };
    if (k == 1) {
        const LogReal s1 = apply_inv(1, LogReal::from_value(1.0));
        out.ln_one_minus_alpha =
            -double(detail::ln_one_plus_exp(detail::ln_2l - s1.ln_long()));
        return out;
    }
    LogReal w = out.delta / LogReal::from_value(2.0 * k);
    for (int j = k - 1; j >= 2; --j) {
        const LogReal s = apply_inv(j, w);
        w = s / LogReal::from_value(2.0 * j);
    }
    const LogReal s1 = apply_inv(1, w);
    const long double ln_ratio = detail::ln_one_plus_exp(w.ln_long()) - s1.ln_long();
    out.ln_one_minus_alpha = -double(detail::ln_one_plus_exp(n * ln_ratio));
    return out;
}

namespace detail {

// ln(alpha^{-4/n}) from the stored ln(1 - alpha), never forming alpha itself
inline double ln_threshold_ratio(double ln_one_minus_alpha, int n) {
    const long double ln_alpha = log1pl(-expl((long double)ln_one_minus_alpha));
    return -double(4.0L / n * ln_alpha);
}

}  // namespace detail

inline LogReal homotopy_threshold(const MunnConstant& alpha) {
    const double K0 = sharp_constant_second_order(alpha.n);
    return LogReal::from_value(K0)
           * LogReal::from_ln(detail::ln_threshold_ratio(alpha.ln_one_minus_alpha, alpha.n));
}

inline LogReal homotopy_threshold(int k, int n) { return homotopy_threshold(munn_alpha(k, n)); }

// the k = 1 threshold two ways: the printed formula versus the asserted 2^{4/n}
// shortcut; they disagree wildly, so both are reported and the flag is advisory
struct ThresholdConsistency {
    int n = 0;
    double ln_ratio_literal = 0.0;
    double ln_ratio_claimed = 0.0;
    bool consistent = false;
};

inline ThresholdConsistency threshold_consistency(int n, double tol = 1e-9) {
    const MunnConstant a = munn_alpha(1, n);
    ThresholdConsistency r;
    r.n = n;
    r.ln_ratio_literal = detail::ln_threshold_ratio(a.ln_one_minus_alpha, n);
    r.ln_ratio_claimed = 4.0 / n * detail::ln_2;
    r.consistent = std::fabs(r.ln_ratio_literal - r.ln_ratio_claimed) <= tol;
    return r;
}

struct MunnTableRow {
    int k = 0;
    int n = 0;
    double ln_C_kk = 0.0;
    double ln_delta = 0.0;
    double ln_one_minus_alpha = 0.0;
    double ln_threshold_over_K0 = 0.0;
};

inline MunnTableRow munn_table_row(int k, int n, int digit_budget = 10000) {
    MunnTableRow row;
    row.k = k;
    row.n = n;
    row.ln_C_kk = double(munn_C(k, n, k, digit_budget).value.ln_long());
    const MunnConstant a = munn_alpha(k, n);
    row.ln_delta = double(a.delta.ln_long());
    row.ln_one_minus_alpha = a.ln_one_minus_alpha;
    row.ln_threshold_over_K0 = detail::ln_threshold_ratio(a.ln_one_minus_alpha, n);
    return row;
}

inline std::vector<MunnTableRow> munn_table(int n_max, int digit_budget = 10000) {
    detail::require_min_dimension(n_max, 5, "munn_table");
    std::vector<MunnTableRow> rows;
    for (int n = 5; n <= n_max; ++n)
        for (int k = 1; k <= n; ++k) rows.push_back(munn_table_row(k, n, digit_budget));
    return rows;
}

}  // namespace sobrig
