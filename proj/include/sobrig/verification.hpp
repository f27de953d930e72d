#pragma once

// Nine timed self-checks, each with pinned tolerances and a wall-clock budget.
// run_criterion executes one by index; suite_criteria maps the CLI suite names
// onto index lists.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sobrig/munn_perelman.hpp"
#include "sobrig/quadrature.hpp"
#include "sobrig/rigidity.hpp"
#include "sobrig/sharp_constants.hpp"
#include "sobrig/volume_comparison.hpp"
#include "sobrig/volume_profile.hpp"

namespace sobrig {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct CriterionReport {
    int index = 0;
    std::string title;
    double time_limit_seconds = 0.0;
    double elapsed_seconds = 0.0;
    std::vector<CheckResult> checks;

    bool within_time() const { return elapsed_seconds <= time_limit_seconds; }
    bool passed() const {
        if (!within_time()) return false;
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

inline double rel_gap(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

inline CheckResult bounded(std::string name, double worst, double bound) {
    return {std::move(name), worst < bound, worst, bound};
}

inline void check_sharp_constants(std::vector<CheckResult>& out) {
    double worst1 = 0.0;
    double worst2 = 0.0;
    for (int n = 5; n <= 20; ++n) {
        worst1 = std::max(worst1, rel_gap(sharp_constant_kth(n, 1), sharp_constant_first_order(n)));
        worst2 =
            std::max(worst2, rel_gap(sharp_constant_kth(n, 2), sharp_constant_second_order(n)));
    }
    out.push_back(bounded("lambda_1 equals the first-order constant, n = 5..20", worst1, 1e-12));
    out.push_back(bounded("lambda_2 equals the second-order constant, n = 5..20", worst2, 1e-12));
    const double pi = 3.14159265358979323846;
    const double table = std::pow(32.0 / std::sqrt(pi), 0.8) / (105.0 * pi * pi);
    out.push_back(bounded("n = 5 constant matches its gamma-table evaluation",
                          rel_gap(sharp_constant_second_order(5), table), 1e-12));
}

inline void check_extremal_quotient(std::vector<CheckResult>& out) {
    double worst = 0.0;
    double spread = 0.0;
    for (int n = 5; n <= 10; ++n) {
        const double k0 = sharp_constant_second_order(n);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const double lam : {0.25, 1.0, 4.0}) {
            const double q = euclidean_ssi_ratio(n, lam);
            worst = std::max(worst, rel_gap(q, k0));
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        spread = std::max(spread, (hi - lo) / k0);
    }
    out.push_back(bounded("flat extremal quotient reproduces K0, n = 5..10", worst, 1e-6));
    out.push_back(bounded("quotient is scale-invariant across lambda", spread, 1e-6));
}

inline void check_flat_ode(std::vector<CheckResult>& out) {
    double worst = 0.0;
    const std::vector<double> grid = default_lambda_grid();
    for (int n = 5; n <= 10; ++n) {
        const double k0 = sharp_constant_second_order(n);
        for (const double c : {k0, 1.5 * k0}) {
            const double kappa = std::pow(k0 / c, 0.25 * n);
            for (const double lam : grid) {
                const GDerivatives d = euclidean_G_derivatives(lam, n);
                const OdeTerms t = comparison_ode_terms(
                    n, c, lam, kappa * (d.value - lam * d.first), -kappa * lam * d.second);
                worst = std::max(worst, std::fabs(t.lhs - t.rhs) / t.rhs);
            }
        }
    }
    out.push_back(
        bounded("flat comparison relation closes, n = 5..10, C in {K0, 1.5 K0}", worst, 1e-8));
}

inline void check_kernel_integrals(std::vector<CheckResult>& out) {
    double worst_g = 0.0;
    double worst_i1 = 0.0;
    for (int n = 5; n <= 8; ++n) {
        const VolumeProfile flat = VolumeProfile::euclidean(n);
        for (const double lam : {0.5, 1.0, 2.0}) {
            worst_g = std::max(worst_g, rel_gap(profile_F(flat, lam, 0), euclidean_G(lam, n)));
            auto kernel = [n, lam](double t) {
                return ((n - 1.0) * lam + t * t) * pow_ratio(t, n + 1.0, lam, double(n));
            };
            const double quad = integrate_semi_infinite(kernel, 1e-10, std::sqrt(lam)).value;
            worst_i1 = std::max(worst_i1, rel_gap(kernel_I1(lam, n), quad));
        }
    }
    out.push_back(bounded("layer-cake quadrature recovers G, n = 5..8", worst_g, 1e-8));
    out.push_back(bounded("closed-form tail kernel matches quadrature", worst_i1, 1e-8));
    out.push_back(bounded("n = 5 tail kernel at lambda = 1",
                          rel_gap(kernel_I1(1.0, 5), 0.674951546669682), 1e-12));
}

inline void check_recursion_chain(std::vector<CheckResult>& out) {
    const MunnRecursionValue c11 = munn_C(1, 5, 1);
    const bool exact_ok = c11.exact.has_value() && *c11.exact == BigInt("10554638349");
    out.push_back({"first chain constant comes out exactly", exact_ok, exact_ok ? 0.0 : 1.0, 1.0});

    double worst_ln = 0.0;
    for (int n = 5; n <= 7; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int i = 1; i <= k; ++i) {
                const MunnRecursionValue v = munn_C(k, n, i);
                if (!v.exact.has_value()) {
                    worst_ln = std::numeric_limits<double>::infinity();
                    continue;
                }
                worst_ln = std::max(
                    worst_ln, std::fabs(double(ln_of_integer(*v.exact) - v.value.ln_long())));
            }
    out.push_back(bounded("log and exact backends agree, k <= 3, n <= 7", worst_ln, 1e-12));

    double worst_delta = 0.0;
    for (int n = 5; n <= 10; ++n)
        for (int k = 1; k <= n; ++k)
            worst_delta =
                std::max(worst_delta, std::fabs(munn_delta_residual(k, n, munn_delta(k, n))));
    out.push_back(bounded("delta solves its defining equation, k <= n <= 10", worst_delta, 1e-12));

    bool decreasing = true;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int n = 5; n <= 10; ++n) {
        double prev = munn_alpha(1, n).ln_one_minus_alpha;
        for (int k = 2; k <= n; ++k) {
            const double cur = munn_alpha(k, n).ln_one_minus_alpha;
            worst_gap = std::max(worst_gap, cur - prev);
            decreasing = decreasing && cur < prev;
            prev = cur;
        }
    }
    out.push_back({"ln(1 - alpha) falls strictly in k, n = 5..10", decreasing, worst_gap, 0.0});

    bool flagged = true;
    double least_mismatch = std::numeric_limits<double>::infinity();
    for (int n = 5; n <= 10; ++n) {
        const ThresholdConsistency tc = threshold_consistency(n);
        flagged = flagged && !tc.consistent;
        least_mismatch =
            std::min(least_mismatch, std::fabs(tc.ln_ratio_literal - tc.ln_ratio_claimed));
    }
    out.push_back({"k = 1 threshold identity is flagged inconsistent, not fatal", flagged,
                   least_mismatch, 1e-9});
}

inline void check_profile_moments(std::vector<CheckResult>& out) {
    double worst_flat = 0.0;
    for (const int n : {5, 6}) {
        const VolumeProfile flat = VolumeProfile::euclidean(n);
        for (const double lam : {0.01, 1.0, 100.0}) {
            const GDerivatives d = euclidean_G_derivatives(lam, n);
            worst_flat = std::max({worst_flat, rel_gap(profile_F(flat, lam, 0), d.value),
                                   rel_gap(profile_F(flat, lam, 1), d.first),
                                   rel_gap(profile_F(flat, lam, 2), d.second)});
        }
    }
    out.push_back(bounded("flat moments reproduce G and its derivatives", worst_flat, 1e-8));

    const VolumeProfile pinched = VolumeProfile::ratio_family(5, 0.8, 1.0, 2.0);
    double worst_fd = 0.0;
    for (const double lam : {0.01, 1.0, 100.0}) {
        const double h = 0.01 * lam;
        for (const int order : {0, 1}) {
            auto f = [&](double x) { return profile_F(pinched, x, order, 1e-12); };
            const double stencil =
                (-f(lam + 2 * h) + 8 * f(lam + h) - 8 * f(lam - h) + f(lam - 2 * h)) / (12 * h);
            worst_fd =
                std::max(worst_fd, rel_gap(stencil, profile_F(pinched, lam, order + 1, 1e-12)));
        }
    }
    out.push_back(bounded("moment derivatives match difference quotients", worst_fd, 1e-6));

    double worst_ratio = 0.0;
    const double k0 = sharp_constant_second_order(5);
    const VolumeProfile flat5 = VolumeProfile::euclidean(5);
    for (const double c : {k0, 2.0 * k0}) {
        const double expect = std::pow(c / k0, 1.25);
        const ComparisonTrace tr = comparison_trace(flat5, c, default_lambda_grid());
        for (const TracePoint& pt : tr.points)
            worst_ratio = std::max(worst_ratio, rel_gap(pt.F0 / pt.G0, expect));
    }
    out.push_back(bounded("flat F0/G0 sits at (C/K0)^{n/4} across the grid", worst_ratio, 1e-8));
}

inline void check_sign_scan(std::vector<CheckResult>& out) {
    const VolumeProfile prof = VolumeProfile::ratio_family(5, 0.5, 1.0, 2.0);
    const std::vector<double> grid = default_lambda_grid();

    const Ineq9Scan tight = ineq9_scan(prof, 0.8, grid);
    double min_tight = std::numeric_limits<double>::infinity();
    for (const Ineq9Point& pt : tight.points) min_tight = std::min(min_tight, pt.value);
    out.push_back({"b above the tail ratio drives the functional negative",
                   tight.first_negative_lambda.has_value() && min_tight < 0.0, min_tight, 0.0});

    const Ineq9Scan matched = ineq9_scan(prof, 0.5, grid);
    double min_matched = std::numeric_limits<double>::infinity();
    for (const Ineq9Point& pt : matched.points) min_matched = std::min(min_matched, pt.value);
    out.push_back({"b at the tail ratio keeps the functional nonnegative",
                   !matched.first_negative_lambda.has_value() && min_matched >= 0.0, min_matched,
                   0.0});
}

inline void check_decisions(std::vector<CheckResult>& out) {
    const double k0 = sharp_constant_second_order(5);

    const RigidityReport at = decide(5, k0);
    const bool at_ok = at.isometric_to_euclidean && at.volume_bound.has_value()
                       && *at.volume_bound == 1.0 && at.contractible.value_or(false);
    out.push_back({"the sharp constant itself reads as flat space", at_ok, at_ok ? 0.0 : 1.0, 1.0});

    const RigidityReport near = decide(5, 1.1 * k0);
    const double gap = rel_gap(near.volume_bound.value_or(0.0), std::pow(1.0 / 1.1, 1.25));
    const bool near_ok = gap < 1e-12 && near.pi1_order_bound.value_or(0) == 1
                         && near.simply_connected.value_or(false);
    out.push_back(
        {"slightly above: volume bound, order bound, simple connectivity", near_ok, gap, 1e-12});

    bool monotone = true;
    bool roundtrip = true;
    RigidityReport prev = decide(5, 0.9 * k0);
    for (int i = 1; i < 100; ++i) {
        const RigidityReport cur = decide(5, k0 * (0.9 + 2.6 * i / 99.0));
        if (prev.homotopy_vanishing_level && cur.homotopy_vanishing_level)
            monotone =
                monotone && *cur.homotopy_vanishing_level <= *prev.homotopy_vanishing_level;
        if (prev.pi1_order_bound && cur.pi1_order_bound)
            monotone = monotone && *cur.pi1_order_bound >= *prev.pi1_order_bound;
        if (prev.simply_connected && cur.simply_connected)
            monotone = monotone && !(!*prev.simply_connected && *cur.simply_connected);
        monotone = monotone && cur.ssi_admissible >= prev.ssi_admissible;
        roundtrip = roundtrip && parse_report(serialize_report(cur)) == cur;
        prev = cur;
    }
    out.push_back(
        {"decisions move one way along a 100-point C sweep", monotone, monotone ? 0.0 : 1.0, 1.0});
    out.push_back(
        {"reports survive a serialize/parse round trip", roundtrip, roundtrip ? 0.0 : 1.0, 1.0});
}

inline void check_envelope(std::vector<CheckResult>& out) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> exponent(-3.0, 3.0);
    bool all_hold = true;
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 5 + trial % 6;
        const double lam = std::pow(10.0, exponent(rng));
        const double rho = std::pow(10.0, exponent(rng));
        for (const double a : {n - 5.0, n - 4.0, n - 3.0, n - 2.0, n - 1.0}) {
            const EnvelopeReport r = laplacian_envelope_check({n, lam, rho, a});
            all_hold = all_hold && r.holds;
            worst = std::max(worst, std::fabs(r.expression) / r.envelope);
        }
    }
    out.push_back({"envelope holds across 10^4 random scales, admissible slopes", all_hold, worst,
                   1.0 + 1e-12});

    const EnvelopeReport outside = laplacian_envelope_check({5, 1e-3, 10.0, -1.0});
    out.push_back({"slope below the admissible range breaks the envelope", !outside.holds,
                   std::fabs(outside.expression) / outside.envelope, 1.0});
}

struct CriterionSpec {
    int index = 0;
    const char* title = "";
    double time_limit_seconds = 0.0;
    void (*body)(std::vector<CheckResult>&) = nullptr;
};

inline const std::vector<CriterionSpec>& criterion_specs() {
    static const std::vector<CriterionSpec> specs = {
        {1, "sharp constants against closed forms", 1.0, check_sharp_constants},
        {2, "flat extremal quotient", 10.0, check_extremal_quotient},
        {3, "flat comparison relation", 5.0, check_flat_ode},
        {4, "kernel integrals against quadrature", 5.0, check_kernel_integrals},
        {5, "combinatorial chain and thresholds", 10.0, check_recursion_chain},
        {6, "profile moments and derivatives", 10.0, check_profile_moments},
        {7, "sign scan of the volume functional", 20.0, check_sign_scan},
        {8, "rigidity decisions", 1.0, check_decisions},
        {9, "distance-Laplacian envelope", 1.0, check_envelope},
    };
    return specs;
}

}  // namespace detail

inline CriterionReport run_criterion(int index) {
    for (const detail::CriterionSpec& spec : detail::criterion_specs()) {
        if (spec.index != index) continue;
        CriterionReport rep;
        rep.index = spec.index;
        rep.title = spec.title;
        rep.time_limit_seconds = spec.time_limit_seconds;
        const auto start = std::chrono::steady_clock::now();
        spec.body(rep.checks);
        rep.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return rep;
    }
    throw std::domain_error("run_criterion: index must be 1..9, got " + std::to_string(index));
}

inline std::vector<CriterionReport> run_criteria(const std::vector<int>& indices) {
    std::vector<CriterionReport> reports;
    reports.reserve(indices.size());
    for (const int i : indices) reports.push_back(run_criterion(i));
    return reports;
}

inline std::vector<int> suite_criteria(const std::string& selector) {
    if (selector == "constants") return {1};
    if (selector == "extremal") return {2};
    if (selector == "ode") return {3};
    if (selector == "munn") return {5};
    if (selector == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9};
    throw std::domain_error("unknown suite '" + selector
                            + "' (expected constants, extremal, ode, munn, or all)");
}

}  // namespace sobrig
