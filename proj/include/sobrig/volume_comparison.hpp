#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sobrig/quadrature.hpp"
#include "sobrig/sharp_constants.hpp"
#include "sobrig/volume_profile.hpp"

namespace sobrig {

inline std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(std::pow(10.0, -3.0 + 6.0 * i / 40.0));
    return grid;
}

// F, F', F'' as moments of the profile: order 0 uses kernel (lambda+t^2)^{1-n} with
// weight 2(n-2); differentiating under the integral raises the exponent by one per
// order, so F'' carries (lambda+t^2)^{-(n+1)}
inline double profile_F(const VolumeProfile& prof, double lambda, int order,
                        double rel_tol = 1e-10) {
    detail::require_positive(lambda, "profile_F: lambda");
    if (order < 0 || order > 2) throw std::domain_error("profile_F: order must be 0, 1, or 2");
    const int n = prof.n;
    const double m = n - 1.0 + order;
    const double coeff = order == 0   ? 2.0 * (n - 2)
                         : order == 1 ? -2.0 * (n - 2) * (n - 1)
                                      : 2.0 * (n - 2) * (n - 1) * n;
    const double omega = unit_ball_volume(n);
    auto integrand = [&prof, lambda, n, m](double t) {
        return prof.theta(t) * detail::pow_ratio(t, n + 1.0, lambda, m);
    };
    const QuadratureResult q = integrate_semi_infinite(integrand, rel_tol, std::sqrt(lambda));
    return coeff * omega * q.value;
}

inline double odi_residual(const VolumeProfile& prof, double C, double lambda) {
    const double f0 = profile_F(prof, lambda, 0) - lambda * profile_F(prof, lambda, 1);
    const double f0_prime = -lambda * profile_F(prof, lambda, 2);
    const OdeTerms t = comparison_ode_terms(prof.n, C, lambda, f0, f0_prime);
    return t.lhs - t.rhs;
}

// top of the monotone window of phi_lambda(t) = t^{(n-4)/n} - C(n-2)^2(n-4)^2 lambda^2 t
inline double phi_t_lambda(int n, double C, double lambda) {
    detail::require_min_dimension(n, 5, "phi_t_lambda");
    detail::require_positive(C, "phi_t_lambda: C");
    detail::require_positive(lambda, "phi_t_lambda: lambda");
    return std::exp(-0.5 * n * std::log(lambda)
                    - 0.25 * n * std::log(C * n * (n - 4.0) * (n - 2.0) * (n - 2.0)));
}

struct PhiWindowReport {
    double t_lambda = 0.0;
    bool within_window = false;  // t <= t_lambda
    double phi_prime = 0.0;
    bool phi_monotone = false;   // phi'(t) >= 0 up to rounding
};

inline PhiWindowReport phi_window_check(int n, double C, double lambda, double t) {
    detail::require_positive(t, "phi_window_check: t");
    PhiWindowReport r;
    r.t_lambda = phi_t_lambda(n, C, lambda);
    r.within_window = t <= r.t_lambda;
    const double drag = C * (n - 2.0) * (n - 2.0) * (n - 4.0) * (n - 4.0) * lambda * lambda;
    r.phi_prime = (n - 4.0) / n * std::pow(t, -4.0 / n) - drag;
    r.phi_monotone = r.phi_prime >= -1e-12 * drag;
    return r;
}

struct ProfileWindowReport {
    double t_lambda = 0.0;
    double curvature_point = 0.0;  // -F0'/(lambda (n-2)(n-1)) = F''/((n-2)(n-1))
    bool within_window = false;
};

inline ProfileWindowReport phi_window_check(const VolumeProfile& prof, double C, double lambda) {
    ProfileWindowReport r;
    r.t_lambda = phi_t_lambda(prof.n, C, lambda);
    r.curvature_point = profile_F(prof, lambda, 2) / ((prof.n - 2.0) * (prof.n - 1.0));
    r.within_window = r.curvature_point <= r.t_lambda * (1.0 + 1e-8);
    return r;
}

// I1(lambda) = closed form of the n-th moment of f(lambda,t) = ((n-1)lambda+t^2) t (lambda+t^2)^{-n}
inline double kernel_I1(double lambda, int n) {
    detail::require_min_dimension(n, 5, "kernel_I1");
    detail::require_positive(lambda, "kernel_I1: lambda");
    const double ln_pref = (1.0 - n) * detail::ln_2 + 0.5 * detail::ln_pi
                           + std::log(double(n) * n - 4.0 * n + 6.0) + log_gamma(0.5 * n + 1.0)
                           - std::log(n - 2.0) - std::log(n - 4.0) - log_gamma(0.5 * (n + 1));
    return std::exp(ln_pref) * std::pow(lambda, 0.5 * (4 - n));
}

// integral of (v(t) - b omega_n t^n) f(lambda,t): the constant-tail part is the exact
// kernel moment, the remainder decays and is truncated once its analytic bound is
// negligible against the value's natural scale
inline double ineq9_value(const VolumeProfile& prof, double b, double lambda) {
    detail::require_positive(lambda, "ineq9_value: lambda");
    if (!(b > 0.0) || b > 1.0) throw std::domain_error("ineq9_value: b must lie in (0,1]");
    const int n = prof.n;
    const double omega = unit_ball_volume(n);
    const double th_tail = prof.theta_tail();
    const double i1 = kernel_I1(lambda, n);
    double head = 0.0;
    if (prof.kind != ProfileKind::euclidean) {
        const double scale = std::sqrt(lambda);
        double T = 0.0;
        if (prof.kind == ProfileKind::tabulated) {
            T = prof.knot_t.back();  // theta is exactly constant beyond the last knot
        } else {
            const double ref = i1 * std::fmax(std::fabs(th_tail - b), 0.01);
            T = std::fmax(10.0 * scale, 10.0 * prof.scale());
            for (int it = 0; it < 60; ++it) {
                const double dev = std::fabs(prof.theta(T) - th_tail);
                const double bound =
                    dev
                    * ((n - 1.0) * lambda * std::exp((2.0 - n) * std::log(T)) / (n - 2.0)
                       + std::exp((4.0 - n) * std::log(T)) / (n - 4.0));
                if (bound <= 1e-12 * ref) break;
                T *= 10.0;
            }
        }
        auto g = [&prof, lambda, n, th_tail, scale](double s) {
            const double t = scale * s / (1.0 - s);
            const double jac = scale / ((1.0 - s) * (1.0 - s));
            const double dev = prof.theta(t) - th_tail;
            if (dev == 0.0) return 0.0;
            return dev * ((n - 1.0) * lambda + t * t)
                   * detail::pow_ratio(t, n + 1.0, lambda, double(n)) * jac;
        };
        head = integrate_finite(g, 0.0, T / (scale + T), 1e-10).value;
    }
    return omega * (head + (th_tail - b) * i1);
}

struct Ineq9Point {
    double lambda = 0.0;
    double value = 0.0;
};

struct Ineq9Scan {
    std::vector<Ineq9Point> points;
    std::optional<double> first_negative_lambda;
};

inline Ineq9Scan ineq9_scan(const VolumeProfile& prof, double b,
                            const std::vector<double>& grid) {
    Ineq9Scan scan;
    for (const double lam : grid) {
        const double v = ineq9_value(prof, b, lam);
        scan.points.push_back({lam, v});
        if (v < 0.0 && !scan.first_negative_lambda) scan.first_negative_lambda = lam;
    }
    return scan;
}

struct TracePoint {
    double lambda = 0.0;
    double F = 0.0;
    double F_prime = 0.0;
    double F_second = 0.0;
    double F0 = 0.0;
    double G0 = 0.0;
    double odi_residual = 0.0;
    bool window_ok = false;
    double ineq9_value = 0.0;
    bool F0_ge_G0 = false;  // up to quadrature noise, so equality cases stay true
};

struct ComparisonTrace {
    int n = 0;
    double C = 0.0;
    double b = 1.0;  // the b the ineq9 column was evaluated at
    std::vector<TracePoint> points;
};

inline ComparisonTrace comparison_trace(const VolumeProfile& prof, double C,
                                        const std::vector<double>& grid, double b) {
    detail::require_positive(C, "comparison_trace: C");
    ComparisonTrace trace;
    trace.n = prof.n;
    trace.C = C;
    trace.b = b;
    const double kappa = std::pow(sharp_constant_second_order(prof.n) / C, 0.25 * prof.n);
    for (const double lam : grid) {
        TracePoint pt;
        pt.lambda = lam;
        pt.F = profile_F(prof, lam, 0);
        pt.F_prime = profile_F(prof, lam, 1);
        pt.F_second = profile_F(prof, lam, 2);
        pt.F0 = pt.F - lam * pt.F_prime;
        const GDerivatives g = euclidean_G_derivatives(lam, prof.n);
        pt.G0 = kappa * (g.value - lam * g.first);
        const OdeTerms terms = comparison_ode_terms(prof.n, C, lam, pt.F0, -lam * pt.F_second);
        pt.odi_residual = terms.lhs - terms.rhs;
        pt.window_ok = pt.F_second / ((prof.n - 2.0) * (prof.n - 1.0))
                       <= phi_t_lambda(prof.n, C, lam) * (1.0 + 1e-8);
        pt.ineq9_value = ineq9_value(prof, b, lam);
        pt.F0_ge_G0 = pt.F0 >= pt.G0 * (1.0 - 1e-9);
        trace.points.push_back(pt);
    }
    return trace;
}

inline ComparisonTrace comparison_trace(const VolumeProfile& prof, double C,
                                        const std::vector<double>& grid) {
    return comparison_trace(prof, C, grid, asymptotic_ratio(prof));
}

struct EnvelopeInput {
    int n = 0;
    double lambda = 0.0;
    double rho = 0.0;
    double a = 0.0;  // the rho * (distance Laplacian) value under test
};

struct EnvelopeReport {
    double expression = 0.0;  // lambda + (3-n) rho^2 + (lambda+rho^2) a
    double envelope = 0.0;    // 2 rho^2 + n lambda
    bool holds = false;
};

inline EnvelopeReport laplacian_envelope_check(const EnvelopeInput& e) {
    detail::require_min_dimension(e.n, 5, "laplacian_envelope_check");
    detail::require_positive(e.lambda, "laplacian_envelope_check: lambda");
    if (e.rho < 0.0)
        throw std::domain_error("laplacian_envelope_check: rho must be nonnegative");
    EnvelopeReport r;
    const double rho2 = e.rho * e.rho;
    r.expression = e.lambda + (3.0 - e.n) * rho2 + (e.lambda + rho2) * e.a;
    r.envelope = 2.0 * rho2 + e.n * e.lambda;
    r.holds = std::fabs(r.expression) <= r.envelope * (1.0 + 1e-12);
    return r;
}

struct GrowthCondition {
    bool holds = false;
    double rho_laplacian = 0.0;  // implied rho * Laplacian of the distance
};

inline GrowthCondition growth_condition_check(int n, double rho, double density_log_deriv) {
    detail::require_min_dimension(n, 5, "growth_condition_check");
    detail::require_positive(rho, "growth_condition_check: rho");
    GrowthCondition g;
    g.holds = density_log_deriv >= -4.0 / rho;
    g.rho_laplacian = n - 1.0 + rho * density_log_deriv;
    return g;
}

}  // namespace sobrig
