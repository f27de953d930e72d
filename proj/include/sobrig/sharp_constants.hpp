#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "sobrig/log_gamma.hpp"
#include "sobrig/quadrature.hpp"

namespace sobrig {

namespace detail {

inline constexpr double ln_pi = 1.1447298858494001741434273513530587116;
inline constexpr double ln_2 = 0.6931471805599453094172321214581765680;

inline void require_min_dimension(int n, int min_n, const char* what) {
    if (n < min_n)
        throw std::domain_error(std::string(what) + " requires n >= " + std::to_string(min_n)
                                + ", got n = " + std::to_string(n));
}

inline void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::domain_error(std::string(what) + " must be positive");
}

// ln(Gamma(n) / Gamma(n/2)) without forming either value
inline double ln_gamma_ratio(int n) {
    return log_gamma(double(n)) - log_gamma(0.5 * n);
}

// t^p / (lambda + t^2)^m, stable when either power would overflow on its own
inline double pow_ratio(double t, double p, double lambda, double m) {
    if (t == 0.0) return 0.0;
    const long double a = p * logl((long double)t);
    const long double b = m * logl((long double)lambda + (long double)t * (long double)t);
    return (double)expl(a - b);
}

}  // namespace detail

inline double unit_ball_volume(int n) {
    detail::require_min_dimension(n, 1, "unit_ball_volume");
    return std::exp(0.5 * n * detail::ln_pi - log_gamma(0.5 * n + 1.0));
}

// best constant for the k-th order inequality; empty product for k = 1
inline double sharp_constant_kth(int n, int k) {
    if (k < 1) throw std::domain_error("sharp_constant_kth requires k >= 1");
    if (n <= 2 * k)
        throw std::domain_error("sharp_constant_kth requires n > 2k, got n = " + std::to_string(n)
                                + ", k = " + std::to_string(k));
    double ln_pref = k * detail::ln_pi + std::log(double(n)) + std::log(double(n - 2 * k));
    for (int i = 1; i < k; ++i) ln_pref += std::log(double(n * n - 4 * i * i));
    return std::exp(2.0 * k / n * detail::ln_gamma_ratio(n) - ln_pref);
}

inline double sharp_constant_second_order(int n) {
    detail::require_min_dimension(n, 5, "sharp_constant_second_order");
    const double ln_pref = 2.0 * detail::ln_pi + std::log(double(n)) + std::log(double(n - 4))
                           + std::log(double(n * n - 4));
    return std::exp(4.0 / n * detail::ln_gamma_ratio(n) - ln_pref);
}

inline double sharp_constant_first_order(int n) {
    detail::require_min_dimension(n, 3, "sharp_constant_first_order");
    const double ln_pref = detail::ln_pi + std::log(double(n)) + std::log(double(n - 2));
    return std::exp(2.0 / n * detail::ln_gamma_ratio(n) - ln_pref);
}

struct EuclideanConstants {
    int n = 0;
    double K0 = 0.0;
    double c0 = 0.0;
    double omega_n = 0.0;
    double two_sharp = 0.0;     // critical exponent 2n/(n-4)
    double window_upper = 0.0;  // (n+2)/(n-2) * K0, top of the volume-bound window

    static EuclideanConstants for_dimension(int n) {
        detail::require_min_dimension(n, 5, "EuclideanConstants");
        EuclideanConstants c;
        c.n = n;
        c.K0 = sharp_constant_second_order(n);
        c.c0 = sharp_constant_first_order(n);
        c.omega_n = unit_ball_volume(n);
        c.two_sharp = 2.0 * n / (n - 4.0);
        c.window_upper = (n + 2.0) / (n - 2.0) * c.K0;
        return c;
    }
};

// G(lambda) = 2^{4-n} pi^{(n+1)/2} / ((n-4) Gamma((n-1)/2)) * lambda^{(4-n)/2};
// the power law is applied to a cached-form prefactor so dilation scaling is exact
inline double euclidean_G(double lambda, int n) {
    detail::require_min_dimension(n, 5, "euclidean_G");
    detail::require_positive(lambda, "euclidean_G: lambda");
    const double at_one = std::exp((4.0 - n) * detail::ln_2 + 0.5 * (n + 1) * detail::ln_pi
                                   - std::log(double(n - 4)) - log_gamma(0.5 * (n - 1)));
    return at_one * std::pow(lambda, 0.5 * (4 - n));
}

struct GDerivatives {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

inline GDerivatives euclidean_G_derivatives(double lambda, int n) {
    const double g = euclidean_G(lambda, n);
    const double p = 0.5 * (4 - n);
    return {g, p * g / lambda, p * (p - 1.0) * g / (lambda * lambda)};
}

struct OdeTerms {
    double lhs = 0.0;
    double rhs = 0.0;
};

// both sides of the comparison relation at a point, given F0 and F0'; the same
// shape serves the flat-space identity (equality) and the manifold bound (<=)
inline OdeTerms comparison_ode_terms(int n, double C, double lambda, double f0, double f0_prime) {
    detail::require_min_dimension(n, 5, "comparison_ode_terms");
    detail::require_positive(C, "comparison_ode_terms: C");
    detail::require_positive(lambda, "comparison_ode_terms: lambda");
    const double base = -f0_prime / (lambda * (n - 2.0) * (n - 1.0));
    if (base < 0.0)
        throw std::domain_error("comparison_ode_terms: -F0' must be nonnegative");
    const double lhs = std::pow(base, (n - 4.0) / n);
    const double rhs =
        C * (n - 4.0) * (n - 4.0) * (4.0 * f0 - (n - 2.0) / (n - 1.0) * lambda * f0_prime);
    return {lhs, rhs};
}

// LHS - RHS at G0 = (K0/C)^{n/4} (G - lambda G'); zero analytically for every C
inline double euclidean_ode_residual(double lambda, int n, double C) {
    detail::require_positive(C, "euclidean_ode_residual: C");
    const GDerivatives d = euclidean_G_derivatives(lambda, n);
    const double kappa = std::pow(sharp_constant_second_order(n) / C, 0.25 * n);
    const double g0 = kappa * (d.value - lambda * d.first);
    const double g0_prime = -kappa * lambda * d.second;
    const OdeTerms t = comparison_ode_terms(n, C, lambda, g0, g0_prime);
    return t.lhs - t.rhs;
}

// (int |u|^{2#})^{2/2#} / int (Delta u)^2 for u = (lambda+r^2)^{(4-n)/2}, by radial
// quadrature; (Delta u)^2 = (n-4)^2 (lambda+r^2)^{-n} (2r^2+n lambda)^2 in flat space
inline double euclidean_ssi_ratio(int n, double lambda) {
    detail::require_min_dimension(n, 5, "euclidean_ssi_ratio");
    detail::require_positive(lambda, "euclidean_ssi_ratio: lambda");
    const double scale = std::sqrt(lambda);
    auto mass = [n, lambda](double r) { return detail::pow_ratio(r, n - 1.0, lambda, double(n)); };
    auto bilap = [n, lambda](double r) {
        const double s = 2.0 * r * r + n * lambda;
        return detail::pow_ratio(r, n - 1.0, lambda, double(n)) * s * s;
    };
    const double sphere = n * unit_ball_volume(n);
    const QuadratureResult num = integrate_semi_infinite(mass, 1e-10, scale);
    const QuadratureResult den = integrate_semi_infinite(bilap, 1e-10, scale);
    const double p = (n - 4.0) / n;
    return std::pow(sphere * num.value, p) / ((n - 4.0) * (n - 4.0) * sphere * den.value);
}

}  // namespace sobrig
