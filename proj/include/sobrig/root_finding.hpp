#pragma once

#include <cmath>
#include <stdexcept>

namespace sobrig {

// Root of f inside [lo, hi], where f changes sign and is monotone.
// Chord (secant) steps play the role of Newton steps, safeguarded by the
// bracket: a proposal outside [a,b] falls back to bisection, and Illinois
// damping prevents one-sided stagnation.  Deterministic.
// Stops when the bracket width drops below rel_tol relative to the iterate.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double rel_tol = 1e-12) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::domain_error("solve_bracketed: invalid bracket");
    if (!(rel_tol > 0.0))
        throw std::domain_error("solve_bracketed: rel_tol must be positive");

    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa < 0.0) == (fb < 0.0))
        throw std::domain_error("solve_bracketed: no sign change over the bracket");

    double best = std::fabs(fa) <= std::fabs(fb) ? a : b;
    double best_f = std::fmin(std::fabs(fa), std::fabs(fb));
    int side = 0;

    for (int it = 0; it < 200; ++it) {
        if (b - a <= rel_tol * std::fmax(std::fabs(a), std::fabs(b)) + 1e-300) break;

        double c = (a * fb - b * fa) / (fb - fa);
        if (!(c > a && c < b)) c = 0.5 * (a + b);
        const double fc = f(c);
        if (fc == 0.0) return c;
        if (std::fabs(fc) < best_f) {
            best = c;
            best_f = std::fabs(fc);
        }

        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = c;
            fb = fc;
            if (side == +1) fa *= 0.5;
            side = +1;
        }
    }
    return best;
}

}  // namespace sobrig
