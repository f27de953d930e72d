#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sobrig {

// Nonnegative real held as sign + ln(magnitude).  Products, quotients and
// powers of values far outside the double range (think exp(-1e10)) stay
// representable; addition goes through log-sum-exp and cannot overflow.
//
// ln is stored in long double: with plain double storage the quantization of
// ln(x) near |ln x| ~ 700 already costs ~6e-14 relative on a round trip,
// which would eat the whole error budget of downstream consumers.
class LogReal {
public:
    LogReal() = default;            // zero

    static LogReal zero() { return LogReal{}; }

    static LogReal from_value(double v) {
        if (std::isnan(v) || v < 0.0)
            throw std::domain_error("LogReal::from_value: negative or NaN input");
        LogReal r;
        if (v > 0.0) {
            r.positive_ = true;
            r.ln_ = logl(static_cast<long double>(v));
        }
        return r;
    }

    static LogReal from_ln(long double ln_magnitude) {
        LogReal r;
        r.positive_ = true;
        r.ln_ = ln_magnitude;
        return r;
    }

    bool is_zero() const { return !positive_; }

    // ln(magnitude); -inf for zero so comparisons via ln stay total.
    double ln() const { return static_cast<double>(ln_long()); }
    long double ln_long() const {
        return positive_ ? ln_ : -std::numeric_limits<long double>::infinity();
    }

    // Best-effort conversion back to double: overflows to inf, underflows to 0.
    double value() const { return positive_ ? static_cast<double>(expl(ln_)) : 0.0; }

    friend LogReal operator*(const LogReal& a, const LogReal& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return from_ln(a.ln_ + b.ln_);
    }

    friend LogReal operator/(const LogReal& a, const LogReal& b) {
        if (b.is_zero()) throw std::domain_error("LogReal: division by zero");
        if (a.is_zero()) return zero();
        return from_ln(a.ln_ - b.ln_);
    }

    friend LogReal operator+(const LogReal& a, const LogReal& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const long double hi = a.ln_ > b.ln_ ? a.ln_ : b.ln_;
        const long double lo = a.ln_ > b.ln_ ? b.ln_ : a.ln_;
        return from_ln(hi + log1pl(expl(lo - hi)));
    }

    LogReal pow(double e) const {
        if (is_zero()) {
            if (e > 0.0) return zero();
            throw std::domain_error("LogReal::pow: zero base needs a positive exponent");
        }
        return from_ln(ln_ * static_cast<long double>(e));
    }

    friend bool operator==(const LogReal& a, const LogReal& b) {
        return a.positive_ == b.positive_ && (!a.positive_ || a.ln_ == b.ln_);
    }
    friend bool operator<(const LogReal& a, const LogReal& b) {
        if (a.is_zero()) return !b.is_zero();
        if (b.is_zero()) return false;
        return a.ln_ < b.ln_;
    }
    friend bool operator>(const LogReal& a, const LogReal& b) { return b < a; }
    friend bool operator<=(const LogReal& a, const LogReal& b) { return !(b < a); }
    friend bool operator>=(const LogReal& a, const LogReal& b) { return !(a < b); }

private:
    bool positive_ = false;
    long double ln_ = 0.0L;
};

}  // namespace sobrig
