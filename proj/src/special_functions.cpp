#include "bnnlab/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bnnlab {

double ln_gamma(double a) {
    if (!(a > 0.0)) {
        throw std::domain_error("ln_gamma: shape must be positive, got " + std::to_string(a));
    }
    return std::lgamma(a);
}

namespace {

// P(a,x) by the standard power series, valid and fast for x < a+1.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) {
            break;
        }
    }
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    return std::exp(log_prefactor) * sum;
}

// Q(a,x) by the modified Lentz continued fraction, for x >= a+1.
double gamma_q_continued_fraction(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    return std::exp(log_prefactor) * h;
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) {
        throw std::domain_error("regularized_gamma_p: shape must be positive");
    }
    if (x < 0.0) {
        throw std::domain_error("regularized_gamma_p: point must be nonnegative");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x < a + 1.0) {
        return gamma_p_series(a, x);
    }
    return 1.0 - gamma_q_continued_fraction(a, x);
}

double log_lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) {
        throw std::domain_error("log_lower_incomplete_gamma: shape must be positive");
    }
    if (x < 0.0) {
        throw std::domain_error("log_lower_incomplete_gamma: point must be nonnegative");
    }
    if (x == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    if (x < a + 1.0) {
        double sum = 1.0 / a;
        double term = sum;
        for (int n = 1; n < 10000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) {
                break;
            }
        }
        return a * std::log(x) - x + std::log(sum);
    }
    return std::lgamma(a) + std::log1p(-gamma_q_continued_fraction(a, x));
}

double lower_incomplete_gamma(double a, double x) {
    if (!(a > 0.0)) {
        throw std::domain_error("lower_incomplete_gamma: shape must be positive");
    }
    if (x < 0.0) {
        throw std::domain_error("lower_incomplete_gamma: point must be nonnegative");
    }
    if (x == 0.0) {
        return 0.0;
    }
    return std::exp(log_lower_incomplete_gamma(a, x));
}

} // namespace bnnlab
