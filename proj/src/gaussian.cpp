#include "repoopt/gaussian.hpp"

#include "repoopt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace repoopt {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Normalised option value G(x) = E[(Z + x)^+] = x Phi(x) + phi(x).
// Only called with x <= 0 (out of the money), where it is small and positive.
double otm_option_value(double x) {
    return std::max(0.0, x * std::erfc(-x * kInvSqrt2) * 0.5 + std_normal_pdf(x));
}

} // namespace

void validate(const GaussianParams& g) {
    if (!std::isfinite(g.mean))
        throw ValidationError("gaussian mean must be finite");
    if (!std::isfinite(g.sd) || g.sd < 0.0)
        throw ValidationError("gaussian sd must be finite and non-negative");
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double censored_min_mean(double strike, const GaussianParams& g) {
    validate(g);
    const double floor = std::min(strike, g.mean);
    if (g.sd == 0.0)
        return floor;
    const double d = std::abs(g.mean - strike) / g.sd;
    return floor - g.sd * otm_option_value(-d);
}

double censored_max_mean(double strike, const GaussianParams& g) {
    validate(g);
    const double cap = std::max(strike, g.mean);
    if (g.sd == 0.0)
        return cap;
    const double d = std::abs(g.mean - strike) / g.sd;
    return cap + g.sd * otm_option_value(-d);
}

double put_payoff_mean(double strike, const GaussianParams& g) {
    validate(g);
    const double intrinsic = std::max(strike - g.mean, 0.0);
    if (g.sd == 0.0)
        return intrinsic;
    const double d = std::abs(g.mean - strike) / g.sd;
    return intrinsic + g.sd * otm_option_value(-d);
}

double censored_min_sd(double strike, const GaussianParams& g) {
    validate(g);
    if (g.sd == 0.0)
        return 0.0;
    // Standardised strike c; min(K, X) = mu + sd * min(c, Z).
    const double c = (strike - g.mean) / g.sd;
    double variance = 0.0;
    if (c <= 0.0) {
        // min(c, Z) = c - (c - Z)^+ and (c - Z)^+ has the law of (W - a)^+, a = -c >= 0.
        const double a = -c;
        const double tail = 0.5 * std::erfc(a * kInvSqrt2);
        const double dens = std_normal_pdf(a);
        const double m1 = dens - a * tail;
        const double m2 = (1.0 + a * a) * tail - a * dens;
        variance = m2 - m1 * m1;
    } else {
        const double upper = 0.5 * std::erfc(c * kInvSqrt2);
        const double dens = std_normal_pdf(c);
        const double m1 = c * upper - dens;
        const double m2 = (1.0 - upper) - c * dens + c * c * upper;
        variance = m2 - m1 * m1;
    }
    return g.sd * std::sqrt(std::clamp(variance, 0.0, 1.0));
}

} // namespace repoopt
