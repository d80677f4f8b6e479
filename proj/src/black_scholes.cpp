#include "repoopt/black_scholes.hpp"

#include "repoopt/errors.hpp"
#include "repoopt/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace repoopt {

namespace {

struct DTerms {
    double d1;
    double d2;
};

DTerms d_terms(const BsInputs& in) {
    const double vol_sqrt_t = in.vol * std::sqrt(in.tenor);
    const double d1 = (std::log(in.spot / in.strike) + (in.rate + 0.5 * in.vol * in.vol) * in.tenor) / vol_sqrt_t;
    return {d1, d1 - vol_sqrt_t};
}

} // namespace

void validate(const BsInputs& in) {
    if (!(in.spot > 0.0) || !std::isfinite(in.spot))
        throw ValidationError("black-scholes spot must be positive");
    if (!(in.strike > 0.0) || !std::isfinite(in.strike))
        throw ValidationError("black-scholes strike must be positive");
    if (!(in.vol >= 0.0) || !std::isfinite(in.vol))
        throw ValidationError("black-scholes vol must be non-negative");
    if (!(in.tenor > 0.0) || !std::isfinite(in.tenor))
        throw ValidationError("black-scholes tenor must be positive");
    if (!std::isfinite(in.rate))
        throw ValidationError("black-scholes rate must be finite");
}

double bs_call(const BsInputs& in) {
    validate(in);
    const double discounted_strike = in.strike * std::exp(-in.rate * in.tenor);
    if (in.vol == 0.0)
        return std::max(in.spot - discounted_strike, 0.0);
    const auto [d1, d2] = d_terms(in);
    return in.spot * std_normal_cdf(d1) - discounted_strike * std_normal_cdf(d2);
}

double bs_put(const BsInputs& in) {
    validate(in);
    const double discounted_strike = in.strike * std::exp(-in.rate * in.tenor);
    if (in.vol == 0.0)
        return std::max(discounted_strike - in.spot, 0.0);
    const auto [d1, d2] = d_terms(in);
    return discounted_strike * std_normal_cdf(-d2) - in.spot * std_normal_cdf(-d1);
}

} // namespace repoopt
