#pragma once

namespace repoopt {

/// Collateral and money-market inputs for a one-period repo.
///
/// Rates are per annum with simple scaling; the period is `tenor_days /
/// day_count` of a year. `volatility` is the annualized relative volatility
/// of the collateral price.
struct MarketParams {
    double spot_price = 0.0;
    double intrinsic_yield = 0.0;
    double volatility = 0.0;
    int tenor_days = 1;
    double risk_free = 0.0;
    int day_count = 360;

    /// Length of the period in years.
    double year_fraction() const { return static_cast<double>(tenor_days) / day_count; }
    double to_period(double rate_per_annum) const { return rate_per_annum * year_fraction(); }
    double to_annual(double rate_per_period) const { return rate_per_period / year_fraction(); }
};

/// Throws ValidationError unless P0 > 0, vol >= 0, tenor >= 1 and day_count is 360 or 365.
void validate(const MarketParams& m);

} // namespace repoopt
