#pragma once

#include "repoopt/gaussian.hpp"
#include "repoopt/market.hpp"

#include <span>
#include <vector>

namespace repoopt {

/// Output of the general-repo pipeline. Rates marked "per annum" use the
/// market's day count; `revenue_sd` is relative to the spot price.
struct GeneralRepoQuote {
    double repurchase_price = 0.0;  // Q1
    double lent_amount = 0.0;       // Q0
    double haircut = 0.0;           // H_c = P0 - Q0, price of the implicit call
    double haircut_rate = 0.0;      // h_c = H_c / P0
    double repo_rate = 0.0;         // per annum
    double lender_rate = 0.0;       // <r_L>, per annum
    double revenue_mean = 0.0;      // <M_g> = E[min(Q1, P)]
    double revenue_sd = 0.0;        // sd of M_g as a fraction of P0
    double revenue_sd_abs = 0.0;    // same, in currency
    double option_value_mean = 0.0; // <V> = <P> - <M_g>
    double option_yield = 0.0;      // <r_V>, per period
    double forward_mean = 0.0;      // <P>
};

/// Normal law of the forward price over the repo period.
GaussianParams forward_gaussian(const MarketParams& m);

/// Q1 = (1 - k * sigma_period) * <P>, i.e. k period standard deviations below the forward mean.
double strike_from_sigma_multiple(const MarketParams& m, double k);

/// Prices the implicit call with the ergodic rate model.
///
/// The lender's expected rate is r_rf + (<r_S> - r_rf) * (sd(M_g) / sd(P))^2
/// with both deviations taken per period relative to P0, and the cash lent is
/// the expected revenue discounted over one period at that rate.
///
/// Throws ValidationError for zero volatility or a non-positive Q1, and
/// PricingError when the resulting haircut is not positive.
GeneralRepoQuote price_general_repo(const MarketParams& m, double repurchase_price);

/// Black-Scholes price of the implicit call (spot P0, strike Q1, risk-free rate,
/// collateral volatility, period length).
double bs_haircut(const MarketParams& m, double repurchase_price);

/// Lender's expected rate (per annum) when the haircut is set by Black-Scholes.
/// Throws PricingError if the call is worth at least P0. Can be negative.
double lender_rate_from_bs(const MarketParams& m, double repurchase_price);

/// h_c (r_V - r_L) - (r_S - r_L) with every rate per period. Zero up to rounding
/// for any quote produced by price_general_repo.
double haircut_identity_residual(const GeneralRepoQuote& q, const MarketParams& m);

struct BsComparisonRow {
    double repurchase_price = 0.0;
    double haircut = 0.0;
    double haircut_bs = 0.0;
    double abs_gap = 0.0;
    double rel_gap = 0.0;
};

/// Ergodic-model haircut against the Black-Scholes call for each strike.
std::vector<BsComparisonRow> compare_with_bs(const MarketParams& m, std::span<const double> strikes);

} // namespace repoopt
