#include "repoopt/general_repo.hpp"

#include "repoopt/black_scholes.hpp"
#include "repoopt/errors.hpp"

#include <cmath>
#include <fmt/format.h>

namespace repoopt {

GaussianParams forward_gaussian(const MarketParams& m) {
    validate(m);
    const double t = m.year_fraction();
    return {m.spot_price * (1.0 + m.intrinsic_yield * t), m.spot_price * m.volatility * std::sqrt(t)};
}

double strike_from_sigma_multiple(const MarketParams& m, double k) {
    validate(m);
    if (!(k >= 0.0) || !std::isfinite(k))
        throw ValidationError("sigma multiple must be non-negative");
    const GaussianParams fwd = forward_gaussian(m);
    const double q1 = (1.0 - k * m.volatility * std::sqrt(m.year_fraction())) * fwd.mean;
    if (!(q1 > 0.0))
        throw ValidationError(fmt::format("sigma multiple {} gives a non-positive repurchase price", k));
    return q1;
}

GeneralRepoQuote price_general_repo(const MarketParams& m, double repurchase_price) {
    validate(m);
    if (!(repurchase_price > 0.0) || !std::isfinite(repurchase_price))
        throw ValidationError("repurchase price must be positive");
    if (m.volatility == 0.0)
        throw ValidationError("volatility must be positive: the variance ratio of the ergodic lender-rate model "
                              "is undefined at zero volatility");

    const GaussianParams fwd = forward_gaussian(m);
    const double p0 = m.spot_price;

    GeneralRepoQuote q;
    q.repurchase_price = repurchase_price;
    q.forward_mean = fwd.mean;
    q.revenue_mean = censored_min_mean(repurchase_price, fwd);
    q.revenue_sd_abs = censored_min_sd(repurchase_price, fwd);
    q.revenue_sd = q.revenue_sd_abs / p0;

    // Both deviations per period and relative to P0, so the ratio is sd(M_g)/sd(P).
    const double period_vol = fwd.sd / p0;
    const double ratio = (q.revenue_sd / period_vol) * (q.revenue_sd / period_vol);
    q.lender_rate = m.risk_free + (m.intrinsic_yield - m.risk_free) * ratio;

    q.lent_amount = q.revenue_mean / (1.0 + m.to_period(q.lender_rate));
    q.haircut = p0 - q.lent_amount;
    if (!(q.haircut > 0.0))
        throw PricingError(fmt::format("implicit haircut {:.6f} is not positive; repurchase price {:.6f} is too far "
                                       "above the forward mean {:.6f}",
                                       q.haircut, repurchase_price, fwd.mean));
    q.haircut_rate = q.haircut / p0;
    q.repo_rate = m.to_annual(repurchase_price / q.lent_amount - 1.0);
    q.option_value_mean = fwd.mean - q.revenue_mean;
    q.option_yield = q.option_value_mean / q.haircut - 1.0;
    return q;
}

double bs_haircut(const MarketParams& m, double repurchase_price) {
    validate(m);
    return bs_call({.spot = m.spot_price,
                    .strike = repurchase_price,
                    .rate = m.risk_free,
                    .vol = m.volatility,
                    .tenor = m.year_fraction()});
}

double lender_rate_from_bs(const MarketParams& m, double repurchase_price) {
    const double h_bs = bs_haircut(m, repurchase_price);
    if (h_bs >= m.spot_price)
        throw PricingError("black-scholes call is worth at least the spot price");
    const double revenue = censored_min_mean(repurchase_price, forward_gaussian(m));
    return m.to_annual(revenue / (m.spot_price - h_bs) - 1.0);
}

double haircut_identity_residual(const GeneralRepoQuote& q, const MarketParams& m) {
    const double r_s = q.forward_mean / m.spot_price - 1.0;
    const double r_l = m.to_period(q.lender_rate);
    return q.haircut_rate * (q.option_yield - r_l) - (r_s - r_l);
}

std::vector<BsComparisonRow> compare_with_bs(const MarketParams& m, std::span<const double> strikes) {
    std::vector<BsComparisonRow> rows;
    rows.reserve(strikes.size());
    for (double k : strikes) {
        BsComparisonRow row;
        row.repurchase_price = k;
        row.haircut = price_general_repo(m, k).haircut;
        row.haircut_bs = bs_haircut(m, k);
        row.abs_gap = row.haircut - row.haircut_bs;
        row.rel_gap = row.abs_gap / row.haircut_bs;
        rows.push_back(row);
    }
    return rows;
}

} // namespace repoopt
