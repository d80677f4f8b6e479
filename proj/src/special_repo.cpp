#include "repoopt/special_repo.hpp"

#include "repoopt/black_scholes.hpp"
#include "repoopt/errors.hpp"
#include "repoopt/general_repo.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace repoopt {

namespace {

constexpr double kRegimeTol = 1e-9;

void require_rate_above_minus_one(double rate, const char* name) {
    if (!(rate > -1.0) || !std::isfinite(rate))
        throw ValidationError(fmt::format("{} must be greater than -1 per period", name));
}

void require_haircut_below_one(double h, const char* name) {
    if (!(h < 1.0) || !std::isfinite(h))
        throw ValidationError(fmt::format("{} must be less than 1", name));
}

} // namespace

SpecialLenderQuote price_lender_fail(const MarketParams& m, double repurchase_price) {
    validate(m);
    if (!(repurchase_price > 0.0) || !std::isfinite(repurchase_price))
        throw ValidationError("repurchase price must be positive");

    SpecialLenderQuote q;
    q.repurchase_price = repurchase_price;
    q.premium = bs_put({.spot = m.spot_price,
                        .strike = repurchase_price,
                        .rate = m.risk_free,
                        .vol = m.volatility,
                        .tenor = m.year_fraction()});
    q.premium_rate = q.premium / m.spot_price;
    q.lent_amount = m.spot_price + q.premium;
    q.special_rate = m.to_annual(repurchase_price / q.lent_amount - 1.0);
    q.put_value_mean = put_payoff_mean(repurchase_price, forward_gaussian(m));
    q.trader_return = q.premium > 0.0 ? q.put_value_mean / q.premium - 1.0 : std::numeric_limits<double>::quiet_NaN();
    return q;
}

double fed_fee_rate(double general_rate, double special_rate, double general_haircut) {
    require_rate_above_minus_one(special_rate, "special repo rate");
    return (general_rate - special_rate) / (1.0 + special_rate) * (1.0 - general_haircut);
}

double max_fed_fee(double spot_price, double special_haircut, double general_rate, double special_rate) {
    require_haircut_below_one(special_haircut, "special haircut");
    require_rate_above_minus_one(general_rate, "general repo rate");
    return spot_price * (1.0 - special_haircut) * (general_rate - special_rate) / (1.0 + general_rate);
}

double special_haircut(double general_haircut, double general_rate, double special_rate) {
    require_rate_above_minus_one(special_rate, "special repo rate");
    return (general_haircut * (1.0 + general_rate) - (general_rate - special_rate)) / (1.0 + special_rate);
}

double special_rate(double general_haircut, double special_haircut, double general_rate) {
    require_haircut_below_one(special_haircut, "special haircut");
    return (general_rate - general_haircut * (1.0 + general_rate) + special_haircut) / (1.0 - special_haircut);
}

double rate_haircut_residual(double general_haircut, double special_haircut, double general_rate,
                             double special_rate) {
    return (1.0 + special_rate) * (1.0 - special_haircut) - (1.0 + general_rate) * (1.0 - general_haircut);
}

SpecialRepoRelations make_relations(double spot_price, double general_haircut, double special_haircut,
                                    double general_rate, double special_rate, double tolerance) {
    if (!(spot_price > 0.0) || !std::isfinite(spot_price))
        throw ValidationError("spot price must be positive");
    require_haircut_below_one(general_haircut, "general haircut");
    require_haircut_below_one(special_haircut, "special haircut");
    require_rate_above_minus_one(general_rate, "general repo rate");
    require_rate_above_minus_one(special_rate, "special repo rate");
    const double residual = rate_haircut_residual(general_haircut, special_haircut, general_rate, special_rate);
    if (!(std::abs(residual) <= tolerance))
        throw ValidationError(fmt::format("rates and haircuts are inconsistent: (1 + r_sR)(1 - h_p) - (1 + r_R)(1 - "
                                          "h_c) = {:.3e} exceeds {:.1e}",
                                          residual, tolerance));

    SpecialRepoRelations rel;
    rel.spot_price = spot_price;
    rel.general_rate = general_rate;
    rel.special_rate = special_rate;
    rel.general_haircut = general_haircut;
    rel.special_haircut = special_haircut;
    rel.fed_fee_rate = fed_fee_rate(general_rate, special_rate, general_haircut);
    rel.max_fee = max_fed_fee(spot_price, special_haircut, general_rate, special_rate);
    rel.general_lend = spot_price * (1.0 - general_haircut);
    return rel;
}

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::GuaranteedDelivery:
        return "guaranteed_delivery";
    case Regime::Stressed:
        return "stressed";
    case Regime::NoDemand:
        return "no_demand";
    case Regime::Normal:
        return "normal";
    }
    return "?";
}

Regime classify_regime(const SpecialRepoRelations& rel) {
    const double residual =
        rate_haircut_residual(rel.general_haircut, rel.special_haircut, rel.general_rate, rel.special_rate);
    if (!(std::abs(residual) <= kRegimeTol))
        throw ValidationError(fmt::format("relations are inconsistent (residual {:.3e})", residual));
    if (std::abs(rel.special_haircut) <= kRegimeTol)
        return Regime::GuaranteedDelivery;
    if (std::abs(rel.special_rate) <= kRegimeTol && rel.fed_fee_rate > kRegimeTol)
        return Regime::Stressed;
    if (std::abs(rel.fed_fee_rate) <= kRegimeTol)
        return Regime::NoDemand;
    return Regime::Normal;
}

} // namespace repoopt
