#pragma once

#include "repoopt/market.hpp"

#include <string_view>

namespace repoopt {

/// Lender-fail special repo: the trader pays P0 (1 + h_p) for collateral worth
/// P0 and holds a European put struck at Q1.
///
/// Here h_p is a *premium* on top of P0. SpecialRepoRelations below uses h_p as
/// a *haircut* below P0; the two are never mixed.
struct SpecialLenderQuote {
    double premium = 0.0;          // H_p, Black-Scholes put
    double premium_rate = 0.0;     // h_p = H_p / P0
    double lent_amount = 0.0;      // Q0 = P0 + H_p
    double repurchase_price = 0.0; // Q1
    double special_rate = 0.0;     // r_sR, per annum
    double put_value_mean = 0.0;   // <W> = E[max(Q1 - P, 0)]
    double trader_return = 0.0;    // <W> / H_p - 1, per period; NaN when H_p == 0
};

SpecialLenderQuote price_lender_fail(const MarketParams& m, double repurchase_price);

/// Dealer-fail rate/haircut relations. All rates per period.
struct SpecialRepoRelations {
    double general_rate = 0.0;    // r_R
    double special_rate = 0.0;    // r_sR
    double general_haircut = 0.0; // h_c
    double special_haircut = 0.0; // h_p
    double fed_fee_rate = 0.0;    // r_F = F0 / P0
    double max_fee = 0.0;         // F0 at the dealer's liquidity limit
    double general_lend = 0.0;    // Q_g0 = P0 (1 - h_c)
    double spot_price = 0.0;      // P0
};

/// r_F = (r_R - r_sR) (1 - h_c) / (1 + r_sR). Throws ValidationError for r_sR <= -1.
double fed_fee_rate(double general_rate, double special_rate, double general_haircut);

/// Largest auction fee the dealer can pay from the client's cash:
/// P0 (1 - h_p) (r_R - r_sR) / (1 + r_R).
double max_fed_fee(double spot_price, double special_haircut, double general_rate, double special_rate);

/// h_p consistent with (1 + r_sR)(1 - h_p) = (1 + r_R)(1 - h_c).
double special_haircut(double general_haircut, double general_rate, double special_rate);

/// r_sR consistent with the same relation, solved for the special rate.
double special_rate(double general_haircut, double special_haircut, double general_rate);

/// (1 + r_sR)(1 - h_p) - (1 + r_R)(1 - h_c).
double rate_haircut_residual(double general_haircut, double special_haircut, double general_rate,
                             double special_rate);

/// Assembles the relations for P0 and a haircut/rate tuple. Throws ValidationError
/// if the tuple violates the rate/haircut relation by more than `tolerance`.
SpecialRepoRelations make_relations(double spot_price, double general_haircut, double special_haircut,
                                    double general_rate, double special_rate, double tolerance = 1e-9);

enum class Regime { GuaranteedDelivery, Stressed, NoDemand, Normal };

std::string_view to_string(Regime r);

/// First match wins: h_p == 0, then r_sR == 0 with r_F > 0, then r_F == 0 (each within 1e-9).
/// Throws ValidationError for input that violates the rate/haircut relation.
Regime classify_regime(const SpecialRepoRelations& rel);

} // namespace repoopt
