#pragma once

#include <string>
#include <vector>

namespace repoopt {

/// Dealer-fail scenario: the dealer takes the client's cash in a special repo,
/// lends it in a general repo, borrows the specific notes at the auction and
/// shorts them. Rates are per period; interest is applied once.
struct DealerScenario {
    long note_count = 1;              // N
    double note_spot = 0.0;           // p0
    double intermediate_price = 0.0;  // p, price at which the short is covered
    double special_rate = 0.0;        // r_sR
    double general_rate = 0.0;        // r_R
    double special_haircut = 0.0;     // h_p
    double general_haircut = 0.0;     // h_c
    double fed_fee = 0.0;             // F0

    double loan_value() const { return note_spot * static_cast<double>(note_count); }            // P0
    double cover_cost() const { return intermediate_price * static_cast<double>(note_count); }   // P
    double client_cash() const { return loan_value() * (1.0 - special_haircut); }                // Q0
    double general_lend() const { return loan_value() * (1.0 - general_haircut); }               // Q_g0
};

void validate(const DealerScenario& s);

struct StepRecord {
    int step = 0;
    std::string label;
    double cash_delta = 0.0;
    long notes_delta = 0;
    double collateral_delta = 0.0;  // general collateral held, at value P0
    double pledged_delta = 0.0;     // general collateral pledged at the auction
    double cash_after = 0.0;
    long notes_after = 0;
    double collateral_after = 0.0;
    double pledged_after = 0.0;

    bool operator==(const StepRecord&) const = default;
};

struct LedgerState {
    double cash = 0.0;
    long specific_notes = 0;
    double general_collateral = 0.0;
    double pledged_collateral = 0.0;
    std::vector<StepRecord> step_log;
};

/// Applies a record's deltas. Throws std::logic_error if the record's running
/// balances disagree with the replayed state.
void apply(LedgerState& state, const StepRecord& record);

/// Replays a step log from an empty ledger.
LedgerState replay(const std::vector<StepRecord>& log);

struct CashflowReport {
    double interest_flow = 0.0;  // C_if = Q_g0 r_R - Q0 r_sR - F0
    double short_trade = 0.0;    // C_r = P0 - P
    double total = 0.0;          // C_B = C_if + C_r
};

CashflowReport cashflows(const DealerScenario& s);

enum class LiquidityCondition { ClientFundsCoverAuction, ShortCoverAffordable, InterestCoversFee, TotalCoversFee };

std::string condition_name(LiquidityCondition c);

struct ConditionResult {
    LiquidityCondition condition;
    double slack = 0.0;
    bool holds = false;
    bool enforced = false;  // part of the rule set for the chosen mode
};

/// Slack of every liquidity condition. Strict mode enforces the interest-only
/// condition; non-strict mode the weaker one that counts the short-trade profit.
/// A condition holds when slack >= -tolerance.
std::vector<ConditionResult> check_liquidity(const DealerScenario& s, bool strict, double tolerance = -1.0);

struct DealerRun {
    LedgerState ledger;
    CashflowReport cashflows;
    std::vector<ConditionResult> conditions;
};

/// Executes the nine steps in order. Enforced liquidity conditions are checked
/// where they bite (client funds at step 3, the cover purchase at step 5, the
/// closing payment at step 7) and raise LiquidityError naming that step.
/// The default tolerance is 1e-9 * P0.
DealerRun run_dealer_scenario(const DealerScenario& s, bool strict = true, double tolerance = -1.0);

} // namespace repoopt
