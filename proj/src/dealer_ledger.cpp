#include "repoopt/dealer_ledger.hpp"

#include "repoopt/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace repoopt {

namespace {

double default_tolerance(const DealerScenario& s, double tolerance) {
    return tolerance >= 0.0 ? tolerance : 1e-9 * s.loan_value();
}

class Ledger {
public:
    void post(int step, std::string label, double cash, long notes, double collateral = 0.0, double pledged = 0.0) {
        StepRecord r;
        r.step = step;
        r.label = std::move(label);
        r.cash_delta = cash;
        r.notes_delta = notes;
        r.collateral_delta = collateral;
        r.pledged_delta = pledged;
        r.cash_after = state_.cash + cash;
        r.notes_after = state_.specific_notes + notes;
        r.collateral_after = state_.general_collateral + collateral;
        r.pledged_after = state_.pledged_collateral + pledged;
        apply(state_, r);
    }

    LedgerState release() { return std::move(state_); }

private:
    LedgerState state_;
};

} // namespace

void validate(const DealerScenario& s) {
    if (s.note_count < 1)
        throw ValidationError("note count must be at least 1");
    if (!(s.note_spot > 0.0) || !std::isfinite(s.note_spot))
        throw ValidationError("note spot price must be positive");
    if (!(s.intermediate_price >= 0.0) || !std::isfinite(s.intermediate_price))
        throw ValidationError("intermediate price must be non-negative");
    for (double v : {s.special_rate, s.general_rate, s.special_haircut, s.general_haircut, s.fed_fee})
        if (!std::isfinite(v))
            throw ValidationError("dealer scenario rates, haircuts and fee must be finite");
    if (s.special_haircut >= 1.0 || s.general_haircut >= 1.0)
        throw ValidationError("haircuts must be less than 1");
    if (s.fed_fee < 0.0)
        throw ValidationError("auction fee must be non-negative");
}

void apply(LedgerState& state, const StepRecord& r) {
    state.cash += r.cash_delta;
    state.specific_notes += r.notes_delta;
    state.general_collateral += r.collateral_delta;
    state.pledged_collateral += r.pledged_delta;
    if (state.cash != r.cash_after || state.specific_notes != r.notes_after ||
        state.general_collateral != r.collateral_after || state.pledged_collateral != r.pledged_after)
        throw std::logic_error("step " + std::to_string(r.step) + " running balances do not replay");
    state.step_log.push_back(r);
}

LedgerState replay(const std::vector<StepRecord>& log) {
    LedgerState state;
    for (const auto& r : log)
        apply(state, r);
    return state;
}

CashflowReport cashflows(const DealerScenario& s) {
    CashflowReport c;
    c.interest_flow = s.general_lend() * s.general_rate - s.client_cash() * s.special_rate - s.fed_fee;
    c.short_trade = s.loan_value() - s.cover_cost();
    c.total = c.interest_flow + c.short_trade;
    return c;
}

std::string condition_name(LiquidityCondition c) {
    switch (c) {
    case LiquidityCondition::ClientFundsCoverAuction:
        return "client_funds_cover_auction";
    case LiquidityCondition::ShortCoverAffordable:
        return "short_cover_affordable";
    case LiquidityCondition::InterestCoversFee:
        return "interest_covers_fee";
    case LiquidityCondition::TotalCoversFee:
        return "total_covers_fee";
    }
    return "?";
}

std::vector<ConditionResult> check_liquidity(const DealerScenario& s, bool strict, double tolerance) {
    validate(s);
    const double tol = default_tolerance(s, tolerance);
    const CashflowReport c = cashflows(s);
    auto make = [tol](LiquidityCondition cond, double slack, bool enforced) {
        return ConditionResult{cond, slack, slack >= -tol, enforced};
    };
    return {
        make(LiquidityCondition::ClientFundsCoverAuction, s.client_cash() - s.general_lend() - s.fed_fee, true),
        make(LiquidityCondition::ShortCoverAffordable, (s.note_spot - s.intermediate_price) * s.note_count, strict),
        make(LiquidityCondition::InterestCoversFee, c.interest_flow, strict),
        make(LiquidityCondition::TotalCoversFee, c.short_trade + c.interest_flow, !strict),
    };
}

DealerRun run_dealer_scenario(const DealerScenario& s, bool strict, double tolerance) {
    DealerRun run;
    run.conditions = check_liquidity(s, strict, tolerance);
    run.cashflows = cashflows(s);

    auto enforce = [&](LiquidityCondition cond, int step) {
        for (const auto& r : run.conditions)
            if (r.condition == cond && r.enforced && !r.holds)
                throw LiquidityError(step, condition_name(cond), r.slack);
    };

    const long n = s.note_count;
    const double p0_total = s.loan_value();
    const double q0 = s.client_cash();
    const double qg0 = s.general_lend();

    Ledger ledger;
    ledger.post(1, "receive client cash in the special repo", q0, 0);
    ledger.post(2, "lend in the general repo against general collateral", -qg0, 0, p0_total);
    enforce(LiquidityCondition::ClientFundsCoverAuction, 3);
    ledger.post(3, "borrow specific notes at the auction, pay fee, pledge general collateral", -s.fed_fee, n,
                -p0_total, p0_total);
    ledger.post(4, "sell borrowed notes at spot", p0_total, -n);
    enforce(LiquidityCondition::ShortCoverAffordable, 5);
    ledger.post(5, "buy notes back at the intermediate price", -s.cover_cost(), n);
    ledger.post(6, "deliver notes to the client", 0.0, -n);
    enforce(LiquidityCondition::InterestCoversFee, 7);
    enforce(LiquidityCondition::TotalCoversFee, 7);
    ledger.post(7, "receive notes from the client, repay principal and special interest",
                -q0 * (1.0 + s.special_rate), n);
    ledger.post(8, "return notes to the auction, recover pledged collateral", 0.0, -n, p0_total, -p0_total);
    ledger.post(9, "general repo closes: receive principal and interest, deliver collateral",
                qg0 * (1.0 + s.general_rate), 0, -p0_total);
    run.ledger = ledger.release();
    return run;
}

} // namespace repoopt
