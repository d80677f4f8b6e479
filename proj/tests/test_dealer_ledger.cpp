#include "oracles.hpp"

#include "repoopt/dealer_ledger.hpp"
#include "repoopt/errors.hpp"
#include "repoopt/special_repo.hpp"

#include <doctest.h>

#include <cmath>

using namespace repoopt;

namespace {

// Consistent haircuts, fee at the dealer's limit, short covered at the spot price.
DealerScenario max_fee_scenario(double h_c = 0.02, double r_r = 0.0001, double r_sr = 0.00002) {
    DealerScenario s;
    s.note_count = 100;
    s.note_spot = 1000.0;
    s.intermediate_price = 1000.0;
    s.general_rate = r_r;
    s.special_rate = r_sr;
    s.general_haircut = h_c;
    s.special_haircut = special_haircut(h_c, r_r, r_sr);
    s.fed_fee = max_fed_fee(s.loan_value(), s.special_haircut, r_r, r_sr);
    return s;
}

double slack_of(const std::vector<ConditionResult>& rs, LiquidityCondition c) {
    for (const auto& r : rs)
        if (r.condition == c)
            return r.slack;
    FAIL("condition missing");
    return 0.0;
}

} // namespace

TEST_CASE("max-fee scenario binds both liquidity conditions") {
    const auto s = max_fee_scenario();
    const auto conds = check_liquidity(s, true);
    const double tol = 1e-9 * s.loan_value();
    CHECK(std::abs(slack_of(conds, LiquidityCondition::ClientFundsCoverAuction)) <= tol);
    CHECK(std::abs(slack_of(conds, LiquidityCondition::InterestCoversFee)) <= tol);

    const auto run = run_dealer_scenario(s);
    CHECK(run.cashflows.short_trade == 0.0);
    CHECK(run.cashflows.total == run.cashflows.interest_flow);
    CHECK(run.cashflows.interest_flow >= -tol);
    CHECK(std::abs(run.ledger.cash - run.cashflows.total) <= tol);
}

TEST_CASE("no special structure: only the haircut gap earns interest") {
    DealerScenario s;
    s.note_count = 10;
    s.note_spot = 500.0;
    s.intermediate_price = 500.0;
    s.general_rate = s.special_rate = 0.0002;
    s.general_haircut = s.special_haircut = 0.03;
    s.fed_fee = 0.0;
    const auto run = run_dealer_scenario(s);
    CHECK(run.cashflows.total == doctest::Approx(s.general_rate * (s.general_lend() - s.client_cash())));
    CHECK(std::abs(run.ledger.cash - run.cashflows.total) <= 1e-9 * s.loan_value());
}

TEST_CASE("fee above client funds fails at the auction step") {
    auto s = max_fee_scenario();
    s.fed_fee = s.client_cash() - s.general_lend() + 1.0;
    try {
        run_dealer_scenario(s);
        FAIL("expected LiquidityError");
    } catch (const LiquidityError& e) {
        CHECK(e.step() == 3);
        CHECK(e.condition() == "client_funds_cover_auction");
        CHECK(e.slack() == doctest::Approx(-1.0));
    }
}

TEST_CASE("liquidity diagnostics") {
    DealerScenario s;
    s.note_count = 10;
    s.note_spot = 100.0;
    s.intermediate_price = 100.0;
    s.general_rate = 0.0005;
    s.special_rate = 0.0;
    s.general_haircut = 0.02;
    s.special_haircut = 0.0;
    s.fed_fee = 0.0;
    auto conds = check_liquidity(s, true);
    CHECK(slack_of(conds, LiquidityCondition::InterestCoversFee) == doctest::Approx(s.general_lend() * 0.0005));

    s.intermediate_price = 101.0;
    conds = check_liquidity(s, true);
    CHECK(slack_of(conds, LiquidityCondition::ShortCoverAffordable) == doctest::Approx(-10.0));
    for (const auto& c : conds)
        if (c.condition == LiquidityCondition::ShortCoverAffordable)
            CHECK_FALSE(c.holds);
    CHECK_THROWS_AS(run_dealer_scenario(s, true), LiquidityError);
}

TEST_CASE("non-strict mode lets the short-trade profit pay the fee") {
    auto s = max_fee_scenario();
    s.fed_fee *= 0.5;  // below client funds limit
    s.special_rate *= 3.0;  // interest alone no longer covers the fee
    s.intermediate_price = 990.0;
    const auto strict = check_liquidity(s, true);
    REQUIRE(slack_of(strict, LiquidityCondition::InterestCoversFee) < 0.0);
    CHECK_THROWS_AS(run_dealer_scenario(s, true), LiquidityError);
    const auto run = run_dealer_scenario(s, false);
    CHECK(run.cashflows.short_trade == doctest::Approx(10.0 * s.note_count));
    CHECK(run.ledger.cash > 0.0);
}

TEST_CASE("short-trade contribution is (p0 - p) N") {
    auto s = max_fee_scenario();
    s.intermediate_price = 980.0;
    const auto run = run_dealer_scenario(s);
    CHECK(run.cashflows.short_trade == doctest::Approx(20.0 * 100));
}

TEST_CASE("ledger bookkeeping") {
    const auto run = run_dealer_scenario(max_fee_scenario());
    const auto& log = run.ledger.step_log;
    REQUIRE(log.size() == 9);
    for (int i = 0; i < 9; ++i)
        CHECK(log[i].step == i + 1);
    CHECK(run.ledger.specific_notes == 0);
    CHECK(run.ledger.general_collateral == 0.0);
    CHECK(run.ledger.pledged_collateral == 0.0);

    double cash = 0.0;
    long notes = 0;
    for (const auto& r : log) {
        cash += r.cash_delta;
        notes += r.notes_delta;
    }
    CHECK(cash == run.ledger.cash);
    CHECK(notes == 0);

    const LedgerState replayed = replay(log);
    CHECK(replayed.cash == run.ledger.cash);
    CHECK(replayed.step_log == log);

    auto tampered = log;
    tampered[4].cash_delta += 1.0;
    CHECK_THROWS_AS(replay(tampered), std::logic_error);
}

TEST_CASE("ledger cash equals the formula decomposition on random scenarios") {
    oracle::Sampler rng(99);
    for (int i = 0; i < 500; ++i) {
        const double h_c = rng.uniform(0.0, 0.1);
        const double r_r = rng.uniform(0.0, 0.002);
        const double r_sr = rng.uniform(-0.05, r_r);
        auto s = max_fee_scenario(h_c, r_r, r_sr);
        s.note_count = rng.integer(1, 10000);
        s.note_spot = rng.uniform(10.0, 2000.0);
        s.fed_fee = max_fed_fee(s.loan_value(), s.special_haircut, r_r, r_sr);
        s.intermediate_price = s.note_spot * rng.uniform(0.8, 1.0);
        const double tol = 1e-9 * s.loan_value();

        const auto conds = check_liquidity(s, true);
        REQUIRE(std::abs(slack_of(conds, LiquidityCondition::ClientFundsCoverAuction)) <= tol);
        REQUIRE(std::abs(slack_of(conds, LiquidityCondition::InterestCoversFee)) <= tol);

        const auto run = run_dealer_scenario(s);
        const double formula = (s.general_lend() * r_r - s.client_cash() * r_sr - s.fed_fee) +
                               (s.loan_value() - s.cover_cost());
        REQUIRE(std::abs(run.ledger.cash - formula) <= tol);
    }
}

TEST_CASE("scenario validation") {
    auto s = max_fee_scenario();
    s.note_count = 0;
    CHECK_THROWS_AS(run_dealer_scenario(s), ValidationError);
    s = max_fee_scenario();
    s.fed_fee = -1.0;
    CHECK_THROWS_AS(check_liquidity(s, true), ValidationError);
}
