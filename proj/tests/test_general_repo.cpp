#include "oracles.hpp"

#include "repoopt/errors.hpp"
#include "repoopt/general_repo.hpp"

#include <doctest.h>

#include <cfloat>
#include <cmath>

using namespace repoopt;

namespace {

MarketParams example1() {
    return MarketParams{.spot_price = 100000.0,
                        .intrinsic_yield = 0.03,
                        .volatility = 0.19,
                        .tenor_days = 1,
                        .risk_free = 0.0,
                        .day_count = 360};
}

MarketParams random_market(oracle::Sampler& rng) {
    MarketParams m;
    m.spot_price = rng.uniform(1e3, 1e7);
    m.intrinsic_yield = rng.uniform(0.0, 0.1);
    m.volatility = rng.uniform(0.02, 0.6);
    m.tenor_days = rng.integer(1, 90);
    m.risk_free = rng.uniform(0.0, m.intrinsic_yield);
    m.day_count = rng.integer(0, 1) ? 360 : 365;
    return m;
}

} // namespace

TEST_CASE("forward gaussian") {
    const auto g = forward_gaussian(example1());
    CHECK(std::abs(g.mean - 100008.33) <= 0.01);
    CHECK(std::abs(g.sd - 1001.39) <= 0.01);

    auto flat = example1();
    flat.volatility = 0.0;
    CHECK(forward_gaussian(flat).sd == 0.0);

    auto year = example1();
    year.tenor_days = 360;
    CHECK(forward_gaussian(year).mean == doctest::Approx(100000.0 * 1.03));
    CHECK(forward_gaussian(year).sd == doctest::Approx(100000.0 * 0.19));
}

TEST_CASE("strike from sigma multiple") {
    const auto m = example1();
    CHECK(std::abs(strike_from_sigma_multiple(m, 3.0) - 97003.92) <= 0.10);
    CHECK(std::abs(strike_from_sigma_multiple(m, 2.0) - 98005.39) <= 0.10);
    CHECK(strike_from_sigma_multiple(m, 0.0) == forward_gaussian(m).mean);
    CHECK_THROWS_AS(strike_from_sigma_multiple(m, 200.0), ValidationError);
    CHECK_THROWS_AS(strike_from_sigma_multiple(m, -1.0), ValidationError);
}

TEST_CASE("general repo quote, three-sigma strike") {
    const auto m = example1();
    const auto q = price_general_repo(m, strike_from_sigma_multiple(m, 3.0));
    CHECK(std::abs(q.lent_amount - 97003.53) <= 0.05);
    CHECK(std::abs(q.haircut - 2996.47) <= 0.5);
    CHECK(std::abs(q.lender_rate) <= 1e-4);
    CHECK(std::abs(q.repo_rate - 0.0014) <= 0.0002);
    CHECK(q.lent_amount + q.haircut == m.spot_price);
}

TEST_CASE("general repo quote, two-sigma strike") {
    const auto m = example1();
    const auto q = price_general_repo(m, strike_from_sigma_multiple(m, 2.0));
    CHECK(std::abs(q.lender_rate - 0.00018) <= 0.00003);
    CHECK(std::abs(q.haircut - 2003.16) <= 0.5);
    CHECK(std::abs(q.repo_rate - 0.031) <= 0.002);
    CHECK(std::abs(q.revenue_mean - 97996.89) <= 0.10);
}

TEST_CASE("lender rate equals the risk-free rate when yield equals risk-free") {
    auto m = example1();
    m.risk_free = m.intrinsic_yield;
    for (double k : {1.0, 2.0, 3.0})
        CHECK(price_general_repo(m, strike_from_sigma_multiple(m, k)).lender_rate ==
              doctest::Approx(m.risk_free).epsilon(1e-14));
}

TEST_CASE("general repo errors") {
    auto m = example1();
    CHECK_THROWS_AS(price_general_repo(m, 0.0), ValidationError);
    CHECK_THROWS_AS(price_general_repo(m, 2e5), PricingError);
    m.volatility = 0.0;
    CHECK_THROWS_AS(price_general_repo(m, 97000.0), ValidationError);
    m = example1();
    m.day_count = 252;
    CHECK_THROWS_AS(price_general_repo(m, 97000.0), ValidationError);
}

TEST_CASE("lender rate from black-scholes haircut") {
    const auto m = example1();
    // Direct high-precision evaluation (mpmath, 30 digits) of
    // 360 * (E[min(Q1, P)] / (P0 - call) - 1).
    CHECK(lender_rate_from_bs(m, strike_from_sigma_multiple(m, 3.0)) ==
          doctest::Approx(-1.95212141666088704e-4).epsilon(1e-6));
    CHECK(lender_rate_from_bs(m, strike_from_sigma_multiple(m, 2.0)) ==
          doctest::Approx(-1.27780823542055408e-3).epsilon(1e-6));

    auto flat = example1();
    flat.volatility = 0.0;
    CHECK(std::abs(lender_rate_from_bs(flat, 97000.0)) <= 1e-12);
    // Strike at the deterministic forward: the call is worthless and the lender
    // earns the collateral yield, which is zero only for a zero-yield collateral.
    CHECK(lender_rate_from_bs(flat, forward_gaussian(flat).mean) == doctest::Approx(flat.intrinsic_yield));
    flat.intrinsic_yield = 0.0;
    CHECK(std::abs(lender_rate_from_bs(flat, forward_gaussian(flat).mean)) <= 1e-12);
}

TEST_CASE("haircut identity residual") {
    const auto m = example1();
    for (double k : {3.0, 2.0}) {
        const auto q = price_general_repo(m, strike_from_sigma_multiple(m, k));
        CHECK(std::abs(haircut_identity_residual(q, m)) <= 1e-10);
    }
}

TEST_CASE("general quote invariants on random markets") {
    oracle::Sampler rng(1234);
    double worst_identity = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_market(rng);
        const auto fwd = forward_gaussian(m);
        const double q1 = fwd.mean - fwd.sd * rng.uniform(0.5, 5.0);
        if (q1 <= 0.0)
            continue;
        const auto q = price_general_repo(m, q1);
        CAPTURE(i);
        REQUIRE(std::abs(q.lent_amount + q.haircut - m.spot_price) <= 2 * DBL_EPSILON * m.spot_price);
        REQUIRE(q.revenue_mean < q1);
        REQUIRE(q.option_value_mean > fwd.mean - q1);
        REQUIRE(q.lender_rate < q.repo_rate);
        const double closure = q.lent_amount * (1.0 + m.to_period(q.lender_rate));
        REQUIRE(std::abs(closure - q.revenue_mean) <= 1e-9 * q.revenue_mean);
        worst_identity = std::max(worst_identity, std::abs(haircut_identity_residual(q, m)));
    }
    CHECK(worst_identity <= 1e-9);
}

TEST_CASE("haircut tracks black-scholes for sub-forward strikes") {
    auto m = example1();
    for (double vol = 0.05; vol <= 0.40 + 1e-12; vol += 0.05) {
        m.volatility = vol;
        for (double k = 2.0; k <= 4.0 + 1e-12; k += 0.25) {
            const double q1 = strike_from_sigma_multiple(m, k);
            const double h = price_general_repo(m, q1).haircut;
            const double h_bs = bs_haircut(m, q1);
            CAPTURE(vol);
            CAPTURE(k);
            CHECK(std::abs(h - h_bs) / h_bs <= 0.02);
        }
    }
}

TEST_CASE("haircut nonincreasing and repo rate nondecreasing in the repurchase price") {
    const auto m = example1();
    const auto fwd = forward_gaussian(m);
    double prev_h = 1e300, prev_r = -1e300;
    for (double q1 = fwd.mean - 5 * fwd.sd; q1 <= fwd.mean + 0.5 * fwd.sd; q1 += fwd.sd / 20) {
        const auto q = price_general_repo(m, q1);
        CHECK(q.haircut <= prev_h);
        CHECK(q.repo_rate >= prev_r);
        prev_h = q.haircut;
        prev_r = q.repo_rate;
    }
}

TEST_CASE("compare with black-scholes rows") {
    const auto m = example1();
    const std::vector<double> strikes{97003.92, 98005.39};
    const auto rows = compare_with_bs(m, strikes);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0].abs_gap) <= 1.5);
    CHECK(rows[1].abs_gap == doctest::Approx(rows[1].haircut - rows[1].haircut_bs));
}
