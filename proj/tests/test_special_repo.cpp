#include "oracles.hpp"

#include "repoopt/errors.hpp"
#include "repoopt/general_repo.hpp"
#include "repoopt/special_repo.hpp"

#include <doctest.h>

#include <cmath>

using namespace repoopt;

namespace {

MarketParams example2() {
    return MarketParams{.spot_price = 100000.0,
                        .intrinsic_yield = 0.03,
                        .volatility = 0.19,
                        .tenor_days = 1,
                        .risk_free = 0.0,
                        .day_count = 360};
}

struct Tuple {
    double h_c, h_p, r_r, r_sr;
};

Tuple random_consistent(oracle::Sampler& rng) {
    Tuple t;
    t.h_c = rng.uniform(0.0, 0.3);
    t.r_r = rng.uniform(-0.001, 0.02);
    t.r_sr = rng.uniform(-0.1, 0.02);
    t.h_p = special_haircut(t.h_c, t.r_r, t.r_sr);
    return t;
}

} // namespace

TEST_CASE("lender-fail quote at the forward mean") {
    const auto m = example2();
    const auto q = price_lender_fail(m, forward_gaussian(m).mean);
    CHECK(std::abs(q.premium - 403.69) <= 1.0);
    CHECK(std::abs(q.lent_amount - 100403.69) <= 1.0);
    CHECK(std::abs(q.special_rate - (-1.42)) <= 0.02);
    CHECK(std::abs(q.put_value_mean - 399.53) <= 0.5);
    CHECK(q.lent_amount == m.spot_price + q.premium);
    CHECK(q.trader_return == doctest::Approx(q.put_value_mean / q.premium - 1.0));
}

TEST_CASE("lender-fail edge cases") {
    auto flat = example2();
    flat.volatility = 0.0;
    const auto worthless = price_lender_fail(flat, 99000.0);
    CHECK(worthless.premium == 0.0);
    CHECK(worthless.lent_amount == flat.spot_price);
    CHECK(worthless.put_value_mean == 0.0);
    CHECK(std::isnan(worthless.trader_return));

    const auto m = example2();
    const auto fwd = forward_gaussian(m);
    const double deep = fwd.mean + 10.0 * fwd.sd;
    CHECK(price_lender_fail(m, deep).put_value_mean == doctest::Approx(deep - fwd.mean).epsilon(1e-12));
    CHECK_THROWS_AS(price_lender_fail(m, -1.0), ValidationError);
}

TEST_CASE("lender-fail sign laws on random strikes") {
    oracle::Sampler rng(77);
    auto m = example2();
    for (int i = 0; i < 300; ++i) {
        m.volatility = rng.uniform(0.01, 0.5);
        m.tenor_days = rng.integer(1, 30);
        const auto fwd = forward_gaussian(m);
        const double q1 = fwd.mean + fwd.sd * rng.uniform(-4.0, 4.0);
        const auto q = price_lender_fail(m, q1);
        CHECK(q.put_value_mean >= 0.0);
        if (q.premium > q1 - m.spot_price)
            CHECK(q.special_rate < 0.0);
    }
}

TEST_CASE("fed fee rate limits") {
    CHECK(fed_fee_rate(0.0002, 0.0002, 0.02) == 0.0);
    CHECK(fed_fee_rate(0.0002, 0.0, 0.02) == doctest::Approx(0.0002 * (1 - 0.02)).epsilon(1e-14));
    const double h_c = 0.03, r_r = 0.0001;
    const double r_sr = special_rate(h_c, 0.0, r_r);
    CHECK(std::abs(fed_fee_rate(r_r, r_sr, h_c) - h_c) <= 1e-12);
    CHECK_THROWS_AS(fed_fee_rate(0.01, -1.0, 0.02), ValidationError);
}

TEST_CASE("max fed fee") {
    CHECK(max_fed_fee(100000, 0.02, 0.0003, 0.0003) == 0.0);
    // 100000 * 0.98 * 0.0001 / 1.0001
    CHECK(max_fed_fee(100000, 0.02, 0.0001, 0.0) == doctest::Approx(9.799020097990201).epsilon(1e-14));
    // Cross-check with the fee rate when the haircuts are consistent.
    const double r_r = 0.0001, r_sr = 0.0, h_p = 0.02;
    const double consistent_h_c = 1.0 - (1.0 + r_sr) * (1.0 - h_p) / (1.0 + r_r);
    CHECK(std::abs(max_fed_fee(100000, h_p, r_r, r_sr) - 100000 * fed_fee_rate(r_r, r_sr, consistent_h_c)) <= 1e-9);
    CHECK_THROWS_AS(max_fed_fee(100000, 1.0, 0.0001, 0.0), ValidationError);
}

TEST_CASE("special haircut and rate") {
    CHECK(special_haircut(0.02, 0.0003, 0.0003) == doctest::Approx(0.02).epsilon(1e-14));
    const double h_c = 0.02, r_r = 0.0004;
    // Expanded by hand: h_c (1 + r_R) - r_R = h_c - r_R (1 - h_c)
    CHECK(special_haircut(h_c, r_r, 0.0) == doctest::Approx(h_c - r_r * (1 - h_c)).epsilon(1e-14));
    CHECK(special_haircut(0.0, r_r, 0.0) == doctest::Approx(-r_r).epsilon(1e-14));
    CHECK_THROWS_AS(special_haircut(0.02, 0.0001, -1.5), ValidationError);

    CHECK(special_rate(h_c, 0.0, r_r) == doctest::Approx(r_r - h_c * (1 + r_r)).epsilon(1e-14));
    CHECK(std::abs(special_rate(h_c, 0.0, 1e-6) + h_c) <= 1e-5);
    CHECK(special_rate(h_c, h_c, r_r) == doctest::Approx(r_r).epsilon(1e-12));
    CHECK_THROWS_AS(special_rate(h_c, 1.0, r_r), ValidationError);
}

TEST_CASE("three forms of the fee rate agree and the haircut relation round-trips") {
    oracle::Sampler rng(2026);
    for (int i = 0; i < 1000; ++i) {
        const Tuple t = random_consistent(rng);
        const double f1 = fed_fee_rate(t.r_r, t.r_sr, t.h_c);
        const double f2 = (t.r_r - t.r_sr) * (1 - t.h_p) / (1 + t.r_r);
        const double f3 = t.h_c - t.h_p;
        REQUIRE(std::abs(f1 - f2) <= 1e-12);
        REQUIRE(std::abs(f1 - f3) <= 1e-12);
        REQUIRE(std::abs(special_rate(t.h_c, t.h_p, t.r_r) - t.r_sr) <= 1e-12);
        const double r_sr2 = special_rate(t.h_c, t.h_p, t.r_r);
        REQUIRE(std::abs(special_haircut(t.h_c, t.r_r, r_sr2) - t.h_p) <= 1e-12);
        REQUIRE(std::abs(rate_haircut_residual(t.h_c, t.h_p, t.r_r, t.r_sr)) <= 1e-12);

        const double fee = max_fed_fee(1e5, t.h_p, t.r_r, t.r_sr);
        REQUIRE((fee > 0.0) == (t.r_r > t.r_sr));
        const double slack = 1e5 * (1 - t.h_p) - 1e5 * (1 - t.h_c) - fee;
        REQUIRE(std::abs(slack) <= 1e-9 * 1e5);
    }
}

TEST_CASE("regime classification") {
    const double h_c = 0.02, r_r = 0.0001;

    const auto guaranteed = make_relations(1e5, h_c, 0.0, r_r, special_rate(h_c, 0.0, r_r));
    CHECK(classify_regime(guaranteed) == Regime::GuaranteedDelivery);
    CHECK(guaranteed.special_rate == doctest::Approx(r_r - h_c * (1 + r_r)));
    CHECK(std::abs(guaranteed.fed_fee_rate - h_c) <= 1e-12);

    const auto stressed = make_relations(1e5, h_c, special_haircut(h_c, r_r, 0.0), r_r, 0.0);
    CHECK(classify_regime(stressed) == Regime::Stressed);
    CHECK(std::abs(stressed.fed_fee_rate - r_r * (1 - h_c)) <= 1e-12);

    const auto idle = make_relations(1e5, h_c, h_c, r_r, r_r);
    CHECK(classify_regime(idle) == Regime::NoDemand);
    CHECK(idle.fed_fee_rate == 0.0);

    const double r_sr = r_r / 2;
    const auto normal = make_relations(1e5, h_c, special_haircut(h_c, r_r, r_sr), r_r, r_sr);
    CHECK(classify_regime(normal) == Regime::Normal);
    CHECK(to_string(Regime::NoDemand) == "no_demand");

    auto broken = normal;
    broken.special_haircut += 1e-6;
    CHECK_THROWS_AS(classify_regime(broken), ValidationError);
    CHECK_THROWS_AS(make_relations(1e5, h_c, 0.01, r_r, r_r), ValidationError);
}
