#include "repoopt/commands.hpp"

#include "repoopt/errors.hpp"
#include "repoopt/general_repo.hpp"
#include "repoopt/monte_carlo.hpp"
#include "repoopt/special_repo.hpp"

#include <cmath>
#include <fmt/format.h>

namespace repoopt {

namespace {

void add_market_inputs(Section& in, const ScenarioFile& s) {
    const auto& m = s.market;
    in.add("spot_price", m.spot_price, s.currency)
        .add("intrinsic_yield", m.intrinsic_yield, units::per_annum(m.day_count))
        .add("volatility", m.volatility, "fraction_per_sqrt_year")
        .add("tenor_days", m.tenor_days, units::kDays)
        .add("risk_free", m.risk_free, units::per_annum(m.day_count))
        .add("day_count", m.day_count, units::kDays)
        .label("kind", std::string(to_string(s.kind)))
        .label("currency", s.currency);
}

void add_forward(ReportDocument& doc, const GaussianParams& fwd, const std::string& ccy) {
    doc.section("forward").add("mean", fwd.mean, ccy).add("sd", fwd.sd, ccy);
}

std::optional<McRequest> mc_request(const ScenarioFile& s, const CommandOptions& opts) {
    if (!s.mc && !opts.mc)
        return std::nullopt;
    McRequest req = s.mc.value_or(McRequest{});
    if (opts.seed)
        req.seed = *opts.seed;
    if (opts.mc_samples)
        req.n = *opts.mc_samples;
    return req;
}

// Adds MC estimates and closed-form deltas for one payoff, plus agreement checks.
void add_oracle(ReportDocument& doc, std::string_view prefix, PayoffMode mode, double strike,
                const GaussianParams& g, const McRequest& req, unsigned workers, double closed_mean,
                std::optional<double> closed_sd, const std::string& ccy, double mean_se_limit = kOracleSeTolerance) {
    const McEstimate est = mc_sample_stats(strike, g, req.n, req.seed, mode, workers);
    Section& sec = doc.section("oracle");
    const std::string p(prefix);
    sec.add(p + ".mc_mean", est.mean, ccy)
        .add(p + ".mc_sd", est.sd, ccy)
        .add(p + ".se_mean", est.se_mean, ccy)
        .add(p + ".se_sd", est.se_sd, ccy)
        .add(p + ".n_samples", static_cast<double>(est.n_samples), units::kCount)
        .add(p + ".closed_mean", closed_mean, ccy)
        .add(p + ".delta_mean", closed_mean - est.mean, ccy)
        .label(p + ".mode", std::string(to_string(mode)));

    auto within = [](double delta, double se, double k) { return std::abs(delta) <= k * se; };
    doc.checks.push_back({p + ".mean_vs_mc", closed_mean, est.mean, mean_se_limit * est.se_mean, ccy,
                          within(closed_mean - est.mean, est.se_mean, mean_se_limit)});
    if (closed_sd) {
        sec.add(p + ".closed_sd", *closed_sd, ccy).add(p + ".delta_sd", *closed_sd - est.sd, ccy);
        doc.checks.push_back({p + ".sd_vs_mc", *closed_sd, est.sd, kOracleSeTolerance * est.se_sd, ccy,
                              within(*closed_sd - est.sd, est.se_sd, kOracleSeTolerance)});
    }
    doc.provenance.mc_generator = std::string(kMcGeneratorName);
    doc.provenance.seed = req.seed;
}

void add_general_quote(Section& sec, const GeneralRepoQuote& q, const MarketParams& m, const std::string& ccy) {
    const std::string pa = units::per_annum(m.day_count);
    sec.add("repurchase_price", q.repurchase_price, ccy)
        .add("lent_amount", q.lent_amount, ccy)
        .add("haircut", q.haircut, ccy)
        .add("haircut_rate", q.haircut_rate, units::kFractionOfSpot)
        .add("repo_rate", q.repo_rate, pa)
        .add("repo_rate_period", m.to_period(q.repo_rate), units::kPerPeriod)
        .add("lender_rate", q.lender_rate, pa)
        .add("lender_rate_period", m.to_period(q.lender_rate), units::kPerPeriod)
        .add("revenue_mean", q.revenue_mean, ccy)
        .add("revenue_sd", q.revenue_sd, units::kFractionOfSpot)
        .add("revenue_sd_abs", q.revenue_sd_abs, ccy)
        .add("option_value_mean", q.option_value_mean, ccy)
        .add("option_yield", q.option_yield, units::kPerPeriod)
        .add("forward_mean", q.forward_mean, ccy);
}

} // namespace

ReportDocument cmd_price_general(const ScenarioFile& s, const CommandOptions& opts) {
    if (s.kind != ScenarioKind::General)
        throw ValidationError("price-general needs a 'general' scenario");
    const MarketParams& m = s.market;
    const double q1 = resolve_repurchase_price(s);
    const GeneralRepoQuote q = price_general_repo(m, q1);
    const GaussianParams fwd = forward_gaussian(m);

    ReportDocument doc;
    doc.command = "price-general";
    add_market_inputs(doc.section("inputs"), s);
    add_forward(doc, fwd, s.currency);
    add_general_quote(doc.section("quote"), q, m, s.currency);

    const double h_bs = bs_haircut(m, q1);
    Section& bs = doc.section("black_scholes");
    bs.add("haircut_bs", h_bs, s.currency)
        .add("haircut_gap", q.haircut - h_bs, s.currency)
        .add("haircut_rel_gap", (q.haircut - h_bs) / h_bs, units::kFraction);
    if (h_bs < m.spot_price)
        bs.add("lender_rate_bs", lender_rate_from_bs(m, q1), units::per_annum(m.day_count));

    const double residual = haircut_identity_residual(q, m);
    const double closure = q.revenue_mean / (q.lent_amount * (1.0 + m.to_period(q.lender_rate))) - 1.0;
    doc.section("identities")
        .add("haircut_identity_residual", residual, units::kPerPeriod)
        .add("revenue_discount_closure", closure, units::kFraction);
    doc.checks.push_back({"haircut_identity", residual, 0.0, kIdentityTolerance, std::string(units::kPerPeriod),
                          std::abs(residual) <= kIdentityTolerance});

    if (auto req = mc_request(s, opts))
        add_oracle(doc, "revenue", PayoffMode::Min, q1, fwd, *req, opts.mc_workers, q.revenue_mean,
                   q.revenue_sd_abs, s.currency);
    return doc;
}

SpecialRepoRelations resolve_relations(const ScenarioFile& s) {
    const auto* t = std::get_if<RelationsTerms>(&s.terms);
    if (t == nullptr)
        throw ValidationError("scenario is not a special_relations scenario");
    validate(MarketParams{.spot_price = s.market.spot_price,
                          .tenor_days = s.market.tenor_days,
                          .day_count = s.market.day_count});
    std::optional<double> h_c = t->general_haircut, h_p = t->special_haircut;
    std::optional<double> r_r, r_sr;
    if (t->general_rate)
        r_r = s.market.to_period(*t->general_rate);
    if (t->special_rate)
        r_sr = s.market.to_period(*t->special_rate);

    if (!r_sr)
        r_sr = special_rate(*h_c, *h_p, *r_r);
    else if (!h_p)
        h_p = special_haircut(*h_c, *r_r, *r_sr);
    else if (!h_c)
        h_c = 1.0 - (1.0 + *r_sr) * (1.0 - *h_p) / (1.0 + *r_r);
    else if (!r_r) {
        if (!(*h_c < 1.0))
            throw ValidationError("general haircut must be less than 1");
        r_r = (1.0 + *r_sr) * (1.0 - *h_p) / (1.0 - *h_c) - 1.0;
    }
    return make_relations(s.market.spot_price, *h_c, *h_p, *r_r, *r_sr, 1e-9);
}

ReportDocument cmd_price_special(const ScenarioFile& s, const CommandOptions& opts) {
    ReportDocument doc;
    doc.command = "price-special";
    const MarketParams& m = s.market;
    const std::string pa = units::per_annum(m.day_count);

    if (s.kind == ScenarioKind::SpecialLender) {
        const double q1 = resolve_repurchase_price(s);
        const SpecialLenderQuote q = price_lender_fail(m, q1);
        const GaussianParams fwd = forward_gaussian(m);
        add_market_inputs(doc.section("inputs"), s);
        add_forward(doc, fwd, s.currency);
        Section& sec = doc.section("quote");
        sec.add("premium", q.premium, s.currency)
            .add("premium_rate", q.premium_rate, units::kFractionOfSpot)
            .add("lent_amount", q.lent_amount, s.currency)
            .add("repurchase_price", q.repurchase_price, s.currency)
            .add("special_rate", q.special_rate, pa)
            .add("special_rate_period", m.to_period(q.special_rate), units::kPerPeriod)
            .add("put_value_mean", q.put_value_mean, s.currency);
        if (std::isfinite(q.trader_return))
            sec.add("trader_return", q.trader_return, units::kPerPeriod);
        sec.label("premium_convention", "lent_amount = spot_price + premium");
        if (auto req = mc_request(s, opts))
            add_oracle(doc, "put_payoff", PayoffMode::PutPayoff, q1, fwd, *req, opts.mc_workers, q.put_value_mean,
                       std::nullopt, s.currency);
        return doc;
    }

    if (s.kind != ScenarioKind::SpecialRelations)
        throw ValidationError("price-special needs a 'special_lender' or 'special_relations' scenario");

    const SpecialRepoRelations rel = resolve_relations(s);
    const Regime regime = classify_regime(rel);
    Section& in = doc.section("inputs");
    in.add("spot_price", m.spot_price, s.currency)
        .add("tenor_days", m.tenor_days, units::kDays)
        .add("day_count", m.day_count, units::kDays)
        .label("kind", std::string(to_string(s.kind)))
        .label("currency", s.currency);
    doc.section("relations")
        .add("general_rate", m.to_annual(rel.general_rate), pa)
        .add("general_rate_period", rel.general_rate, units::kPerPeriod)
        .add("special_rate", m.to_annual(rel.special_rate), pa)
        .add("special_rate_period", rel.special_rate, units::kPerPeriod)
        .add("general_haircut", rel.general_haircut, units::kFractionOfSpot)
        .add("special_haircut", rel.special_haircut, units::kFractionOfSpot)
        .add("fed_fee_rate", rel.fed_fee_rate, units::kFractionOfSpot)
        .add("max_fee", rel.max_fee, s.currency)
        .add("general_lend", rel.general_lend, s.currency)
        .add("rate_haircut_residual",
             rate_haircut_residual(rel.general_haircut, rel.special_haircut, rel.general_rate, rel.special_rate),
             units::kFraction)
        .label("regime", std::string(to_string(regime)))
        .label("haircut_convention", "lent_amount = spot_price * (1 - special_haircut)");
    return doc;
}

ReportDocument cmd_dealer_sim(const ScenarioFile& s, const CommandOptions& opts) {
    if (s.kind != ScenarioKind::Dealer)
        throw ValidationError("dealer-sim needs a 'dealer' scenario");
    const DealerScenario d = to_dealer_scenario(s);
    const DealerRun run = run_dealer_scenario(d, opts.strict);
    const std::string& ccy = s.currency;

    ReportDocument doc;
    doc.command = "dealer-sim";
    doc.section("inputs")
        .add("note_count", static_cast<double>(d.note_count), units::kCount)
        .add("note_spot", d.note_spot, ccy)
        .add("intermediate_price", d.intermediate_price, ccy)
        .add("special_rate_period", d.special_rate, units::kPerPeriod)
        .add("general_rate_period", d.general_rate, units::kPerPeriod)
        .add("special_haircut", d.special_haircut, units::kFractionOfSpot)
        .add("general_haircut", d.general_haircut, units::kFractionOfSpot)
        .add("fed_fee", d.fed_fee, ccy)
        .add("tenor_days", s.market.tenor_days, units::kDays)
        .add("day_count", s.market.day_count, units::kDays)
        .label("mode", opts.strict ? "strict" : "non_strict")
        .label("currency", ccy);
    doc.section("positions")
        .add("loan_value", d.loan_value(), ccy)
        .add("client_cash", d.client_cash(), ccy)
        .add("general_lend", d.general_lend(), ccy)
        .add("cover_cost", d.cover_cost(), ccy);
    doc.section("cashflows")
        .add("interest_flow", run.cashflows.interest_flow, ccy)
        .add("short_trade", run.cashflows.short_trade, ccy)
        .add("total", run.cashflows.total, ccy)
        .add("ledger_cash", run.ledger.cash, ccy);
    Section& liq = doc.section("liquidity");
    for (const auto& c : run.conditions) {
        const std::string name = condition_name(c.condition);
        liq.add(name + ".slack", c.slack, ccy);
        liq.label(name + ".status", fmt::format("{}{}", c.holds ? "holds" : "fails", c.enforced ? "" : " (not enforced)"));
    }
    doc.step_log = run.ledger.step_log;
    const double tol = 1e-9 * d.loan_value();
    doc.checks.push_back({"ledger_cash_matches_decomposition", run.ledger.cash, run.cashflows.total, tol, ccy,
                          std::abs(run.ledger.cash - run.cashflows.total) <= tol});
    return doc;
}

ReportDocument cmd_compare_bs(const ScenarioFile& s, const std::vector<double>& strikes) {
    if (s.kind != ScenarioKind::General)
        throw ValidationError("compare-bs needs a 'general' scenario");
    if (strikes.empty())
        throw ValidationError("compare-bs needs at least one strike");
    ReportDocument doc;
    doc.command = "compare-bs";
    add_market_inputs(doc.section("inputs"), s);
    add_forward(doc, forward_gaussian(s.market), s.currency);
    const auto rows = compare_with_bs(s.market, strikes);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        doc.section(fmt::format("strike_{}", i + 1))
            .add("repurchase_price", r.repurchase_price, s.currency)
            .add("haircut", r.haircut, s.currency)
            .add("haircut_bs", r.haircut_bs, s.currency)
            .add("abs_gap", r.abs_gap, s.currency)
            .add("rel_gap", r.rel_gap, units::kFraction);
    }
    return doc;
}

ReportDocument cmd_reproduce_examples(const CommandOptions& opts) {
    MarketParams m{.spot_price = 100000.0,
                   .intrinsic_yield = 0.03,
                   .volatility = 0.19,
                   .tenor_days = 1,
                   .risk_free = 0.0,
                   .day_count = opts.day_count.value_or(360)};
    validate(m);
    const std::string ccy = "USD";
    const std::string pa = units::per_annum(m.day_count);

    ReportDocument doc;
    doc.command = "reproduce-examples";
    doc.section("inputs")
        .add("spot_price", m.spot_price, ccy)
        .add("intrinsic_yield", m.intrinsic_yield, pa)
        .add("volatility", m.volatility, "fraction_per_sqrt_year")
        .add("tenor_days", m.tenor_days, units::kDays)
        .add("risk_free", m.risk_free, pa)
        .add("day_count", m.day_count, units::kDays);

    auto check = [&doc](std::string name, double computed, double expected, double tol, std::string unit) {
        doc.checks.push_back({std::move(name), computed, expected, tol, std::move(unit),
                              std::abs(computed - expected) <= tol});
    };

    const GaussianParams fwd = forward_gaussian(m);
    add_forward(doc, fwd, ccy);
    check("example1.forward_mean", fwd.mean, 100008.33, 0.01, ccy);

    // Case 1: three-sigma haircut.
    const double q1a = strike_from_sigma_multiple(m, 3.0);
    const GeneralRepoQuote a = price_general_repo(m, q1a);
    const double bs_a = bs_haircut(m, q1a);
    add_general_quote(doc.section("example1_case1"), a, m, ccy);
    doc.section("example1_case1").add("haircut_bs", bs_a, ccy);
    check("example1_case1.repurchase_price", q1a, 97003.92, 0.10, ccy);
    check("example1_case1.revenue_mean", a.revenue_mean, 97003.53, 0.05, ccy);
    check("example1_case1.revenue_sd", a.revenue_sd, 0.00015, 0.00002, std::string(units::kFractionOfSpot));
    check("example1_case1.haircut", a.haircut, 2996.47, 0.50, ccy);
    check("example1_case1.haircut_bs", bs_a, 2996.41, 1.00, ccy);
    check("example1_case1.haircut_gap", std::abs(a.haircut - bs_a), 0.0, 1.50, ccy);
    check("example1_case1.repo_rate", a.repo_rate, 0.0014, 0.0002, pa);

    // Case 2: two-sigma haircut.
    const double q1b = strike_from_sigma_multiple(m, 2.0);
    const GeneralRepoQuote b = price_general_repo(m, q1b);
    const double bs_b = bs_haircut(m, q1b);
    add_general_quote(doc.section("example1_case2"), b, m, ccy);
    doc.section("example1_case2").add("haircut_bs", bs_b, ccy);
    check("example1_case2.repurchase_price", q1b, 98005.39, 0.10, ccy);
    check("example1_case2.revenue_mean", b.revenue_mean, 97996.89, 0.10, ccy);
    check("example1_case2.revenue_sd", b.revenue_sd, 0.00077, 0.00004, std::string(units::kFractionOfSpot));
    check("example1_case2.lender_rate", b.lender_rate, 0.00018, 0.00003, pa);
    check("example1_case2.haircut", b.haircut, 2003.16, 0.50, ccy);
    check("example1_case2.haircut_bs", bs_b, 2002.76, 1.00, ccy);
    check("example1_case2.repo_rate", b.repo_rate, 0.031, 0.002, pa);

    // Lender-fail special repo struck at the forward mean.
    const SpecialLenderQuote sp = price_lender_fail(m, fwd.mean);
    doc.section("example2")
        .add("repurchase_price", sp.repurchase_price, ccy)
        .add("premium", sp.premium, ccy)
        .add("lent_amount", sp.lent_amount, ccy)
        .add("special_rate", sp.special_rate, pa)
        .add("put_value_mean", sp.put_value_mean, ccy);
    check("example2.premium_bs", sp.premium, 403.69, 1.00, ccy);
    check("example2.lent_amount", sp.lent_amount, 100403.69, 1.00, ccy);
    check("example2.special_rate", sp.special_rate, -1.42, 0.02, pa);
    check("example2.put_value_mean", sp.put_value_mean, 399.53, 0.50, ccy);

    if (opts.mc) {
        McRequest req{.n = opts.mc_samples.value_or(10'000'000), .seed = opts.seed.value_or(42)};
        add_oracle(doc, "example1_case1.revenue", PayoffMode::Min, q1a, fwd, req, opts.mc_workers, a.revenue_mean,
                   a.revenue_sd_abs, ccy, 3.0);
        add_oracle(doc, "example1_case2.revenue", PayoffMode::Min, q1b, fwd, req, opts.mc_workers, b.revenue_mean,
                   b.revenue_sd_abs, ccy);
        add_oracle(doc, "example2.put_payoff", PayoffMode::PutPayoff, fwd.mean, fwd, req, opts.mc_workers,
                   sp.put_value_mean, std::nullopt, ccy);
    }
    return doc;
}

} // namespace repoopt
