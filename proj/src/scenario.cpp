#include "repoopt/scenario.hpp"

#include "repoopt/errors.hpp"
#include "repoopt/general_repo.hpp"
#include "repoopt/special_repo.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace repoopt {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object())
        throw ParseError(fmt::format("'{}' must be an object", where));
    for (const auto& [key, _] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError(fmt::format("unknown field '{}.{}'", where, key));
}

template <typename T>
T get_required(const json& obj, std::string_view where, const std::string& key) {
    if (!obj.contains(key))
        throw ParseError(fmt::format("missing required field '{}.{}'", where, key));
    try {
        return obj.at(key).get<T>();
    } catch (const json::type_error&) {
        throw ParseError(fmt::format("field '{}.{}' has the wrong type", where, key));
    }
}

template <typename T>
std::optional<T> get_optional(const json& obj, std::string_view where, const std::string& key) {
    if (!obj.contains(key))
        return std::nullopt;
    return get_required<T>(obj, where, key);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte > 0 ? byte - 1 : 0, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

ScenarioKind kind_from_string(const std::string& s) {
    if (s == "general")
        return ScenarioKind::General;
    if (s == "special_lender")
        return ScenarioKind::SpecialLender;
    if (s == "special_relations")
        return ScenarioKind::SpecialRelations;
    if (s == "dealer")
        return ScenarioKind::Dealer;
    throw ParseError(fmt::format("unknown scenario kind '{}'", s));
}

StrikeTerms parse_strike_terms(const json& t) {
    reject_unknown(t, "terms", {"repurchase_price", "sigma_multiple"});
    StrikeTerms terms;
    terms.repurchase_price = get_optional<double>(t, "terms", "repurchase_price");
    terms.sigma_multiple = get_optional<double>(t, "terms", "sigma_multiple");
    if (terms.repurchase_price.has_value() == terms.sigma_multiple.has_value())
        throw ParseError("terms must give exactly one of 'repurchase_price' or 'sigma_multiple'");
    return terms;
}

RelationsTerms parse_relations_terms(const json& t) {
    reject_unknown(t, "terms", {"general_haircut", "special_haircut", "general_rate", "special_rate"});
    RelationsTerms r;
    r.general_haircut = get_optional<double>(t, "terms", "general_haircut");
    r.special_haircut = get_optional<double>(t, "terms", "special_haircut");
    r.general_rate = get_optional<double>(t, "terms", "general_rate");
    r.special_rate = get_optional<double>(t, "terms", "special_rate");
    const int given = r.general_haircut.has_value() + r.special_haircut.has_value() + r.general_rate.has_value() +
                      r.special_rate.has_value();
    if (given < 3)
        throw ParseError("special_relations terms need at least three of general_haircut, special_haircut, "
                         "general_rate, special_rate");
    return r;
}

DealerTerms parse_dealer_terms(const json& t) {
    reject_unknown(t, "terms",
                   {"note_count", "note_spot", "intermediate_price", "special_rate", "general_rate",
                    "special_haircut", "general_haircut", "fed_fee"});
    DealerTerms d;
    d.note_count = get_required<long>(t, "terms", "note_count");
    d.note_spot = get_required<double>(t, "terms", "note_spot");
    d.intermediate_price = get_required<double>(t, "terms", "intermediate_price");
    d.special_rate = get_required<double>(t, "terms", "special_rate");
    d.general_rate = get_required<double>(t, "terms", "general_rate");
    d.special_haircut = get_required<double>(t, "terms", "special_haircut");
    d.general_haircut = get_required<double>(t, "terms", "general_haircut");
    if (t.contains("fed_fee")) {
        const auto& fee = t.at("fed_fee");
        if (fee.is_string()) {
            if (fee.get<std::string>() != "max")
                throw ParseError("field 'terms.fed_fee' must be a number or \"max\"");
        } else if (fee.is_number()) {
            d.fed_fee = fee.get<double>();
        } else {
            throw ParseError("field 'terms.fed_fee' has the wrong type");
        }
    }
    return d;
}

} // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::General:
        return "general";
    case ScenarioKind::SpecialLender:
        return "special_lender";
    case ScenarioKind::SpecialRelations:
        return "special_relations";
    case ScenarioKind::Dealer:
        return "dealer";
    }
    return "?";
}

ScenarioFile parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ParseError(fmt::format("invalid JSON at line {}, column {}: {}", line, col, e.what()));
    }
    reject_unknown(doc, "scenario", {"schema_version", "kind", "currency", "market", "terms", "mc"});

    ScenarioFile s;
    s.schema_version = get_required<std::string>(doc, "scenario", "schema_version");
    if (s.schema_version != kScenarioSchemaVersion)
        throw ParseError(fmt::format("unsupported schema_version '{}' (expected '{}')", s.schema_version,
                                     kScenarioSchemaVersion));
    s.kind = kind_from_string(get_required<std::string>(doc, "scenario", "kind"));
    if (auto c = get_optional<std::string>(doc, "scenario", "currency"))
        s.currency = *c;

    const json& market = doc.contains("market") ? doc.at("market") : json::object();
    reject_unknown(market, "market",
                   {"spot_price", "intrinsic_yield", "volatility", "tenor_days", "risk_free", "day_count"});
    if (auto v = get_optional<double>(market, "market", "spot_price")) {
        s.market.spot_price = *v;
        s.has_spot_price = true;
    }
    s.market.intrinsic_yield = get_optional<double>(market, "market", "intrinsic_yield").value_or(0.0);
    s.market.volatility = get_optional<double>(market, "market", "volatility").value_or(0.0);
    s.market.risk_free = get_optional<double>(market, "market", "risk_free").value_or(0.0);
    s.market.tenor_days = get_optional<int>(market, "market", "tenor_days").value_or(1);
    s.market.day_count = get_optional<int>(market, "market", "day_count").value_or(360);
    if (s.kind != ScenarioKind::Dealer && !s.has_spot_price)
        throw ParseError("missing required field 'market.spot_price'");

    if (!doc.contains("terms"))
        throw ParseError("missing required field 'scenario.terms'");
    const json& terms = doc.at("terms");
    switch (s.kind) {
    case ScenarioKind::General:
    case ScenarioKind::SpecialLender:
        s.terms = parse_strike_terms(terms);
        break;
    case ScenarioKind::SpecialRelations:
        s.terms = parse_relations_terms(terms);
        break;
    case ScenarioKind::Dealer:
        s.terms = parse_dealer_terms(terms);
        break;
    }

    if (doc.contains("mc")) {
        const json& mc = doc.at("mc");
        reject_unknown(mc, "mc", {"n", "seed"});
        McRequest req;
        req.n = get_optional<std::uint64_t>(mc, "mc", "n").value_or(req.n);
        req.seed = get_optional<std::uint64_t>(mc, "mc", "seed").value_or(req.seed);
        s.mc = req;
    }
    return s;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(fmt::format("cannot open scenario file '{}'", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

json scenario_to_json(const ScenarioFile& s) {
    json market = {{"intrinsic_yield", s.market.intrinsic_yield},
                   {"volatility", s.market.volatility},
                   {"tenor_days", s.market.tenor_days},
                   {"risk_free", s.market.risk_free},
                   {"day_count", s.market.day_count}};
    if (s.has_spot_price)
        market["spot_price"] = s.market.spot_price;
    json terms = json::object();
    if (const auto* st = std::get_if<StrikeTerms>(&s.terms)) {
        if (st->repurchase_price)
            terms["repurchase_price"] = *st->repurchase_price;
        if (st->sigma_multiple)
            terms["sigma_multiple"] = *st->sigma_multiple;
    } else if (const auto* rt = std::get_if<RelationsTerms>(&s.terms)) {
        if (rt->general_haircut)
            terms["general_haircut"] = *rt->general_haircut;
        if (rt->special_haircut)
            terms["special_haircut"] = *rt->special_haircut;
        if (rt->general_rate)
            terms["general_rate"] = *rt->general_rate;
        if (rt->special_rate)
            terms["special_rate"] = *rt->special_rate;
    } else if (const auto* dt = std::get_if<DealerTerms>(&s.terms)) {
        terms = {{"note_count", dt->note_count},
                 {"note_spot", dt->note_spot},
                 {"intermediate_price", dt->intermediate_price},
                 {"special_rate", dt->special_rate},
                 {"general_rate", dt->general_rate},
                 {"special_haircut", dt->special_haircut},
                 {"general_haircut", dt->general_haircut}};
        if (dt->fed_fee)
            terms["fed_fee"] = *dt->fed_fee;
        else
            terms["fed_fee"] = "max";
    }
    json out = {{"schema_version", s.schema_version},
                {"kind", std::string(to_string(s.kind))},
                {"currency", s.currency},
                {"market", market},
                {"terms", terms}};
    if (s.mc)
        out["mc"] = {{"n", s.mc->n}, {"seed", s.mc->seed}};
    return out;
}

double resolve_repurchase_price(const ScenarioFile& s) {
    const auto* st = std::get_if<StrikeTerms>(&s.terms);
    if (st == nullptr)
        throw ValidationError("scenario kind has no repurchase price");
    if (st->repurchase_price)
        return *st->repurchase_price;
    return strike_from_sigma_multiple(s.market, *st->sigma_multiple);
}

DealerScenario to_dealer_scenario(const ScenarioFile& s) {
    const auto* dt = std::get_if<DealerTerms>(&s.terms);
    if (dt == nullptr)
        throw ValidationError("scenario is not a dealer scenario");
    validate(MarketParams{.spot_price = 1.0,
                          .tenor_days = s.market.tenor_days,
                          .day_count = s.market.day_count});

    DealerScenario d;
    d.note_count = dt->note_count;
    d.note_spot = dt->note_spot;
    d.intermediate_price = dt->intermediate_price;
    d.special_rate = s.market.to_period(dt->special_rate);
    d.general_rate = s.market.to_period(dt->general_rate);
    d.special_haircut = dt->special_haircut;
    d.general_haircut = dt->general_haircut;
    if (s.has_spot_price && std::abs(s.market.spot_price - d.loan_value()) > 1e-9 * d.loan_value())
        throw ValidationError(fmt::format("market.spot_price {} differs from note_count * note_spot = {}",
                                          s.market.spot_price, d.loan_value()));
    validate(DealerScenario{d});
    d.fed_fee = dt->fed_fee ? *dt->fed_fee
                            : max_fed_fee(d.loan_value(), d.special_haircut, d.general_rate, d.special_rate);
    validate(d);
    return d;
}

} // namespace repoopt
