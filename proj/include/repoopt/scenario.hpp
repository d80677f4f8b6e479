#pragma once

#include "repoopt/dealer_ledger.hpp"
#include "repoopt/market.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace repoopt {

inline constexpr std::string_view kScenarioSchemaVersion = "1";

enum class ScenarioKind { General, SpecialLender, SpecialRelations, Dealer };

std::string_view to_string(ScenarioKind kind);

/// Repurchase price given directly or as a number of period standard
/// deviations below the forward mean.
struct StrikeTerms {
    std::optional<double> repurchase_price;
    std::optional<double> sigma_multiple;
};

/// Any three of the four; the missing one is solved from the others. Rates per annum.
struct RelationsTerms {
    std::optional<double> general_haircut;
    std::optional<double> special_haircut;
    std::optional<double> general_rate;
    std::optional<double> special_rate;
};

/// Rates per annum; converted to the scenario period by to_dealer_scenario().
struct DealerTerms {
    long note_count = 1;
    double note_spot = 0.0;
    double intermediate_price = 0.0;
    double special_rate = 0.0;
    double general_rate = 0.0;
    double special_haircut = 0.0;
    double general_haircut = 0.0;
    std::optional<double> fed_fee;  // empty means the maximum affordable fee
};

struct McRequest {
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 42;
};

struct ScenarioFile {
    std::string schema_version = std::string(kScenarioSchemaVersion);
    ScenarioKind kind = ScenarioKind::General;
    std::string currency = "USD";
    MarketParams market;
    bool has_spot_price = false;
    std::variant<StrikeTerms, RelationsTerms, DealerTerms> terms;
    std::optional<McRequest> mc;
};

/// Parses and structurally checks a scenario document. Unknown fields, missing
/// required fields, wrong types and an unsupported schema_version raise
/// ParseError; syntax errors report line and column.
ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const ScenarioFile& s);

/// Repurchase price for the strike-based kinds.
double resolve_repurchase_price(const ScenarioFile& s);

/// Per-period dealer scenario, with the fee resolved to its maximum when omitted.
DealerScenario to_dealer_scenario(const ScenarioFile& s);

} // namespace repoopt
