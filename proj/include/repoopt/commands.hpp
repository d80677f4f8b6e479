#pragma once

#include "repoopt/report.hpp"
#include "repoopt/scenario.hpp"
#include "repoopt/special_repo.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace repoopt {

struct CommandOptions {
    bool strict = true;
    bool mc = false;                        // run the Monte Carlo oracle even without an mc block
    std::optional<std::uint64_t> seed;      // overrides the scenario's seed
    std::optional<std::uint64_t> mc_samples;
    std::optional<int> day_count;           // reproduce-examples only
    unsigned mc_workers = 0;
};

/// Tolerance on the haircut/rate identity residual reported by price-general.
inline constexpr double kIdentityTolerance = 1e-9;

/// Oracle agreement threshold, in standard errors.
inline constexpr double kOracleSeTolerance = 4.0;

ReportDocument cmd_price_general(const ScenarioFile& s, const CommandOptions& opts = {});

/// Lender-fail quote or rate/haircut relations with regime, depending on the scenario kind.
ReportDocument cmd_price_special(const ScenarioFile& s, const CommandOptions& opts = {});

/// Throws LiquidityError when an enforced condition fails.
ReportDocument cmd_dealer_sim(const ScenarioFile& s, const CommandOptions& opts = {});

/// Ergodic haircut vs Black-Scholes call across strikes, for a general scenario's market.
ReportDocument cmd_compare_bs(const ScenarioFile& s, const std::vector<double>& strikes);

/// Recomputes both worked examples (overnight repo, P0 = 100000, 3% yield,
/// 19% vol, zero risk-free rate) and checks each figure against its reference.
ReportDocument cmd_reproduce_examples(const CommandOptions& opts = {});

/// Solves the missing member of a relations scenario. Rates per period.
SpecialRepoRelations resolve_relations(const ScenarioFile& s);

} // namespace repoopt
