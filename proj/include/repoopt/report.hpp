#pragma once

#include "repoopt/dealer_ledger.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace repoopt {

inline constexpr std::string_view kArtifactVersion = "1.0.0";
inline constexpr std::string_view kReportSchemaVersion = "1";

/// Unit strings used in reports. Rates always say whether they are per period
/// or per annum, and per-annum rates carry their day count.
namespace units {
inline constexpr std::string_view kFraction = "fraction";
inline constexpr std::string_view kFractionOfSpot = "fraction_of_spot";
inline constexpr std::string_view kPerPeriod = "rate_per_period";
inline constexpr std::string_view kCount = "count";
inline constexpr std::string_view kDays = "days";
inline constexpr std::string_view kNone = "";
std::string per_annum(int day_count);
} // namespace units

struct Quantity {
    std::string name;
    double value = 0.0;
    std::string unit;

    bool operator==(const Quantity&) const = default;
};

struct Label {
    std::string name;
    std::string value;

    bool operator==(const Label&) const = default;
};

struct Section {
    std::string name;
    std::vector<Quantity> values;
    std::vector<Label> labels;

    Section& add(std::string name, double value, std::string_view unit);
    Section& label(std::string name, std::string value);
    /// Throws std::out_of_range if absent.
    double value(std::string_view name) const;

    bool operator==(const Section&) const = default;
};

/// One reproduced figure compared against its reference value.
struct Check {
    std::string name;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string unit;
    bool pass = false;

    bool operator==(const Check&) const = default;
};

struct Provenance {
    std::string artifact = "repoopt";
    std::string version = std::string(kArtifactVersion);
    std::optional<std::string> mc_generator;
    std::optional<std::uint64_t> seed;

    bool operator==(const Provenance&) const = default;
};

struct ReportDocument {
    std::string schema_version = std::string(kReportSchemaVersion);
    std::string command;
    std::vector<Section> sections;
    std::vector<StepRecord> step_log;
    std::vector<Check> checks;
    Provenance provenance;

    Section& section(std::string name);
    /// Throws std::out_of_range if absent.
    const Section& find(std::string_view name) const;
    bool all_checks_pass() const;

    bool operator==(const ReportDocument&) const = default;
};

enum class OutputFormat { Json, Csv, Table };

OutputFormat output_format_from_string(std::string_view name);

void to_json(nlohmann::json& j, const ReportDocument& doc);
void from_json(const nlohmann::json& j, ReportDocument& doc);

std::string render_json(const ReportDocument& doc);

/// Long-format CSV with the fixed header `record,section,name,value,unit`.
/// Numbers are written in shortest round-trip form.
std::string render_csv(const ReportDocument& doc);

/// Human-readable aligned view; numbers rounded for display.
std::string render_table(const ReportDocument& doc);

std::string render(const ReportDocument& doc, OutputFormat format);

} // namespace repoopt
