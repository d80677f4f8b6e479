#include "repoopt/report.hpp"

#include "repoopt/errors.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <stdexcept>

namespace repoopt {

using nlohmann::json;

std::string units::per_annum(int day_count) { return fmt::format("rate_per_annum_dc{}", day_count); }

Section& Section::add(std::string n, double v, std::string_view unit) {
    values.push_back({std::move(n), v, std::string(unit)});
    return *this;
}

Section& Section::label(std::string n, std::string v) {
    labels.push_back({std::move(n), std::move(v)});
    return *this;
}

double Section::value(std::string_view n) const {
    for (const auto& q : values)
        if (q.name == n)
            return q.value;
    throw std::out_of_range(fmt::format("section '{}' has no value '{}'", name, n));
}

Section& ReportDocument::section(std::string name) {
    for (auto& s : sections)
        if (s.name == name)
            return s;
    sections.push_back({std::move(name), {}, {}});
    return sections.back();
}

const Section& ReportDocument::find(std::string_view name) const {
    for (const auto& s : sections)
        if (s.name == name)
            return s;
    throw std::out_of_range(fmt::format("report has no section '{}'", name));
}

bool ReportDocument::all_checks_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "json")
        return OutputFormat::Json;
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "table")
        return OutputFormat::Table;
    throw ValidationError(fmt::format("unknown output format '{}'", name));
}

// ---- JSON -------------------------------------------------------------------

void to_json(json& j, const ReportDocument& doc) {
    json sections = json::array();
    for (const auto& s : doc.sections) {
        json values = json::array();
        for (const auto& q : s.values)
            values.push_back({{"name", q.name}, {"value", q.value}, {"unit", q.unit}});
        json labels = json::array();
        for (const auto& l : s.labels)
            labels.push_back({{"name", l.name}, {"value", l.value}});
        sections.push_back({{"name", s.name}, {"values", values}, {"labels", labels}});
    }
    json steps = json::array();
    for (const auto& r : doc.step_log)
        steps.push_back({{"step", r.step},
                         {"label", r.label},
                         {"cash_delta", r.cash_delta},
                         {"notes_delta", r.notes_delta},
                         {"collateral_delta", r.collateral_delta},
                         {"pledged_delta", r.pledged_delta},
                         {"cash_after", r.cash_after},
                         {"notes_after", r.notes_after},
                         {"collateral_after", r.collateral_after},
                         {"pledged_after", r.pledged_after}});
    json checks = json::array();
    for (const auto& c : doc.checks)
        checks.push_back({{"name", c.name},
                          {"computed", c.computed},
                          {"expected", c.expected},
                          {"tolerance", c.tolerance},
                          {"unit", c.unit},
                          {"pass", c.pass}});
    json prov = {{"artifact", doc.provenance.artifact}, {"version", doc.provenance.version}};
    if (doc.provenance.mc_generator)
        prov["mc_generator"] = *doc.provenance.mc_generator;
    if (doc.provenance.seed)
        prov["seed"] = *doc.provenance.seed;

    j = json{{"schema_version", doc.schema_version},
             {"command", doc.command},
             {"sections", sections},
             {"step_log", steps},
             {"checks", checks},
             {"provenance", prov}};
}

void from_json(const json& j, ReportDocument& doc) {
    doc = ReportDocument{};
    j.at("schema_version").get_to(doc.schema_version);
    j.at("command").get_to(doc.command);
    for (const auto& s : j.at("sections")) {
        Section sec;
        s.at("name").get_to(sec.name);
        for (const auto& q : s.at("values"))
            sec.values.push_back({q.at("name").get<std::string>(), q.at("value").get<double>(),
                                  q.at("unit").get<std::string>()});
        for (const auto& l : s.at("labels"))
            sec.labels.push_back({l.at("name").get<std::string>(), l.at("value").get<std::string>()});
        doc.sections.push_back(std::move(sec));
    }
    for (const auto& r : j.at("step_log")) {
        StepRecord rec;
        r.at("step").get_to(rec.step);
        r.at("label").get_to(rec.label);
        r.at("cash_delta").get_to(rec.cash_delta);
        r.at("notes_delta").get_to(rec.notes_delta);
        r.at("collateral_delta").get_to(rec.collateral_delta);
        r.at("pledged_delta").get_to(rec.pledged_delta);
        r.at("cash_after").get_to(rec.cash_after);
        r.at("notes_after").get_to(rec.notes_after);
        r.at("collateral_after").get_to(rec.collateral_after);
        r.at("pledged_after").get_to(rec.pledged_after);
        doc.step_log.push_back(std::move(rec));
    }
    for (const auto& c : j.at("checks"))
        doc.checks.push_back({c.at("name").get<std::string>(), c.at("computed").get<double>(),
                              c.at("expected").get<double>(), c.at("tolerance").get<double>(),
                              c.at("unit").get<std::string>(), c.at("pass").get<bool>()});
    const auto& p = j.at("provenance");
    p.at("artifact").get_to(doc.provenance.artifact);
    p.at("version").get_to(doc.provenance.version);
    if (p.contains("mc_generator"))
        doc.provenance.mc_generator = p.at("mc_generator").get<std::string>();
    if (p.contains("seed"))
        doc.provenance.seed = p.at("seed").get<std::uint64_t>();
}

std::string render_json(const ReportDocument& doc) { return json(doc).dump(2) + "\n"; }

// ---- CSV --------------------------------------------------------------------

namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

void csv_row(std::string& out, std::string_view record, std::string_view section, std::string_view name,
             std::string_view value, std::string_view unit) {
    out += fmt::format("{},{},{},{},{}\n", record, csv_field(section), csv_field(name), csv_field(value),
                       csv_field(unit));
}

std::string num(double v) { return fmt::format("{}", v); }

} // namespace

std::string render_csv(const ReportDocument& doc) {
    std::string out = "record,section,name,value,unit\n";
    csv_row(out, "meta", "report", "schema_version", doc.schema_version, "");
    csv_row(out, "meta", "report", "command", doc.command, "");
    for (const auto& s : doc.sections) {
        for (const auto& q : s.values)
            csv_row(out, "value", s.name, q.name, num(q.value), q.unit);
        for (const auto& l : s.labels)
            csv_row(out, "label", s.name, l.name, l.value, "");
    }
    for (const auto& r : doc.step_log) {
        const std::string sec = fmt::format("step_{}", r.step);
        csv_row(out, "step", sec, "label", r.label, "");
        csv_row(out, "step", sec, "cash_delta", num(r.cash_delta), "currency");
        csv_row(out, "step", sec, "notes_delta", std::to_string(r.notes_delta), "count");
        csv_row(out, "step", sec, "collateral_delta", num(r.collateral_delta), "currency");
        csv_row(out, "step", sec, "pledged_delta", num(r.pledged_delta), "currency");
        csv_row(out, "step", sec, "cash_after", num(r.cash_after), "currency");
        csv_row(out, "step", sec, "notes_after", std::to_string(r.notes_after), "count");
        csv_row(out, "step", sec, "collateral_after", num(r.collateral_after), "currency");
        csv_row(out, "step", sec, "pledged_after", num(r.pledged_after), "currency");
    }
    for (const auto& c : doc.checks) {
        csv_row(out, "check", c.name, "computed", num(c.computed), c.unit);
        csv_row(out, "check", c.name, "expected", num(c.expected), c.unit);
        csv_row(out, "check", c.name, "tolerance", num(c.tolerance), c.unit);
        csv_row(out, "check", c.name, "pass", c.pass ? "true" : "false", "");
    }
    csv_row(out, "meta", "provenance", "artifact", doc.provenance.artifact, "");
    csv_row(out, "meta", "provenance", "version", doc.provenance.version, "");
    if (doc.provenance.mc_generator)
        csv_row(out, "meta", "provenance", "mc_generator", *doc.provenance.mc_generator, "");
    if (doc.provenance.seed)
        csv_row(out, "meta", "provenance", "seed", std::to_string(*doc.provenance.seed), "");
    return out;
}

// ---- table ------------------------------------------------------------------

std::string render_table(const ReportDocument& doc) {
    std::string out = fmt::format("== {} ==\n", doc.command);
    for (const auto& s : doc.sections) {
        out += fmt::format("\n[{}]\n", s.name);
        std::size_t width = 0;
        for (const auto& q : s.values)
            width = std::max(width, q.name.size());
        for (const auto& l : s.labels)
            width = std::max(width, l.name.size());
        for (const auto& q : s.values)
            out += fmt::format("  {:<{}}  {:>18.10g}  {}\n", q.name, width, q.value, q.unit);
        for (const auto& l : s.labels)
            out += fmt::format("  {:<{}}  {:>18}\n", l.name, width, l.value);
    }
    if (!doc.step_log.empty()) {
        out += "\n[step_log]\n";
        out += fmt::format("  {:>4}  {:>16}  {:>8}  {:>16}  {:>8}  {}\n", "step", "cash_delta", "notes", "cash", "notes",
                           "label");
        for (const auto& r : doc.step_log)
            out += fmt::format("  {:>4}  {:>16.2f}  {:>8}  {:>16.2f}  {:>8}  {}\n", r.step, r.cash_delta,
                               r.notes_delta, r.cash_after, r.notes_after, r.label);
    }
    if (!doc.checks.empty()) {
        std::size_t width = 0;
        for (const auto& c : doc.checks)
            width = std::max(width, c.name.size());
        out += "\n[checks]\n";
        for (const auto& c : doc.checks)
            out += fmt::format("  {:<{}}  {:>16.8g}  expected {:>16.8g} +/- {:<10.4g} {}\n", c.name, width,
                               c.computed, c.expected, c.tolerance, c.pass ? "PASS" : "FAIL");
    }
    return out;
}

std::string render(const ReportDocument& doc, OutputFormat format) {
    switch (format) {
    case OutputFormat::Json:
        return render_json(doc);
    case OutputFormat::Csv:
        return render_csv(doc);
    case OutputFormat::Table:
        return render_table(doc);
    }
    return {};
}

} // namespace repoopt
