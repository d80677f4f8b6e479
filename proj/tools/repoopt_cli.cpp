// repoopt: price the implicit options inside general and special repos.
//
//   repoopt price-general <file>
//   repoopt price-special <file>
//   repoopt dealer-sim <file> [--no-strict]
//   repoopt reproduce-examples [--mc] [--day-count 365]
//   repoopt compare-bs <file> --strikes 97000,98000
//
// Global flags: --format json|csv|table, --seed <int>, --out <path>.
// Exit codes: 0 ok, 2 parse, 3 validation, 4 tolerance/identity, 5 liquidity, 6 pricing.

#include "repoopt/commands.hpp"
#include "repoopt/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kParse = 2,
    kValidation = 3,
    kTolerance = 4,
    kLiquidity = 5,
    kPricing = 6,
};

} // namespace

int main(int argc, char** argv) {
    using namespace repoopt;

    CLI::App app{"Repo haircut and special-rate pricing via implicit options"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::string out_path;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
    app.add_option("--seed", seed, "Monte Carlo seed (overrides the scenario)");
    app.add_option("--out", out_path, "Write the report to this file instead of stdout");

    std::string scenario_path;
    auto* general = app.add_subcommand("price-general", "Price the implicit call in a general repo");
    general->add_option("file", scenario_path, "Scenario JSON")->required();
    bool general_mc = false;
    general->add_flag("--mc", general_mc, "Run the Monte Carlo oracle");

    auto* special = app.add_subcommand("price-special", "Lender-fail quote or dealer rate/haircut relations");
    special->add_option("file", scenario_path, "Scenario JSON")->required();
    bool special_mc = false;
    special->add_flag("--mc", special_mc, "Run the Monte Carlo oracle (lender-fail only)");

    auto* dealer = app.add_subcommand("dealer-sim", "Replay the dealer-fail ledger");
    dealer->add_option("file", scenario_path, "Scenario JSON")->required();
    bool no_strict = false;
    dealer->add_flag("--no-strict", no_strict, "Allow the short-trade profit to fund the closing payment");

    auto* reproduce = app.add_subcommand("reproduce-examples", "Recompute the worked examples and check them");
    bool reproduce_mc = false;
    std::optional<int> day_count;
    std::optional<std::uint64_t> samples;
    reproduce->add_flag("--mc", reproduce_mc, "Add Monte Carlo oracle checks");
    reproduce->add_option("--day-count", day_count, "Override the 360-day convention")->check(CLI::IsMember({360, 365}));
    reproduce->add_option("--samples", samples, "Monte Carlo sample count (default 10^7)");

    auto* compare = app.add_subcommand("compare-bs", "Ergodic haircut against Black-Scholes across strikes");
    compare->add_option("file", scenario_path, "General scenario JSON")->required();
    std::vector<double> strikes;
    compare->add_option("--strikes", strikes, "Repurchase prices")->delimiter(',')->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kParse;
    }

    try {
        CommandOptions opts;
        opts.seed = seed;
        ReportDocument doc;
        if (*general) {
            opts.mc = general_mc;
            doc = cmd_price_general(load_scenario(scenario_path), opts);
        } else if (*special) {
            opts.mc = special_mc;
            doc = cmd_price_special(load_scenario(scenario_path), opts);
        } else if (*dealer) {
            opts.strict = !no_strict;
            doc = cmd_dealer_sim(load_scenario(scenario_path), opts);
        } else if (*reproduce) {
            opts.mc = reproduce_mc;
            opts.day_count = day_count;
            opts.mc_samples = samples;
            doc = cmd_reproduce_examples(opts);
        } else if (*compare) {
            doc = cmd_compare_bs(load_scenario(scenario_path), strikes);
        }

        const std::string text = render(doc, output_format_from_string(format));
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return kInternal;
            }
            out << text;
        }

        if (!doc.all_checks_pass()) {
            std::cerr << "tolerance failures:\n";
            for (const auto& c : doc.checks)
                if (!c.pass)
                    std::cerr << "  " << c.name << ": computed " << c.computed << ", expected " << c.expected
                              << " +/- " << c.tolerance << "\n";
            return kTolerance;
        }
        return kOk;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const LiquidityError& e) {
        std::cerr << "liquidity error at step " << e.step() << ": " << e.what() << "\n";
        return kLiquidity;
    } catch (const PricingError& e) {
        std::cerr << "pricing error: " << e.what() << "\n";
        return kPricing;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternal;
    }
}
