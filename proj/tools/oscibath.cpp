// oscibath — simulate, analyze and sweep bosonic oscillators in mixed heat baths

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscibath/commands.hpp"

namespace {

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("--sync", "expected two channels like 1,2");
    return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
}

std::pair<double, double> parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected t_a:t_b");
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Master-equation simulation of bosonic oscillators in fermionic and bosonic heat baths"};
    app.require_subcommand(1);

    std::string scenario, output, csv, sync_text, window_text, name, out_dir;
    std::vector<std::string> values;

    auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write the time-series CSV");
    simulate->add_option("scenario", scenario, "scenario file")->required();
    simulate->add_option("output", output, "CSV to write")->required();

    oscibath::AnalyzeOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "report period, envelope and synchronization metrics of a CSV");
    analyze->add_option("csv", csv, "time-series CSV")->required();
    analyze->add_flag("--period", analyze_opts.period, "period, mean level and amplitude (default)");
    analyze->add_flag("--envelope", analyze_opts.envelope, "peak envelope and modulation depth");
    analyze->add_option("--sync", sync_text, "two channels, e.g. 1,2");
    analyze->add_option("--window", window_text, "analysis window t_a:t_b (default: second half)");
    analyze->add_option("--channel", analyze_opts.channel, "channel for --period/--envelope")->default_val(1);
    analyze->add_option("--atol", analyze_opts.atol, "absolute tolerance behind the stationarity threshold")
        ->default_val(1e-12);
    auto* transient_opt = analyze->add_option("--transient", "report transient end using windows of this length");

    oscibath::SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "run a scenario over several values of one parameter");
    sweep->add_option("scenario", scenario, "scenario file")->required();
    sweep->add_option("output_dir", sweep_opts.output_dir, "directory for run CSVs and summary.csv")->required();
    sweep->add_option("--param", sweep_opts.param, "dotted key, e.g. coupling.beta")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--jobs", sweep_opts.jobs, "concurrent runs")->default_val(1);

    auto* demo = app.add_subcommand("demo", "materialize, run and analyze a bundled scenario");
    demo->add_option("name", name, "fig2 or fig4")->required()->check(CLI::IsMember({"fig2", "fig4"}));
    demo->add_option("output_dir", out_dir, "directory for the artifacts")->default_val(".");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : oscibath::kExitConfig;
    }

    if (*simulate) return oscibath::cmd_simulate(scenario, output, std::cout, std::cerr);
    if (*analyze) {
        try {
            if (!sync_text.empty()) analyze_opts.sync = parse_pair(sync_text);
            if (!window_text.empty()) analyze_opts.window = parse_window(window_text);
            if (*transient_opt) analyze_opts.transient_window = transient_opt->as<double>();
        } catch (const std::exception& e) {
            std::cerr << "argument error: " << e.what() << '\n';
            return oscibath::kExitConfig;
        }
        return oscibath::cmd_analyze(csv, analyze_opts, std::cout, std::cerr);
    }
    if (*sweep) {
        sweep_opts.values = values;
        return oscibath::cmd_sweep(scenario, sweep_opts, std::cout, std::cerr);
    }
    return oscibath::cmd_demo(name, out_dir, std::cout, std::cerr);
}
