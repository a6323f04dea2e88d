#include "oscibath/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "oscibath/analysis.hpp"
#include "oscibath/integrator.hpp"
#include "oscibath/scenario.hpp"
#include "oscibath/series_csv.hpp"
#include "text_util.hpp"

namespace oscibath {

namespace {

void print_run_summary(const TimeSeries& series, std::ostream& out) {
    const auto& d = series.diagnostics;
    out << "rows = " << series.size() << '\n';
    out << "steps_accepted = " << d.accepted_steps << '\n';
    out << "steps_rejected = " << d.rejected_steps << '\n';
    for (std::size_t i = 0; i < d.consistency_residual.size(); ++i)
        out << "consistency_residual_" << i + 1 << " = " << detail::format_short(d.consistency_residual[i]) << '\n';
    out << "negative_samples = " << d.negative_samples << '\n';
    out << "most_negative = " << detail::format_short(d.most_negative) << '\n';
}

std::pair<double, double> default_window(const SeriesData& series) {
    const double t0 = series.t.front();
    const double t1 = series.t.back();
    return {t0 + 0.5 * (t1 - t0), t1};
}

}  // namespace

int cmd_simulate(const std::string& scenario_path, const std::string& output_path, std::ostream& out,
                 std::ostream& err) {
    SimulationConfig config;
    try {
        config = load_scenario(scenario_path);
    } catch (const InvalidConfig& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    TimeSeries series;
    try {
        series = integrate_coupled(config);
    } catch (const IntegrationError& e) {
        err << "integration failed: " << e.what() << '\n';
        return kExitIntegration;
    } catch (const OutOfRange& e) {
        err << "integration failed: coefficient provider: " << e.what() << '\n';
        return kExitIntegration;
    }
    try {
        write_series_csv(series, output_path);
    } catch (const std::runtime_error& e) {
        err << "output error: " << e.what() << '\n';
        return kExitConfig;
    }
    print_run_summary(series, out);
    return kExitOk;
}

int cmd_analyze(const std::string& csv_path, const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
    SeriesData series;
    try {
        series = read_series_csv(csv_path);
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kExitConfig;
    }
    const std::size_t count = series.channels.size();
    const auto check_channel = [&](std::size_t c) {
        if (c < 1 || c > count) {
            err << "channel " << c << " not present (file has " << count << ")\n";
            return false;
        }
        return true;
    };
    if (!check_channel(options.channel)) return kExitConfig;
    if (options.sync && (!check_channel(options.sync->first) || !check_channel(options.sync->second)))
        return kExitConfig;

    const auto [t_a, t_b] = options.window.value_or(default_window(series));
    const bool want_period = options.period || (!options.envelope && !options.sync);
    const SignalView channel = channel_view(series, options.channel - 1);

    try {
        out << "window = " << detail::format_short(t_a) << ':' << detail::format_short(t_b) << '\n';
        if (want_period) {
            const auto report = analyze_oscillation(channel, t_a, t_b, options.atol);
            out << "is_stationary = " << (report.is_stationary ? "true" : "false") << '\n';
            out << "mean_level = " << detail::format_pm(report.mean_level, report.mean_uncertainty) << '\n';
            if (report.is_stationary) {
                err << "no oscillation in channel " << options.channel << " over the analysis window\n";
                return kExitInconclusive;
            }
            out << "period = " << detail::format_pm(*report.period, *report.period_uncertainty) << '\n';
            out << "spectral_period = " << detail::format_short(*report.spectral_period) << '\n';
            out << "amplitude = " << detail::format_short(report.amplitude) << '\n';
            if (!options.transient_window) {
                out << "transient_end = " << detail::format_short(report.transient_end)
                    << (report.transient_low_confidence ? " (low confidence)" : "") << '\n';
            }
        }
        if (options.transient_window) {
            const auto transient = detect_transient(channel, *options.transient_window);
            out << "transient_end = " << detail::format_short(transient.transient_end)
                << (transient.low_confidence ? " (low confidence)" : "") << '\n';
        }
        if (options.envelope) {
            const auto env = envelope(channel, t_a, t_b);
            out << "peak_count = " << env.peak_values.size() << '\n';
            out << "modulation_depth = " << detail::format_short(env.modulation_depth) << '\n';
        }
        if (options.sync) {
            const auto sync = synchronization_metrics(channel_view(series, options.sync->first - 1),
                                                      channel_view(series, options.sync->second - 1), t_a, t_b,
                                                      options.atol);
            out << "period_a = " << detail::format_short(sync.period_a) << '\n';
            out << "period_b = " << detail::format_short(sync.period_b) << '\n';
            out << "period_ratio = " << detail::format_pm(sync.period_ratio, sync.period_ratio_uncertainty) << '\n';
            out << "phase_lock_score = " << detail::format_short(sync.phase_lock_score) << '\n';
        }
    } catch (const AnalysisError& e) {
        err << "analysis inconclusive: " << e.what() << '\n';
        return kExitInconclusive;
    }
    return kExitOk;
}

std::vector<SweepRow> run_sweep(const std::string& scenario_text, const std::string& origin,
                                const SweepOptions& options) {
    const ScenarioDocument base = ScenarioDocument::parse(scenario_text, origin);
    {
        ScenarioDocument probe = base;
        probe.set(options.param, "0");  // rejects keys that are not numeric fields
    }
    std::filesystem::create_directories(options.output_dir);

    std::vector<SweepRow> rows(options.values.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t k = next++; k < rows.size(); k = next++) {
            SweepRow& row = rows[k];
            row.value = options.values[k];
            try {
                ScenarioDocument doc = base;
                doc.set(options.param, row.value);
                const SimulationConfig config = to_config(doc);
                const TimeSeries series = integrate_coupled(config);
                const auto path = std::filesystem::path(options.output_dir) / ("run_" + std::to_string(k + 1) + ".csv");
                write_series_csv(series, path.string());

                const auto [t_a, t_b] = default_window(series);
                std::vector<std::string> notes;
                for (std::size_t i = 0; i < std::min<std::size_t>(2, series.channels.size()); ++i) {
                    const auto view = channel_view(series, i);
                    try {
                        const auto report = extract_period(view, t_a, t_b, config.atol);
                        (i == 0 ? row.period_1 : row.period_2) = *report.period;
                    } catch (const AnalysisError& e) {
                        notes.push_back("period_" + std::to_string(i + 1) + ": " + e.what());
                    }
                    try {
                        (i == 0 ? row.modulation_depth_1 : row.modulation_depth_2) =
                            envelope(view, t_a, t_b).modulation_depth;
                    } catch (const AnalysisError& e) {
                        notes.push_back("envelope_" + std::to_string(i + 1) + ": " + e.what());
                    }
                }
                if (series.channels.size() >= 2) {
                    const auto a = slice(channel_view(series, 0), t_a, t_b);
                    const auto b = slice(channel_view(series, 1), t_a, t_b);
                    row.phase_lock_score = phase_lock_score(a.y, b.y);
                }
                if (!notes.empty()) {
                    row.status = "partial:";
                    for (const auto& n : notes) row.status += " " + n;
                }
            } catch (const std::exception& e) {
                row.status = std::string("failed: ") + e.what();
            }
        }
    };

    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, rows.size()));
    std::vector<std::thread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

void write_sweep_summary(const std::vector<SweepRow>& rows, std::ostream& out) {
    const auto cell = [](const std::optional<double>& v) { return v ? detail::format_double(*v) : std::string{}; };
    out << "value,period_1,period_2,modulation_depth_1,modulation_depth_2,phase_lock_score,status\n";
    for (const auto& r : rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        std::string value = r.value;
        std::replace(value.begin(), value.end(), ',', ';');
        out << value << ',' << cell(r.period_1) << ',' << cell(r.period_2) << ',' << cell(r.modulation_depth_1) << ','
            << cell(r.modulation_depth_2) << ',' << cell(r.phase_lock_score) << ',' << status << '\n';
    }
}

int cmd_sweep(const std::string& scenario_path, const SweepOptions& options, std::ostream& out, std::ostream& err) {
    std::ifstream in(scenario_path);
    if (!in) {
        err << "config error: cannot open scenario '" << scenario_path << "'\n";
        return kExitConfig;
    }
    std::stringstream text;
    text << in.rdbuf();

    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(text.str(), scenario_path, options);
    } catch (const InvalidConfig& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "output error: " << e.what() << '\n';
        return kExitConfig;
    }

    const auto summary_path = std::filesystem::path(options.output_dir) / "summary.csv";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary) {
        err << "output error: cannot write '" << summary_path.string() << "'\n";
        return kExitConfig;
    }
    write_sweep_summary(rows, summary);
    write_sweep_summary(rows, out);
    for (const auto& r : rows)
        if (r.status != "ok") err << "value " << r.value << ": " << r.status << '\n';
    return kExitOk;
}

}  // namespace oscibath
