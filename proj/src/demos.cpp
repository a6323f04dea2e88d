// demos.cpp — bundled single- and two-oscillator scenarios (fig2, fig4)
//
// Coefficient magnitudes are illustrative. The comments inside each scenario
// mark which numbers are published reference values.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "oscibath/analysis.hpp"
#include "oscibath/commands.hpp"
#include "oscibath/integrator.hpp"
#include "oscibath/scenario.hpp"
#include "oscibath/series_csv.hpp"
#include "text_util.hpp"

namespace oscibath {

namespace {

constexpr const char* kFig2 = R"(# fig2: one bosonic oscillator embedded in a fermionic and a bosonic heat bath.
#
# Reference values: the initial condition n(0) = 0 and the bath
# parameters in [bath.1.1] and [bath.1.2]. The baths are metadata only.
# Everything in [coefficients.1] except ramp_time is an illustrative default
# chosen so that n(t) settles quickly; it is not extracted from any data.

[integration]
t_end = 50
output_dt = 0.01
rtol = 1e-9
atol = 1e-12

[oscillator.1]
omega = 1            # reference frequency, all times are in units of 1/omega
n0 = 0               # reference: initially unoccupied
v0 = 0               # consistent with dn/dt = -2 lambda n + 2 D at t = 0

[coefficients.1]
kind = phenomenological
mean_lambda = 0.3    # illustrative
amp_lambda = 0.05    # illustrative
mean_D = 0.3         # illustrative
amp_D = 0.15         # illustrative
phase_lambda = 0     # illustrative
phase_D = 1.5707963267948966   # illustrative; D/lambda must not be constant
ramp_time = 0.5      # transient scale omega t <= 0.5 (reference)
# osc_freq defaults to omega

[bath.1.1]
statistics = fermionic   # which bath is fermionic is not stated; illustrative
temperature = 1          # reference: kT1/(hbar omega) = 1
alpha = 0.1              # reference: alpha1 = 0.1
gamma = 10               # reference: gamma1/omega = 10

[bath.1.2]
statistics = bosonic
temperature = 0.1        # reference: kT2/(hbar omega) = 0.1
alpha = 0.05             # reference: alpha2 = 0.05
gamma = 15               # reference: gamma2/omega = 15
)";

constexpr const char* kFig4 = R"(# fig4: two coupled bosonic oscillators, each with its own pair of baths.
#
# Reference values: n(0) = 0 and dn/dt(0) = 0 for both oscillators, and
# the bath parameters (gamma/omega1 = 12, alpha = 0.03, kT/(hbar omega1) = 0.5).
# The demo sweeps beta over 0.05, 0.2, 0.5. The detuning omega2/omega1 = 1.5
# and all coefficient magnitudes are illustrative defaults. The two
# oscillators' coefficients oscillate out of phase (phases differ by pi).

[integration]
t_end = 100
output_dt = 0.01
rtol = 1e-9
atol = 1e-12

[oscillator.1]
omega = 1
n0 = 0               # reference
v0 = 0               # reference

[oscillator.2]
omega = 1.5          # illustrative detuning
n0 = 0               # reference
v0 = 0               # reference

[coefficients.1]
kind = phenomenological
mean_lambda = 0.3    # illustrative
amp_lambda = 0.05    # illustrative
mean_D = 0.3         # illustrative
amp_D = 0.15         # illustrative
phase_lambda = 0
phase_D = 1.5707963267948966
ramp_time = 0.5

[coefficients.2]
kind = phenomenological
mean_lambda = 0.3
amp_lambda = 0.05
mean_D = 0.3
amp_D = 0.15
phase_lambda = 3.1415926535897931   # out of phase with oscillator 1
phase_D = 4.7123889803846897
ramp_time = 0.5

[bath.1.1]
statistics = fermionic
temperature = 0.5    # reference
alpha = 0.03         # reference
gamma = 12           # reference

[bath.1.2]
statistics = bosonic
temperature = 0.5
alpha = 0.03
gamma = 12

[bath.2.1]
statistics = fermionic
temperature = 0.5
alpha = 0.03
gamma = 12

[bath.2.2]
statistics = bosonic
temperature = 0.5
alpha = 0.03
gamma = 12

[coupling]
beta = 0.05
)";

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

int demo_fig2(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
    const auto scenario_path = dir / "fig2.scenario";
    write_text(scenario_path, kFig2);
    const SimulationConfig config = load_scenario(scenario_path.string());

    TimeSeries series;
    try {
        series = integrate_coupled(config);
    } catch (const IntegrationError& e) {
        err << "integration failed: " << e.what() << '\n';
        return kExitIntegration;
    }
    write_series_csv(series, (dir / "fig2.csv").string());

    std::ostringstream report;
    const double t_a = 0.5 * config.t_end;
    const double t_b = series.t.back();
    report << "window = " << detail::format_short(t_a) << ':' << detail::format_short(t_b) << '\n';
    int status = kExitOk;
    try {
        const auto r = analyze_oscillation(channel_view(series, 0), t_a, t_b, config.atol);
        report << "is_stationary = " << (r.is_stationary ? "true" : "false") << '\n';
        report << "mean_level = " << detail::format_pm(r.mean_level, r.mean_uncertainty) << '\n';
        if (r.is_stationary) {
            err << "no oscillation found\n";
            status = kExitInconclusive;
        } else {
            const double expected = 2.0 * std::numbers::pi / config.oscillators[0].omega;
            report << "period = " << detail::format_pm(*r.period, *r.period_uncertainty) << '\n';
            report << "expected_period = " << detail::format_short(expected) << '\n';
            report << "relative_deviation = " << detail::format_short(std::abs(*r.period - expected) / expected) << '\n';
            report << "amplitude = " << detail::format_short(r.amplitude) << '\n';
            report << "transient_end = " << detail::format_short(r.transient_end) << '\n';
        }
    } catch (const AnalysisError& e) {
        err << "analysis inconclusive: " << e.what() << '\n';
        status = kExitInconclusive;
    }
    write_text(dir / "fig2_report.txt", report.str());
    out << report.str();
    return status;
}

int demo_fig4(const std::filesystem::path& dir, std::ostream& out, std::ostream& err) {
    const auto scenario_path = dir / "fig4.scenario";
    write_text(scenario_path, kFig4);
    load_scenario(scenario_path.string());  // surfaces config errors before the sweep

    SweepOptions options;
    options.param = "coupling.beta";
    options.values = fig4_beta_values();
    options.output_dir = (dir / "fig4_runs").string();
    options.jobs = 1;
    const auto rows = run_sweep(kFig4, scenario_path.string(), options);

    std::ostringstream summary;
    write_sweep_summary(rows, summary);
    write_text(dir / "fig4_summary.csv", summary.str());

    std::ostringstream report;
    bool ordered_1 = true, ordered_2 = true, complete = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        if (!r.modulation_depth_1 || !r.modulation_depth_2) {
            complete = false;
            continue;
        }
        report << "beta = " << r.value << ": modulation_depth_1 = " << detail::format_short(*r.modulation_depth_1)
               << ", modulation_depth_2 = " << detail::format_short(*r.modulation_depth_2);
        if (r.phase_lock_score) report << ", phase_lock_score = " << detail::format_short(*r.phase_lock_score);
        report << '\n';

        ScenarioDocument doc = ScenarioDocument::parse(kFig4);
        doc.set("coupling.beta", r.value);
        const auto candidates = eigenfrequency_candidates(to_config(doc));
        for (const auto& [index, period] : {std::pair{1, r.period_1}, std::pair{2, r.period_2}}) {
            if (!period) continue;
            const double freq = 2.0 * std::numbers::pi / *period;
            const auto nearest = nearest_eigenfrequency(freq, candidates);
            report << "  n" << index << ": frequency = " << detail::format_short(freq) << ", nearest candidate = "
                   << detail::format_short(nearest.frequency) << (nearest.is_bare ? " (bare omega)" : " (coupling normal mode)")
                   << '\n';
        }
        if (k > 0 && rows[k - 1].modulation_depth_1 && rows[k - 1].modulation_depth_2) {
            ordered_1 = ordered_1 && *r.modulation_depth_1 >= *rows[k - 1].modulation_depth_1;
            ordered_2 = ordered_2 && *r.modulation_depth_2 >= *rows[k - 1].modulation_depth_2;
        }
    }
    report << "modulation_depth_nondecreasing_in_beta = "
           << (complete && ordered_1 && ordered_2 ? "true" : "false") << '\n';
    write_text(dir / "fig4_report.txt", report.str());
    out << report.str();

    for (const auto& r : rows)
        if (r.status != "ok") err << "beta = " << r.value << ": " << r.status << '\n';
    return complete ? kExitOk : kExitInconclusive;
}

}  // namespace

std::vector<std::string> demo_names() { return {"fig2", "fig4"}; }

std::vector<std::string> fig4_beta_values() { return {"0.05", "0.2", "0.5"}; }

std::string demo_scenario_text(const std::string& name) {
    if (name == "fig2") return kFig2;
    if (name == "fig4") return kFig4;
    throw InvalidConfig("unknown demo '" + name + "' (expected fig2 or fig4)");
}

int cmd_demo(const std::string& name, const std::string& output_dir, std::ostream& out, std::ostream& err) {
    try {
        demo_scenario_text(name);
        std::filesystem::create_directories(output_dir);
        if (name == "fig2") return demo_fig2(output_dir, out, err);
        return demo_fig4(output_dir, out, err);
    } catch (const InvalidConfig& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace oscibath
