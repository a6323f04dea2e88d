// commands.hpp — Subcommands behind the `oscibath` executable
//
// Every command returns a process exit code:
//   0 success, 1 configuration or schema error, 2 integration failure,
//   3 analysis inconclusive (no oscillation, ambiguous period, too few peaks).

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oscibath/model.hpp"

namespace oscibath {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIntegration = 2, kExitInconclusive = 3 };

int cmd_simulate(const std::string& scenario_path, const std::string& output_path, std::ostream& out,
                 std::ostream& err);

struct AnalyzeOptions {
    bool period{false};
    bool envelope{false};
    std::optional<std::pair<std::size_t, std::size_t>> sync;  // 1-based oscillator indices
    std::optional<std::pair<double, double>> window;         // default: second half of the record
    std::size_t channel{1};
    double atol{1e-12};
    std::optional<double> transient_window;
};

int cmd_analyze(const std::string& csv_path, const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

struct SweepOptions {
    std::string param;  // dotted scenario key, e.g. coupling.beta
    std::vector<std::string> values;
    std::string output_dir;
    std::size_t jobs{1};
};

int cmd_sweep(const std::string& scenario_path, const SweepOptions& options, std::ostream& out, std::ostream& err);

int cmd_demo(const std::string& name, const std::string& output_dir, std::ostream& out, std::ostream& err);

// Bundled demo scenarios (with explanatory comments) by name: fig2, fig4.
std::string demo_scenario_text(const std::string& name);
std::vector<std::string> demo_names();
// Coupling strengths swept by the fig4 demo.
std::vector<std::string> fig4_beta_values();

// One row of a sweep summary.
struct SweepRow {
    std::string value;
    std::optional<double> period_1, period_2;
    std::optional<double> modulation_depth_1, modulation_depth_2;
    std::optional<double> phase_lock_score;
    std::string status{"ok"};
};

// Runs one scenario document per value (in parallel up to `jobs`), writing
// `<output_dir>/run_<k>.csv` for each successful run.
std::vector<SweepRow> run_sweep(const std::string& scenario_text, const std::string& origin, const SweepOptions& options);

void write_sweep_summary(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace oscibath
