// test_commands.cpp — subcommands end to end, in process and through the executable

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <doctest.h>

#include "oscibath/commands.hpp"
#include "oscibath/series_csv.hpp"

using namespace oscibath;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("oscibath_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string write(const std::string& file, const std::string& text) const {
        std::ofstream(dir / file, std::ios::binary) << text;
        return (dir / file).string();
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

int run_cli(const std::string& args) {
    const int status = std::system((std::string(OSCIBATH_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::string kConstant = "[integration]\nt_end = 50\n[oscillator.1]\nomega = 1\n"
                              "[coefficients.1]\nkind = constant\nlambda = 0.5\nD = 0.25\n";

std::string detuned(double beta) {
    std::string text = demo_scenario_text("fig4");
    const auto pos = text.find("beta = 0.05");
    return text.replace(pos, 11, "beta = " + std::to_string(beta));
}

}  // namespace

TEST_CASE("simulate the single-oscillator demo") {
    Scratch s("simulate");
    const auto scenario = s.write("fig2.scenario", demo_scenario_text("fig2"));
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(scenario, (s.dir / "out.csv").string(), out, err) == kExitOk);
    const auto csv = slurp(s.dir / "out.csv");
    CHECK(csv.rfind("# oscibath-csv v1\nt,n1,v1,lambda1,D1\n", 0) == 0);
    CHECK(count_lines(csv) == 5001 + 2);
    CHECK(out.str().find("rows = 5001") != std::string::npos);
    CHECK(out.str().find("consistency_residual_1 = 0") != std::string::npos);
}

TEST_CASE("simulate reports config errors with exit 1") {
    Scratch s("bad_omega");
    const auto scenario = s.write("bad.scenario", "[oscillator.1]\nomega = -1\n[coefficients.1]\nkind = constant\n");
    std::ostringstream out, err;
    CHECK(cmd_simulate(scenario, (s.dir / "out.csv").string(), out, err) == kExitConfig);
    CHECK(err.str().find("omega") != std::string::npos);
    CHECK(cmd_simulate((s.dir / "missing").string(), (s.dir / "out.csv").string(), out, err) == kExitConfig);
}

TEST_CASE("decoupled pair reproduces the single run end to end") {
    Scratch s("decoupled");
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(s.write("pair.scenario", detuned(0.0)), (s.dir / "pair.csv").string(), out, err) == 0);
    std::string single = demo_scenario_text("fig4");
    single = single.substr(0, single.find("[oscillator.2]")) +
             single.substr(single.find("[coefficients.1]"), single.find("[coefficients.2]") - single.find("[coefficients.1]"));
    REQUIRE(cmd_simulate(s.write("one.scenario", single), (s.dir / "one.csv").string(), out, err) == 0);
    const auto pair = read_series_csv((s.dir / "pair.csv").string());
    const auto one = read_series_csv((s.dir / "one.csv").string());
    double worst = 0.0;
    for (std::size_t k = 0; k < one.size(); ++k) worst = std::max(worst, std::abs(pair.channels[0].n[k] - one.channels[0].n[k]));
    CHECK(worst < 1e-9);
}

TEST_CASE("analyze the single-oscillator demo") {
    Scratch s("analyze");
    std::ostringstream out, err;
    REQUIRE(cmd_demo("fig2", s.dir.string(), out, err) == kExitOk);
    out.str("");
    AnalyzeOptions opts;
    opts.period = true;
    opts.envelope = true;
    REQUIRE(cmd_analyze((s.dir / "fig2.csv").string(), opts, out, err) == kExitOk);
    const auto report = out.str();
    CHECK(report.find("is_stationary = false") != std::string::npos);
    const auto pos = report.find("period = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(report.substr(pos + 9)) == doctest::Approx(6.283185).epsilon(0.02));
    CHECK(report.find("modulation_depth = ") != std::string::npos);
}

TEST_CASE("analyze a relaxing run reports the fixed point and exit 3") {
    Scratch s("stationary");
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(s.write("c.scenario", kConstant), (s.dir / "c.csv").string(), out, err) == 0);
    out.str("");
    CHECK(cmd_analyze((s.dir / "c.csv").string(), {}, out, err) == kExitInconclusive);
    CHECK(out.str().find("is_stationary = true") != std::string::npos);
    const auto pos = out.str().find("mean_level = ");
    CHECK(std::abs(std::stod(out.str().substr(pos + 13)) - 0.5) < 1e-6);
}

TEST_CASE("analyze --sync on a decoupled detuned pair") {
    Scratch s("sync");
    std::ostringstream out, err;
    REQUIRE(cmd_simulate(s.write("p.scenario", detuned(0.0)), (s.dir / "p.csv").string(), out, err) == 0);
    out.str("");
    AnalyzeOptions opts;
    opts.sync = std::pair<std::size_t, std::size_t>{1, 2};
    REQUIRE(cmd_analyze((s.dir / "p.csv").string(), opts, out, err) == kExitOk);
    const auto pos = out.str().find("period_ratio = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(out.str().substr(pos + 15)) == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("analyze rejects foreign csv and missing channels") {
    Scratch s("schema");
    std::ostringstream out, err;
    CHECK(cmd_analyze(s.write("x.csv", "# oscibath-csv v9\nt,n1,v1,lambda1,D1\n"), {}, out, err) == kExitConfig);
    REQUIRE(cmd_simulate(s.write("c.scenario", kConstant), (s.dir / "c.csv").string(), out, err) == 0);
    AnalyzeOptions opts;
    opts.channel = 2;
    CHECK(cmd_analyze((s.dir / "c.csv").string(), opts, out, err) == kExitConfig);
}

TEST_CASE("sweep isolates a malformed value") {
    Scratch s("sweep_bad");
    SweepOptions opts{"coupling.beta", {"0.05", "oops", "0.2"}, (s.dir / "runs").string(), 2};
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(s.write("p.scenario", detuned(0.05)), opts, out, err) == kExitOk);
    const auto summary = slurp(s.dir / "runs" / "summary.csv");
    std::istringstream lines(summary);
    std::string header, r1, r2, r3;
    std::getline(lines, header);
    std::getline(lines, r1);
    std::getline(lines, r2);
    std::getline(lines, r3);
    CHECK(header == "value,period_1,period_2,modulation_depth_1,modulation_depth_2,phase_lock_score,status");
    CHECK(r1.substr(r1.rfind(',') + 1) == "ok");
    CHECK(r2.find("failed") != std::string::npos);
    CHECK(r3.substr(r3.rfind(',') + 1) == "ok");
    CHECK(fs::exists(s.dir / "runs" / "run_1.csv"));
    CHECK_FALSE(fs::exists(s.dir / "runs" / "run_2.csv"));
}

TEST_CASE("sweep over rtol gives consistent periods") {
    const std::string text = demo_scenario_text("fig2");
    Scratch s("sweep_rtol");
    const auto rows = run_sweep(text, "fig2", {"integration.rtol", {"1e-6", "1e-9"}, s.dir.string(), 1});
    REQUIRE(rows.size() == 2);
    REQUIRE(rows[0].period_1);
    REQUIRE(rows[1].period_1);
    CHECK(std::abs(*rows[0].period_1 - *rows[1].period_1) < 1e-3);
}

TEST_CASE("sweep rejects unknown keys up front") {
    Scratch s("sweep_key");
    std::ostringstream out, err;
    SweepOptions opts{"coupling.gamma", {"1"}, s.dir.string(), 1};
    CHECK(cmd_sweep(s.write("p.scenario", detuned(0.05)), opts, out, err) == kExitConfig);
}

TEST_CASE("fig2 demo is byte-for-byte reproducible") {
    Scratch a("demo_a"), b("demo_b");
    std::ostringstream out, err;
    REQUIRE(cmd_demo("fig2", a.dir.string(), out, err) == 0);
    REQUIRE(cmd_demo("fig2", b.dir.string(), out, err) == 0);
    CHECK(slurp(a.dir / "fig2.csv") == slurp(b.dir / "fig2.csv"));
    CHECK(slurp(a.dir / "fig2_report.txt") == slurp(b.dir / "fig2_report.txt"));
}

TEST_CASE("executable exit codes") {
    Scratch s("exe");
    const auto good = s.write("c.scenario", kConstant);
    const auto bad = s.write("bad.scenario", "[oscillator.1]\nomega = -1\n");
    const auto csv = (s.dir / "c.csv").string();
    CHECK(run_cli("simulate " + good + " " + csv) == 0);
    CHECK(run_cli("simulate " + bad + " " + csv) == 1);
    CHECK(run_cli("analyze " + csv + " --period") == 3);
    CHECK(run_cli("analyze " + csv + " --window 40:50 --atol 1e-12") == 3);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("demo fig2 " + (s.dir / "d").string()) == 0);
    CHECK(run_cli("analyze " + (s.dir / "d" / "fig2.csv").string() + " --envelope --transient 6.283") == 0);
    CHECK(run_cli("sweep " + good + " " + (s.dir / "sw").string() + " --param coefficients.1.lambda --values 0.5,0.6") == 0);
    CHECK(fs::exists(s.dir / "sw" / "summary.csv"));
}

TEST_CASE("integration failure maps to exit 2") {
    Scratch s("blowup");
    const auto scenario = s.write("b.scenario", "[integration]\nt_end = 50\n[oscillator.1]\nomega = 1\nn0 = 1\n"
                                                "[coefficients.1]\nkind = constant\nlambda = -40\nD = 0\n");
    std::ostringstream out, err;
    const int rc = cmd_simulate(scenario, (s.dir / "b.csv").string(), out, err);
    CHECK(rc == kExitIntegration);
    CHECK(err.str().find("non-finite") != std::string::npos);
}

TEST_CASE("parallel sweep matches the sequential one") {
    Scratch a("jobs1"), b("jobs3");
    const std::string text = demo_scenario_text("fig4");
    const std::vector<std::string> values{"0", "0.05", "0.2"};
    std::ostringstream one, three;
    write_sweep_summary(run_sweep(text, "fig4", {"coupling.beta", values, a.dir.string(), 1}), one);
    write_sweep_summary(run_sweep(text, "fig4", {"coupling.beta", values, b.dir.string(), 3}), three);
    CHECK(one.str() == three.str());
    CHECK(slurp(a.dir / "run_3.csv") == slurp(b.dir / "run_3.csv"));
}
