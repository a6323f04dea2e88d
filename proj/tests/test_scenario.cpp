// test_scenario.cpp — scenario grammar and time-series CSV schema

#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "oscibath/commands.hpp"
#include "oscibath/integrator.hpp"
#include "oscibath/scenario.hpp"
#include "oscibath/series_csv.hpp"

using namespace oscibath;

namespace {

constexpr const char* kPair = R"(
[integration]
t_end = 5
output_dt = 0.05

[oscillator.1]
omega = 1
n0 = 0.25

[oscillator.2]
omega = 1.5

[coefficients.1]
kind = constant
lambda = 0.5
D = 0.25

[coefficients.2]
kind = phenomenological
mean_lambda = 0.2
amp_lambda = 0.1
mean_D = 0.3
amp_D = 0.05
phase_D = 1

[bath.2.1]
statistics = fermionic
temperature = 0.5
alpha = 0.03
gamma = 12

[coupling]
beta.1.2 = 0.125
)";

std::string message_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const InvalidConfig& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("scenario fields land in the config") {
    const auto c = parse_scenario(kPair);
    REQUIRE(c.oscillators.size() == 2);
    CHECK(c.oscillators[0].n0 == 0.25);
    CHECK(c.oscillators[1].omega == 1.5);
    CHECK(c.t_end == 5.0);
    CHECK(c.rtol == 1e-9);
    CHECK(c.coupling(1, 0) == 0.125);
    const auto& p = std::get<PhenomenologicalParams>(c.providers[1]);
    CHECK(p.osc_freq == 1.5);
    CHECK(p.phase_diffusion == 1.0);
    CHECK(c.baths[1].size() == 1);
    CHECK(c.baths[1][0].statistics == BathStatistics::fermionic);
    CHECK(c.baths[0].empty());
}

TEST_CASE("scenario round trip is the identity") {
    const auto once = parse_scenario(kPair);
    const auto text = serialize_scenario(once);
    CHECK(parse_scenario(text) == once);
    CHECK(serialize_scenario(parse_scenario(text)) == text);
    for (const auto& name : demo_names()) {
        const auto demo = parse_scenario(demo_scenario_text(name));
        CHECK(parse_scenario(serialize_scenario(demo)) == demo);
    }
}

TEST_CASE("scenario errors name the key and line") {
    CHECK(message_of("[oscillator.1]\nomega = -1\n[coefficients.1]\nkind = constant\n").find("omega") !=
          std::string::npos);
    CHECK(message_of("[oscillator.1]\nomega = abc\n").find("oscillator.1.omega (line 2)") != std::string::npos);
    CHECK(message_of("[oscillator.1]\nomega = 1\nomgea = 2\n").find("omgea") != std::string::npos);
    CHECK(message_of("[oscillator.1]\nomega = 1\nomega = 2\n").find("duplicate") != std::string::npos);
    CHECK_FALSE(message_of("[oscilator.1]\nomega = 1\n").empty());
    CHECK_FALSE(message_of("[oscillator.1]\nn0 = 1\n").empty());
}

TEST_CASE("dotted set edits one field") {
    auto doc = ScenarioDocument::parse(kPair);
    doc.set("coupling.beta", "0.5");
    CHECK(to_config(doc).coupling(0, 1) == 0.5);
    doc.set("oscillator.2.omega", "2");
    CHECK(to_config(doc).oscillators[1].omega == 2.0);
    doc.set("integration.rtol", "1e-6");
    CHECK(to_config(doc).rtol == 1e-6);
    CHECK_THROWS_AS(doc.set("oscillator.9", "1"), InvalidConfig);
}

TEST_CASE("tabulated coefficients read from a file") {
    const auto dir = std::filesystem::temp_directory_path() / "oscibath_scenario_tab";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "coeff.csv");
        out << "t,lambda,D\n";
        for (int k = 0; k <= 20; ++k) out << k * 0.5 << ",0.5,0.25\n";
    }
    const std::string text = "[integration]\nt_end = 10\noutput_dt = 0.1\n[oscillator.1]\nomega = 1\n"
                             "[coefficients.1]\nkind = tabulated\nfile = " +
                             (dir / "coeff.csv").string() + "\n";
    const auto c = parse_scenario(text);
    const auto s = integrate_coupled(c);
    CHECK(s.channels[0].n[10] == doctest::Approx(0.31606028).epsilon(1e-7));
    CHECK(parse_scenario(serialize_scenario(c)) == c);
    std::filesystem::remove_all(dir);
}

TEST_CASE("series csv round trip") {
    const auto c = parse_scenario(kPair);
    const auto s = integrate_coupled(c);
    std::stringstream buf;
    write_series_csv(s, buf);
    const std::string text = buf.str();
    CHECK(text.rfind("# oscibath-csv v1\nt,n1,v1,lambda1,D1,n2,v2,lambda2,D2\n", 0) == 0);
    const auto back = read_series_csv(buf);
    CHECK(back.t == s.t);
    CHECK(back.channels[1].n == s.channels[1].n);
    CHECK(back.channels[0].diffusion == s.channels[0].diffusion);
    CHECK(back.dt == doctest::Approx(0.05));
}

TEST_CASE("series csv schema violations") {
    const auto reject = [](const std::string& text) {
        std::istringstream in(text);
        CHECK_THROWS_AS(read_series_csv(in), SchemaError);
    };
    reject("# oscibath-csv v2\nt,n1,v1,lambda1,D1\n0,0,0,0,0\n1,0,0,0,0\n");
    reject("t,n1,v1,lambda1,D1\n0,0,0,0,0\n");
    reject("# oscibath-csv v1\nt,n1,v1,lambda1\n0,0,0,0\n1,0,0,0\n");
    reject("# oscibath-csv v1\nt,n1,v1,lambda1,D1\n0,0,0,0,0\n1,0,0,0\n");
    reject("# oscibath-csv v1\nt,n1,v1,lambda1,D1\n0,0,0,0,0\n1,0,0,0,0\n3,0,0,0,0\n");
}

TEST_CASE("omitted v0 takes the consistent slope") {
    const auto c = parse_scenario("[oscillator.1]\nomega = 1\nn0 = 0.2\n[coefficients.1]\nkind = constant\n"
                                  "lambda = 0.5\nD = 0.25\n");
    CHECK(c.oscillators[0].v0 == doctest::Approx(0.5 - 0.2));
    const auto given = parse_scenario("[oscillator.1]\nomega = 1\nv0 = 1\n[coefficients.1]\nkind = constant\n");
    CHECK(given.oscillators[0].v0 == 1.0);
    const auto ramped = parse_scenario(demo_scenario_text("fig2"));
    CHECK(ramped.oscillators[0].v0 == 0.0);
}
