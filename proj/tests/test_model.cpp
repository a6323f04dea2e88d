// test_model.cpp — configuration validation

#include <doctest.h>

#include "oscibath/model.hpp"

using namespace oscibath;

namespace {

SimulationConfig single(double n0 = 0.0) {
    SimulationConfig c;
    c.oscillators = {{1.0, n0, 0.0}};
    c.providers = {ConstantParams{0.5, 0.25}};
    c.coupling = CouplingNetwork(1);
    c.t_end = 50.0;
    return c;
}

SimulationConfig pair(double b01, double b10) {
    SimulationConfig c;
    c.oscillators = {{1.0, 0.0, 0.0}, {1.5, 0.0, 0.0}};
    c.providers = {ConstantParams{0.5, 0.25}, ConstantParams{0.5, 0.25}};
    c.coupling = CouplingNetwork(2);
    c.coupling(0, 1) = b01;
    c.coupling(1, 0) = b10;
    return c;
}

std::string rejection(const SimulationConfig& c) {
    try {
        validate_config(c);
    } catch (const InvalidConfig& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("unoccupied single oscillator is accepted") {
    const auto v = validate_config(single());
    CHECK(v.oscillators.size() == 1);
    CHECK(v.baths.size() == 1);
}

TEST_CASE("negative n0 is rejected by name") {
    CHECK(rejection(single(-0.1)).find("n0 negative") != std::string::npos);
}

TEST_CASE("tiny coupling asymmetry is averaged away") {
    const auto v = validate_config(pair(0.3, 0.3 + 1e-13));
    CHECK(v.coupling(0, 1) == v.coupling(1, 0));
    CHECK(v.coupling(0, 1) == doctest::Approx(0.3 + 5e-14).epsilon(1e-15));
}

TEST_CASE("coupling violations") {
    CHECK(rejection(pair(0.3, 0.4)).find("beta not symmetric") != std::string::npos);
    CHECK(rejection(pair(-0.1, -0.1)).find("beta negative") != std::string::npos);
    auto c = pair(0.1, 0.1);
    c.coupling(0, 0) = 0.2;
    CHECK(rejection(c).find("diagonal") != std::string::npos);
}

TEST_CASE("scalar field violations") {
    auto c = single();
    c.oscillators[0].omega = -1.0;
    CHECK(rejection(c).find("omega") != std::string::npos);
    c = single();
    c.output_dt = 0.0;
    CHECK_FALSE(rejection(c).empty());
    c = single();
    c.rtol = -1.0;
    CHECK_FALSE(rejection(c).empty());
    c = single();
    c.providers = {PhenomenologicalParams{0.1, 0.2, 0.1, 0.05}};
    CHECK(rejection(c).find("friction") != std::string::npos);
    std::get<PhenomenologicalParams>(c.providers[0]).allow_negative_friction = true;
    CHECK(rejection(c).empty());
}

TEST_CASE("tabulated grid must cover the run") {
    auto c = single();
    c.t_end = 5.0;
    c.providers = {TabulatedParams{"", {{0, 1, 2, 3}, {0, 0, 0, 0}, {0, 0, 0, 0}}}};
    CHECK(rejection(c).find("cover") != std::string::npos);
}

TEST_CASE("validation is idempotent") {
    for (const auto& c : {single(0.3), pair(0.3, 0.3 + 1e-13), pair(0.0, 0.0)}) {
        const auto once = validate_config(c);
        CHECK(validate_config(once) == once);
    }
}

TEST_CASE("grid size counts both endpoints") {
    CHECK(grid_size(50.0, 0.01) == 5001);
    CHECK(grid_size(1.0, 0.3) == 4);
}
