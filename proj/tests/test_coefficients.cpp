// test_coefficients.cpp — providers, spline and derivative hygiene

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oscibath/coefficients.hpp"

using namespace oscibath;

namespace {

PhenomenologicalParams wobbly() {
    PhenomenologicalParams p;
    p.mean_lambda = 0.1;
    p.amp_lambda = 0.05;
    p.mean_diffusion = 0.2;
    p.amp_diffusion = 0.1;
    p.osc_freq = 1.0;
    p.phase_diffusion = 1.0;
    p.ramp_time = 0.5;
    return p;
}

TabulatedParams sampled(double (*f)(double), double t0, double t1, double step) {
    TabulatedParams p;
    const auto count = static_cast<std::size_t>(std::llround((t1 - t0) / step)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = t0 + static_cast<double>(k) * step;
        p.table.t.push_back(t);
        p.table.lambda.push_back(f(t));
        p.table.diffusion.push_back(0.5 * f(t));
    }
    return p;
}

std::vector<double> random_times(double lo, double hi, std::size_t count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(count);
    for (auto& t : out) t = dist(rng);
    return out;
}

double identity(double t) { return t; }
double sine(double t) { return std::sin(t); }

}  // namespace

TEST_CASE("constant provider") {
    CHECK(eval_constant(0.5, 0.25, 3.0) == CoefficientSample{0.5, 0.25, 0.0, 0.0});
    CHECK(eval_constant(0.0, 0.0, 17.0) == CoefficientSample{});
    const ConstantCoefficients c(0.5, 0.25);
    const std::vector<double> times{1.0, 2.0, 3.0};
    CHECK(check_derivatives(c, times, 1e-4) == 0.0);
}

TEST_CASE("phenomenological provider vanishes at t = 0") {
    for (const auto& p : {wobbly(), PhenomenologicalParams{3, 1, 2, 2, 4.0, 1.0, 5.0, 0.1}})
        CHECK(eval_phenomenological(p, 0.0) == CoefficientSample{});
}

TEST_CASE("zero amplitudes settle on the means") {
    PhenomenologicalParams p;
    p.mean_lambda = 0.3;
    p.mean_diffusion = 0.2;
    const auto s = eval_phenomenological(p, 20.0);
    CHECK(s.lambda == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(s.diffusion == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(std::abs(s.dlambda_dt) < 1e-15);
}

TEST_CASE("phenomenological value at t = 10 matches a direct evaluation") {
    const auto p = wobbly();
    const auto s = eval_phenomenological(p, 10.0);
    const double ramp = 1.0 - std::exp(-400.0);
    CHECK(s.lambda == doctest::Approx(ramp * (0.1 + 0.05 * std::cos(10.0))).epsilon(1e-14));
    const double h = 1e-5;
    const double fd = (eval_phenomenological(p, 10.0 + h).lambda - eval_phenomenological(p, 10.0 - h).lambda) / (2 * h);
    CHECK(s.dlambda_dt == doctest::Approx(fd).epsilon(1e-8));
    CHECK(s.dlambda_dt == doctest::Approx(-0.05 * std::sin(10.0)).epsilon(1e-12));
}

TEST_CASE("phenomenological derivatives agree with central differences") {
    const PhenomenologicalCoefficients prov(wobbly());
    const std::vector<double> grid = [] {
        std::vector<double> g;
        for (double t = 0.5; t <= 20.0; t += 0.05) g.push_back(t);
        return g;
    }();
    CHECK(check_derivatives(prov, grid, 1e-4) <= 1e-6);
    CHECK(check_derivatives(prov, random_times(1e-3, 50.0, 1000, 7), 1e-4) <= 1e-6);
}

TEST_CASE("late-time coefficients repeat with the coefficient period") {
    const auto p = wobbly();
    const double period = 2.0 * std::numbers::pi / p.osc_freq;
    for (double t = 5.0 * p.ramp_time; t < 40.0; t += 0.37) {
        const auto a = eval_phenomenological(p, t);
        const auto b = eval_phenomenological(p, t + period);
        CHECK(std::abs(b.lambda - a.lambda) <= 1e-9 * (p.mean_lambda + p.amp_lambda));
        CHECK(std::abs(b.diffusion - a.diffusion) <= 1e-9 * (p.mean_diffusion + p.amp_diffusion));
    }
}

TEST_CASE("out-of-phase providers anticorrelate at late times") {
    auto p1 = wobbly();
    auto p2 = wobbly();
    p2.phase_lambda = std::numbers::pi;
    double m1 = 0, m2 = 0, c = 0;
    std::vector<double> l1, l2;
    for (double t = 10.0; t < 60.0; t += 0.01) {
        l1.push_back(eval_phenomenological(p1, t).lambda);
        l2.push_back(eval_phenomenological(p2, t).lambda);
        m1 += l1.back();
        m2 += l2.back();
    }
    m1 /= static_cast<double>(l1.size());
    m2 /= static_cast<double>(l2.size());
    for (std::size_t k = 0; k < l1.size(); ++k) c += (l1[k] - m1) * (l2[k] - m2);
    CHECK(c < 0.0);
}

TEST_CASE("spline reproduces a linear table exactly") {
    const TabulatedCoefficients tab(sampled(identity, 0.0, 10.0, 0.5));
    const auto s = eval_tabulated(tab, 3.5);
    CHECK(s.lambda == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(s.dlambda_dt == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tab.sample(3.7).lambda == doctest::Approx(3.7).epsilon(1e-13));
}

TEST_CASE("spline refuses to extrapolate") {
    const TabulatedCoefficients tab(sampled(identity, 0.0, 10.0, 0.5));
    CHECK_THROWS_AS(tab.sample(10.1), OutOfRange);
    CHECK_THROWS_AS(tab.sample(-0.1), OutOfRange);
    CHECK_NOTHROW(tab.sample(10.0));
}

TEST_CASE("spline of sin(t) at spacing 0.05") {
    const TabulatedCoefficients tab(sampled(sine, 0.0, 20.0, 0.05));
    const auto s = tab.sample(7.3);
    CHECK(std::abs(s.lambda - std::sin(7.3)) < 1e-6);
    CHECK(std::abs(s.dlambda_dt - std::cos(7.3)) < 1e-4);
    CHECK(check_derivatives(tab, random_times(0.01, 19.99, 1000, 11), 1e-4) <= 1e-3);
}

TEST_CASE("coefficient table file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "oscibath_table_test.csv";
    {
        std::ofstream out(path);
        out << "# comment\nt,lambda,D\n0,0.1,0.2\n1,0.2,0.3\n2,0.3,0.4\n3,0.4,0.5\n";
    }
    const auto table = read_coefficient_table(path.string());
    CHECK(table.t == std::vector<double>{0, 1, 2, 3});
    CHECK(table.diffusion[3] == 0.5);
    {
        std::ofstream out(path);
        out << "time,lambda,D\n0,0.1,0.2\n";
    }
    CHECK_THROWS(read_coefficient_table(path.string()));
    std::filesystem::remove(path);
}

TEST_CASE("make_provider dispatches on the variant") {
    CHECK(std::holds_alternative<ConstantParams>(make_provider(ConstantParams{1, 2})->describe()));
    CHECK(std::holds_alternative<PhenomenologicalParams>(make_provider(wobbly())->describe()));
    CHECK(std::holds_alternative<TabulatedParams>(make_provider(sampled(sine, 0, 5, 0.5))->describe()));
}
