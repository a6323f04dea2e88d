#include "oscibath/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oscibath {

CouplingNetwork CouplingNetwork::uniform(std::size_t n, double beta) {
    CouplingNetwork net(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) net(i, j) = beta;
    return net;
}

bool operator==(const BathSpec& a, const BathSpec& b) {
    return a.statistics == b.statistics && a.temperature == b.temperature &&
           a.coupling == b.coupling && a.cutoff == b.cutoff;
}

bool operator==(const OscillatorSpec& a, const OscillatorSpec& b) {
    return a.omega == b.omega && a.n0 == b.n0 && a.v0 == b.v0;
}

bool operator==(const SimulationConfig& a, const SimulationConfig& b) {
    return a.oscillators == b.oscillators && a.baths == b.baths && a.providers == b.providers &&
           a.coupling == b.coupling && a.t_end == b.t_end && a.output_dt == b.output_dt &&
           a.rtol == b.rtol && a.atol == b.atol;
}

std::size_t grid_size(double t_end, double output_dt) {
    return static_cast<std::size_t>(std::floor(t_end / output_dt + 1e-9)) + 1;
}

std::string to_string(BathStatistics s) {
    return s == BathStatistics::fermionic ? "fermionic" : "bosonic";
}

BathStatistics parse_bath_statistics(const std::string& text) {
    if (text == "fermionic") return BathStatistics::fermionic;
    if (text == "bosonic") return BathStatistics::bosonic;
    throw InvalidConfig("statistics must be 'fermionic' or 'bosonic', got '" + text + "'");
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InvalidConfig(where + ": " + what);
}

void require_finite(double x, const std::string& where, const std::string& name) {
    if (!std::isfinite(x)) fail(where, name + " not finite");
}

void check_provider(const ProviderConfig& provider, const std::string& where, double t_end) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (const auto* c = std::get_if<ConstantParams>(&provider)) {
        require_finite(c->lambda, where, "lambda");
        require_finite(c->diffusion, where, "D");
    } else if (const auto* p = std::get_if<PhenomenologicalParams>(&provider)) {
        for (auto [value, name] : {std::pair{p->mean_lambda, "mean_lambda"},
                                   std::pair{p->amp_lambda, "amp_lambda"},
                                   std::pair{p->mean_diffusion, "mean_D"},
                                   std::pair{p->amp_diffusion, "amp_D"}}) {
            require_finite(value, where, name);
            if (value < 0.0) fail(where, std::string(name) + " negative");
        }
        require_finite(p->osc_freq, where, "osc_freq");
        if (p->osc_freq <= 0.0) fail(where, "osc_freq not positive");
        require_finite(p->ramp_time, where, "ramp_time");
        if (p->ramp_time <= 0.0) fail(where, "ramp_time not positive");
        for (auto [value, name] : {std::pair{p->phase_lambda, "phase_lambda"},
                                   std::pair{p->phase_diffusion, "phase_D"}}) {
            if (!(value >= 0.0 && value < two_pi)) fail(where, std::string(name) + " outside [0, 2pi)");
        }
        if (p->amp_lambda > p->mean_lambda && !p->allow_negative_friction)
            fail(where, "amp_lambda exceeds mean_lambda (set allow_negative_friction to permit negative friction)");
    } else {
        const auto& tab = std::get<TabulatedParams>(provider).table;
        if (tab.t.size() != tab.lambda.size() || tab.t.size() != tab.diffusion.size())
            fail(where, "tabulated columns differ in length");
        if (tab.t.size() < 4) fail(where, "tabulated grid needs at least 4 points");
        for (std::size_t k = 0; k < tab.t.size(); ++k) {
            if (!std::isfinite(tab.t[k]) || !std::isfinite(tab.lambda[k]) || !std::isfinite(tab.diffusion[k]))
                fail(where, "tabulated value not finite at row " + std::to_string(k + 1));
            if (k > 0 && !(tab.t[k] > tab.t[k - 1]))
                fail(where, "tabulated grid not strictly increasing at row " + std::to_string(k + 1));
        }
        if (tab.t.front() > 0.0 || tab.t.back() < t_end)
            fail(where, "tabulated grid does not cover [0, t_end]");
    }
}

}  // namespace

SimulationConfig validate_config(const SimulationConfig& config) {
    SimulationConfig out = config;
    const std::size_t n = out.oscillators.size();

    if (n == 0) fail("config", "no oscillators");
    if (out.coupling.size() != n)
        fail("coupling", "matrix size " + std::to_string(out.coupling.size()) + " does not match " +
                             std::to_string(n) + " oscillators");
    if (out.providers.size() != n) fail("coefficients", "expected one coefficient provider per oscillator");
    if (out.baths.empty()) out.baths.resize(n);
    if (out.baths.size() != n) fail("bath", "bath lists do not match the oscillator count");

    for (auto [value, name] : {std::pair{out.t_end, "t_end"}, std::pair{out.output_dt, "output_dt"},
                               std::pair{out.rtol, "rtol"}, std::pair{out.atol, "atol"}}) {
        if (!std::isfinite(value) || value <= 0.0) fail("integration", std::string(name) + " not positive");
    }
    if (out.output_dt > out.t_end) fail("integration", "output_dt exceeds t_end");

    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = "oscillator " + std::to_string(i + 1);
        const auto& osc = out.oscillators[i];
        require_finite(osc.omega, where, "omega");
        require_finite(osc.n0, where, "n0");
        require_finite(osc.v0, where, "v0");
        if (osc.omega <= 0.0) fail(where, "omega not positive");
        if (osc.n0 < 0.0) fail(where, "n0 negative");
    }

    for (std::size_t i = 0; i < n; ++i) {
        const std::string where = "bath of oscillator " + std::to_string(i + 1);
        for (const auto& bath : out.baths[i]) {
            if (!(bath.temperature >= 0.0) || !std::isfinite(bath.temperature)) fail(where, "temperature negative");
            if (!(bath.coupling > 0.0) || !std::isfinite(bath.coupling)) fail(where, "alpha not positive");
            if (!(bath.cutoff > 0.0) || !std::isfinite(bath.cutoff)) fail(where, "gamma not positive");
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        check_provider(out.providers[i], "coefficients " + std::to_string(i + 1), out.t_end);

    auto& beta = out.coupling;
    for (std::size_t i = 0; i < n; ++i) {
        if (beta(i, i) != 0.0) fail("coupling", "beta diagonal not zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = beta(i, j);
            const double b = beta(j, i);
            if (!std::isfinite(a) || !std::isfinite(b)) fail("coupling", "beta not finite");
            if (a < 0.0 || b < 0.0) fail("coupling", "beta negative");
            if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) fail("coupling", "beta not symmetric");
            beta.set_pair(i, j, 0.5 * (a + b));
        }
    }
    return out;
}

}  // namespace oscibath
