// model.hpp — Domain types shared by the solver, analysis and CLI layers
//
// Units: times in 1/Ω₁, frequencies and rates in Ω₁, coupling strengths in Ω₁².

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace oscibath {

class InvalidConfig : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OscillatorSpec {
    double omega{1.0};  // renormalized frequency Ω_i
    double n0{0.0};     // initial occupation number
    double v0{0.0};     // initial dn/dt
};

enum class BathStatistics { fermionic, bosonic };

// Bath parameters travel with the configuration as metadata; no provider in
// this library derives coefficients from them.
struct BathSpec {
    BathStatistics statistics{BathStatistics::bosonic};
    double temperature{0.0};  // kT/(ħΩ₁)
    double coupling{0.1};     // α
    double cutoff{10.0};      // γ/Ω₁, inverse memory time
};

struct CoefficientSample {
    double lambda{0.0};
    double diffusion{0.0};
    double dlambda_dt{0.0};
    double ddiffusion_dt{0.0};

    bool operator==(const CoefficientSample&) const = default;
};

struct ConstantParams {
    double lambda{0.0};
    double diffusion{0.0};

    bool operator==(const ConstantParams&) const = default;
};

// λ(t) = r(t)[mean_lambda + amp_lambda cos(ω t + φ_λ)], likewise for D,
// with ramp r(t) = 1 - exp(-(t/τ)²).
struct PhenomenologicalParams {
    double mean_lambda{0.0};
    double amp_lambda{0.0};
    double mean_diffusion{0.0};
    double amp_diffusion{0.0};
    double osc_freq{1.0};
    double phase_lambda{0.0};
    double phase_diffusion{0.0};
    double ramp_time{0.5};
    bool allow_negative_friction{false};

    bool operator==(const PhenomenologicalParams&) const = default;
};

struct CoefficientTable {
    std::vector<double> t;
    std::vector<double> lambda;
    std::vector<double> diffusion;

    bool operator==(const CoefficientTable&) const = default;
};

struct TabulatedParams {
    std::string source;  // file the table was read from, empty if built in memory
    CoefficientTable table;

    bool operator==(const TabulatedParams&) const = default;
};

using ProviderConfig = std::variant<ConstantParams, PhenomenologicalParams, TabulatedParams>;

// Dense symmetric matrix of pairwise couplings β_ij with zero diagonal.
class CouplingNetwork {
public:
    CouplingNetwork() = default;
    explicit CouplingNetwork(std::size_t n) : n_(n), beta_(n * n, 0.0) {}

    static CouplingNetwork uniform(std::size_t n, double beta);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return beta_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return beta_[i * n_ + j]; }

    // Sets β_ij and β_ji together.
    void set_pair(std::size_t i, std::size_t j, double beta) {
        (*this)(i, j) = beta;
        (*this)(j, i) = beta;
    }

    bool operator==(const CouplingNetwork&) const = default;

private:
    std::size_t n_{0};
    std::vector<double> beta_;
};

struct SimulationConfig {
    std::vector<OscillatorSpec> oscillators;
    std::vector<std::vector<BathSpec>> baths;  // per oscillator, may be empty
    std::vector<ProviderConfig> providers;     // per oscillator
    CouplingNetwork coupling;
    double t_end{50.0};
    double output_dt{0.01};
    double rtol{1e-9};
    double atol{1e-12};
};

bool operator==(const BathSpec& a, const BathSpec& b);
bool operator==(const OscillatorSpec& a, const OscillatorSpec& b);
bool operator==(const SimulationConfig& a, const SimulationConfig& b);

// Returns a copy of `config` with every invariant checked. Coupling entries
// that are asymmetric by at most 1e-12 (relative) are averaged; larger
// asymmetry is rejected. Throws InvalidConfig naming the first violation.
SimulationConfig validate_config(const SimulationConfig& config);

// Number of points on the uniform output grid 0, dt, 2dt, ... ≤ t_end.
std::size_t grid_size(double t_end, double output_dt);

struct RunDiagnostics {
    std::size_t accepted_steps{0};
    std::size_t rejected_steps{0};
    std::vector<double> consistency_residual;  // |v0 + 2λ(0)n0 - 2D(0)| per oscillator
    std::size_t negative_samples{0};           // grid points with some n_i < 0
    double most_negative{0.0};
};

struct OscillatorChannels {
    std::vector<double> n;
    std::vector<double> v;
    std::vector<double> lambda;
    std::vector<double> diffusion;
};

// Uniform-grid samples t_k = k * dt with per-oscillator channels.
struct SeriesData {
    std::vector<double> t;
    double dt{0.0};
    std::vector<OscillatorChannels> channels;

    std::size_t size() const { return t.size(); }
};

// Record of one run together with the validated configuration that produced it.
struct TimeSeries : SeriesData {
    SimulationConfig config;
    RunDiagnostics diagnostics;
};

std::string to_string(BathStatistics s);
BathStatistics parse_bath_statistics(const std::string& text);

}  // namespace oscibath
