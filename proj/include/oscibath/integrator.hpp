// integrator.hpp — Master-equation solvers for one or N coupled oscillators
//
//   first order:   dn/dt = -2λ n + 2D
//   second order:  n'' + 2λ n' + 2λ' n = 2D'
//   coupled:       n_i'' + 2λ_i n_i' + 2λ_i' n_i + Σ_j β_ij (n_i - n_j) = 2D_i'
//
// Adaptive runs use the Dormand–Prince 5(4) pair and sample the uniform
// output grid through its continuous extension. The fixed-step classical
// RK4 mode exists for convergence studies.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscibath/coefficients.hpp"
#include "oscibath/model.hpp"

namespace oscibath {

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { dopri5, rk4_fixed };

struct IntegratorOptions {
    double rtol{1e-9};
    double atol{1e-12};
    Scheme scheme{Scheme::dopri5};
    double fixed_step{0.0};  // rk4_fixed only; output_dt must be a multiple of it
    double max_step{std::numeric_limits<double>::infinity()};
    std::size_t max_steps{50'000'000};
};

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

struct OdeStats {
    std::size_t accepted{0};
    std::size_t rejected{0};
};

// Integrates y' = f(t, y) from t = 0 and calls `emit(k, t_k, y(t_k))` for
// every point t_k = k * output_dt ≤ t_end, starting with k = 0.
using OutputSink = std::function<void(std::size_t k, double t, std::span<const double> y)>;

OdeStats solve_ode(const OdeRhs& rhs, std::span<const double> y0, double t_end, double output_dt,
                   const IntegratorOptions& options, const OutputSink& emit);

// Right-hand sides, exposed for verification.
OdeRhs first_order_rhs(const CoefficientProvider& provider);
OdeRhs coupled_rhs(const CouplingNetwork& coupling, std::span<const CoefficientProvider* const> providers);

TimeSeries integrate_single_first_order(const OscillatorSpec& osc, const CoefficientProvider& provider,
                                        double t_end, double output_dt, const IntegratorOptions& options = {});

TimeSeries integrate_single_second_order(const OscillatorSpec& osc, const CoefficientProvider& provider,
                                         double t_end, double output_dt, const IntegratorOptions& options = {});

TimeSeries integrate_coupled(const SimulationConfig& config, std::span<const CoefficientProvider* const> providers,
                             const IntegratorOptions& options);

// Uses config.rtol/atol and builds providers from config.providers.
TimeSeries integrate_coupled(const SimulationConfig& config);

struct ConvergenceStudy {
    std::vector<double> steps;
    std::vector<double> errors;
    std::vector<double> orders;  // log2(errors[k] / errors[k+1])
};

// Runs `error_at_step` at h, h/2, ..., h/2^(levels-1) and reports observed
// orders. The callback returns the error of a fixed-step solve against an
// exact solution.
ConvergenceStudy convergence_order(const std::function<double(double h)>& error_at_step, double h,
                                   std::size_t levels = 3);

}  // namespace oscibath
