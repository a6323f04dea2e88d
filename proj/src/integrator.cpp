#include "oscibath/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscibath {

namespace {

// Dormand–Prince 5(4) coefficients with Hairer's continuous extension.
namespace dp {
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

using Vec = std::vector<double>;

bool all_finite(std::span<const double> y) {
    return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

std::string at_time(double t) {
    std::ostringstream s;
    s << " at t = " << t;
    return s.str();
}

double weighted_rms(std::span<const double> v, std::span<const double> scale) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double r = v[i] / scale[i];
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
}

double initial_step(const OdeRhs& rhs, std::span<const double> y0, std::span<const double> f0,
                    const IntegratorOptions& opt) {
    const std::size_t n = y0.size();
    Vec scale(n), tmp(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) scale[i] = opt.atol + opt.rtol * std::abs(y0[i]);
    const double d0 = weighted_rms(y0, scale);
    const double d1 = weighted_rms(f0, scale);
    const double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y0[i] + h0 * f0[i];
    rhs(h0, tmp, f1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = f1[i] - f0[i];
    const double d2 = weighted_rms(tmp, scale) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    return std::min(100.0 * h0, h1);
}

OdeStats solve_dopri5(const OdeRhs& rhs, std::span<const double> y0, double t_last, double output_dt,
                      std::size_t points, const IntegratorOptions& opt, const OutputSink& emit) {
    const std::size_t n = y0.size();
    Vec y(y0.begin(), y0.end()), y1(n), tmp(n), err(n), scale(n);
    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    Vec r1(n), r2(n), r3(n), r4(n), r5(n), dense(n);
    OdeStats stats;

    double t = 0.0;
    emit(0, 0.0, y);
    std::size_t next = 1;
    if (points == 1) return stats;

    rhs(t, y, k1);
    double h = std::min(initial_step(rhs, y, k1, opt), opt.max_step);

    while (next < points) {
        if (stats.accepted + stats.rejected >= opt.max_steps)
            throw IntegrationError("step limit exceeded" + at_time(t));
        bool last = false;
        if (t + h >= t_last) {
            h = t_last - t;
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) throw IntegrationError("step size underflow" + at_time(t));

        using namespace dp;
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h, tmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const double t_new = last ? t_last : t + h;
        rhs(t_new, tmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(t_new, y1, k7);

        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            scale[i] = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        }
        // Quartic term of the continuous extension at theta = 1/2: interpolation error between step
        // ends. It enters step control alongside the embedded estimate.
        for (std::size_t i = 0; i < n; ++i)
            r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]) / 16.0;
        const double err_norm = std::max(weighted_rms(err, scale), weighted_rms(r5, scale));

        if (!std::isfinite(err_norm) || err_norm > 1.0) {
            ++stats.rejected;
            if (!all_finite(y1) && !std::isfinite(err_norm) && h < 1e-10)
                throw IntegrationError("non-finite state" + at_time(t));
            const double factor = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.2;
            h *= factor;
            continue;
        }
        if (!all_finite(y1) || !all_finite(k7)) throw IntegrationError("non-finite state" + at_time(t_new));

        ++stats.accepted;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = y1[i] - y[i];
            const double bspl = h * k1[i] - diff;
            r1[i] = y[i];
            r2[i] = diff;
            r3[i] = bspl;
            r4[i] = diff - h * k7[i] - bspl;
            r5[i] *= 16.0;
        }
        while (next < points) {
            const double tk = static_cast<double>(next) * output_dt;
            if (!last && tk > t_new) break;
            if (tk == t_new || (last && next + 1 == points)) {
                emit(next, tk, y1);
            } else {
                const double theta = (tk - t) / h;
                const double theta1 = 1.0 - theta;
                for (std::size_t i = 0; i < n; ++i)
                    dense[i] = r1[i] + theta * (r2[i] + theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
                emit(next, tk, dense);
            }
            ++next;
        }

        t = t_new;
        y.swap(y1);
        k1.swap(k7);
        const double factor = err_norm == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 10.0);
        h = std::min(h * factor, opt.max_step);
    }
    return stats;
}

OdeStats solve_rk4(const OdeRhs& rhs, std::span<const double> y0, double output_dt, std::size_t points,
                   const IntegratorOptions& opt, const OutputSink& emit) {
    const double h = opt.fixed_step;
    if (!(h > 0.0)) throw std::invalid_argument("rk4_fixed needs a positive fixed_step");
    const double ratio = output_dt / h;
    const auto per_output = static_cast<std::size_t>(std::llround(ratio));
    if (per_output == 0 || std::abs(ratio - static_cast<double>(per_output)) > 1e-9 * ratio)
        throw std::invalid_argument("output_dt must be an integer multiple of fixed_step");

    const std::size_t n = y0.size();
    Vec y(y0.begin(), y0.end()), tmp(n), k1(n), k2(n), k3(n), k4(n);
    OdeStats stats;
    emit(0, 0.0, y);
    const std::size_t total = (points - 1) * per_output;
    for (std::size_t m = 0; m < total; ++m) {
        const double t = static_cast<double>(m) * h;
        rhs(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!all_finite(y)) throw IntegrationError("non-finite state" + at_time(t + h));
        ++stats.accepted;
        if ((m + 1) % per_output == 0) emit((m + 1) / per_output, static_cast<double>((m + 1) / per_output) * output_dt, y);
    }
    return stats;
}

SimulationConfig single_config(const OscillatorSpec& osc, const CoefficientProvider& provider, double t_end,
                               double output_dt, const IntegratorOptions& options) {
    SimulationConfig config;
    config.oscillators = {osc};
    config.baths = {{}};
    config.providers = {provider.describe()};
    config.coupling = CouplingNetwork(1);
    config.t_end = t_end;
    config.output_dt = output_dt;
    config.rtol = options.rtol;
    config.atol = options.atol;
    return validate_config(config);
}

double consistency_residual(const OscillatorSpec& osc, const CoefficientProvider& provider) {
    const auto c0 = provider.sample(0.0);
    return std::abs(osc.v0 + 2.0 * c0.lambda * osc.n0 - 2.0 * c0.diffusion);
}

TimeSeries allocate(SimulationConfig config) {
    TimeSeries series;
    const std::size_t points = grid_size(config.t_end, config.output_dt);
    series.dt = config.output_dt;
    series.t.resize(points);
    series.channels.resize(config.oscillators.size());
    for (auto& ch : series.channels) {
        ch.n.resize(points);
        ch.v.resize(points);
        ch.lambda.resize(points);
        ch.diffusion.resize(points);
    }
    series.config = std::move(config);
    return series;
}

void note_sign(RunDiagnostics& diag, std::span<const double> values) {
    const double lowest = *std::min_element(values.begin(), values.end());
    if (lowest < 0.0) {
        ++diag.negative_samples;
        diag.most_negative = std::min(diag.most_negative, lowest);
    }
}

}  // namespace

OdeStats solve_ode(const OdeRhs& rhs, std::span<const double> y0, double t_end, double output_dt,
                   const IntegratorOptions& options, const OutputSink& emit) {
    if (!(t_end > 0.0) || !(output_dt > 0.0)) throw std::invalid_argument("t_end and output_dt must be positive");
    const std::size_t points = grid_size(t_end, output_dt);
    const double t_last = static_cast<double>(points - 1) * output_dt;
    if (options.scheme == Scheme::rk4_fixed) return solve_rk4(rhs, y0, output_dt, points, options, emit);
    if (!(options.rtol > 0.0) || !(options.atol > 0.0)) throw std::invalid_argument("tolerances must be positive");
    return solve_dopri5(rhs, y0, t_last, output_dt, points, options, emit);
}

OdeRhs first_order_rhs(const CoefficientProvider& provider) {
    return [&provider](double t, std::span<const double> y, std::span<double> dydt) {
        const auto c = provider.sample(t);
        dydt[0] = -2.0 * c.lambda * y[0] + 2.0 * c.diffusion;
    };
}

OdeRhs coupled_rhs(const CouplingNetwork& coupling, std::span<const CoefficientProvider* const> providers) {
    return [&coupling, providers](double t, std::span<const double> y, std::span<double> dydt) {
        const std::size_t n = providers.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = providers[i]->sample(t);
            const double ni = y[2 * i];
            const double vi = y[2 * i + 1];
            double exchange = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double beta = coupling(i, j);
                if (beta != 0.0) exchange += beta * (ni - y[2 * j]);
            }
            dydt[2 * i] = vi;
            dydt[2 * i + 1] = -2.0 * c.lambda * vi - 2.0 * c.dlambda_dt * ni - exchange + 2.0 * c.ddiffusion_dt;
        }
    };
}

TimeSeries integrate_single_first_order(const OscillatorSpec& osc, const CoefficientProvider& provider,
                                        double t_end, double output_dt, const IntegratorOptions& options) {
    TimeSeries series = allocate(single_config(osc, provider, t_end, output_dt, options));
    auto& ch = series.channels[0];
    auto& diag = series.diagnostics;
    diag.consistency_residual = {consistency_residual(osc, provider)};
    const bool positivity_guaranteed = provider.diffusion_nonnegative() && osc.n0 >= 0.0;

    const std::vector<double> y0{osc.n0};
    const auto stats = solve_ode(first_order_rhs(provider), y0, t_end, output_dt, options,
                                 [&](std::size_t k, double t, std::span<const double> y) {
                                     const auto c = provider.sample(t);
                                     series.t[k] = t;
                                     ch.n[k] = y[0];
                                     ch.v[k] = -2.0 * c.lambda * y[0] + 2.0 * c.diffusion;
                                     ch.lambda[k] = c.lambda;
                                     ch.diffusion[k] = c.diffusion;
                                     note_sign(diag, y);
                                     if (positivity_guaranteed && y[0] < -10.0 * options.atol)
                                         throw IntegrationError("positivity violated: n = " + std::to_string(y[0]) +
                                                                at_time(t));
                                 });
    diag.accepted_steps = stats.accepted;
    diag.rejected_steps = stats.rejected;
    return series;
}

TimeSeries integrate_single_second_order(const OscillatorSpec& osc, const CoefficientProvider& provider,
                                         double t_end, double output_dt, const IntegratorOptions& options) {
    const SimulationConfig config = single_config(osc, provider, t_end, output_dt, options);
    const CoefficientProvider* providers[] = {&provider};
    return integrate_coupled(config, providers, options);
}

TimeSeries integrate_coupled(const SimulationConfig& config, std::span<const CoefficientProvider* const> providers,
                             const IntegratorOptions& options) {
    if (providers.size() != config.oscillators.size())
        throw std::invalid_argument("one coefficient provider per oscillator required");
    SimulationConfig described = config;
    for (std::size_t i = 0; i < providers.size(); ++i) described.providers[i] = providers[i]->describe();
    described.rtol = options.rtol;
    described.atol = options.atol;
    TimeSeries series = allocate(validate_config(described));
    const auto& cfg = series.config;
    const std::size_t n = cfg.oscillators.size();
    auto& diag = series.diagnostics;

    std::vector<double> y0(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y0[2 * i] = cfg.oscillators[i].n0;
        y0[2 * i + 1] = cfg.oscillators[i].v0;
        diag.consistency_residual.push_back(consistency_residual(cfg.oscillators[i], *providers[i]));
    }

    std::vector<double> occupations(n);
    const auto stats = solve_ode(coupled_rhs(cfg.coupling, providers), y0, cfg.t_end, cfg.output_dt, options,
                                 [&](std::size_t k, double t, std::span<const double> y) {
                                     series.t[k] = t;
                                     for (std::size_t i = 0; i < n; ++i) {
                                         const auto c = providers[i]->sample(t);
                                         auto& ch = series.channels[i];
                                         ch.n[k] = y[2 * i];
                                         ch.v[k] = y[2 * i + 1];
                                         ch.lambda[k] = c.lambda;
                                         ch.diffusion[k] = c.diffusion;
                                         occupations[i] = y[2 * i];
                                     }
                                     note_sign(diag, occupations);
                                 });
    diag.accepted_steps = stats.accepted;
    diag.rejected_steps = stats.rejected;
    return series;
}

TimeSeries integrate_coupled(const SimulationConfig& config) {
    const SimulationConfig cfg = validate_config(config);
    std::vector<std::unique_ptr<CoefficientProvider>> owned;
    std::vector<const CoefficientProvider*> providers;
    for (const auto& pc : cfg.providers) {
        owned.push_back(make_provider(pc));
        providers.push_back(owned.back().get());
    }
    IntegratorOptions options;
    options.rtol = cfg.rtol;
    options.atol = cfg.atol;
    return integrate_coupled(cfg, providers, options);
}

ConvergenceStudy convergence_order(const std::function<double(double h)>& error_at_step, double h,
                                   std::size_t levels) {
    ConvergenceStudy study;
    for (std::size_t k = 0; k < levels; ++k) {
        study.steps.push_back(h);
        study.errors.push_back(error_at_step(h));
        h *= 0.5;
    }
    for (std::size_t k = 0; k + 1 < levels; ++k)
        study.orders.push_back(std::log2(study.errors[k] / study.errors[k + 1]));
    return study;
}

}  // namespace oscibath
