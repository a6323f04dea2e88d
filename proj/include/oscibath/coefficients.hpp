// coefficients.hpp — Friction/diffusion coefficient providers λ(t), D(t)

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscibath/model.hpp"

namespace oscibath {

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Deterministic map t -> (λ, D, dλ/dt, dD/dt) for one oscillator.
class CoefficientProvider {
public:
    virtual ~CoefficientProvider() = default;

    virtual CoefficientSample sample(double t) const = 0;

    // Configuration that rebuilds an equivalent provider.
    virtual ProviderConfig describe() const = 0;

    // True when D(t) >= 0 is guaranteed on the whole domain.
    virtual bool diffusion_nonnegative() const = 0;
};

CoefficientSample eval_constant(double lambda0, double diffusion0, double t);
CoefficientSample eval_phenomenological(const PhenomenologicalParams& params, double t);

class ConstantCoefficients final : public CoefficientProvider {
public:
    ConstantCoefficients(double lambda, double diffusion) : params_{lambda, diffusion} {}
    explicit ConstantCoefficients(ConstantParams params) : params_(params) {}

    CoefficientSample sample(double t) const override;
    ProviderConfig describe() const override { return params_; }
    bool diffusion_nonnegative() const override { return params_.diffusion >= 0.0; }

private:
    ConstantParams params_;
};

class PhenomenologicalCoefficients final : public CoefficientProvider {
public:
    explicit PhenomenologicalCoefficients(PhenomenologicalParams params) : params_(params) {}

    CoefficientSample sample(double t) const override { return eval_phenomenological(params_, t); }
    ProviderConfig describe() const override { return params_; }
    bool diffusion_nonnegative() const override {
        return params_.mean_diffusion >= params_.amp_diffusion;
    }

    const PhenomenologicalParams& params() const { return params_; }

private:
    PhenomenologicalParams params_;
};

// Natural cubic spline through equally or unequally spaced knots.
class NaturalCubicSpline {
public:
    NaturalCubicSpline() = default;
    NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

    // Value and first derivative; throws OutOfRange outside [lo, hi].
    std::pair<double, double> eval(double x) const;

private:
    std::vector<double> x_, y_, m_;  // m_ holds second derivatives at the knots
};

// Spline interpolation of externally computed coefficients. No extrapolation.
class TabulatedCoefficients final : public CoefficientProvider {
public:
    explicit TabulatedCoefficients(TabulatedParams params);

    CoefficientSample sample(double t) const override;
    ProviderConfig describe() const override { return params_; }
    bool diffusion_nonnegative() const override { return false; }

private:
    TabulatedParams params_;
    NaturalCubicSpline lambda_, diffusion_;
};

CoefficientSample eval_tabulated(const TabulatedCoefficients& table, double t);

// Reads a `t,lambda,D` CSV with a header line.
CoefficientTable read_coefficient_table(const std::string& path);

std::unique_ptr<CoefficientProvider> make_provider(const ProviderConfig& config);

// Largest normalized deviation between reported dλ/dt, dD/dt and central
// differences (f(t+h) - f(t-h)) / 2h over `times`. Each derivative's
// deviation is divided by the sup-norm of its finite-difference estimate
// on the grid; an identically zero derivative contributes its raw deviation.
double check_derivatives(const CoefficientProvider& provider, std::span<const double> times, double h);

}  // namespace oscibath
