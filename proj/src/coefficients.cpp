#include "oscibath/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace oscibath {

CoefficientSample eval_constant(double lambda0, double diffusion0, double /*t*/) {
    return {lambda0, diffusion0, 0.0, 0.0};
}

CoefficientSample ConstantCoefficients::sample(double t) const {
    return eval_constant(params_.lambda, params_.diffusion, t);
}

CoefficientSample eval_phenomenological(const PhenomenologicalParams& p, double t) {
    const double s = t / p.ramp_time;
    const double g = std::exp(-s * s);
    const double ramp = -std::expm1(-s * s);
    const double dramp = 2.0 * t / (p.ramp_time * p.ramp_time) * g;

    const double arg_l = p.osc_freq * t + p.phase_lambda;
    const double arg_d = p.osc_freq * t + p.phase_diffusion;
    const double lam = p.mean_lambda + p.amp_lambda * std::cos(arg_l);
    const double dif = p.mean_diffusion + p.amp_diffusion * std::cos(arg_d);
    const double dlam = -p.amp_lambda * p.osc_freq * std::sin(arg_l);
    const double ddif = -p.amp_diffusion * p.osc_freq * std::sin(arg_d);

    return {ramp * lam, ramp * dif, dramp * lam + ramp * dlam, dramp * dif + ramp * ddif};
}

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 4 || y_.size() != n) throw std::invalid_argument("spline needs at least 4 matching knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots not strictly increasing");

    // Tridiagonal system for interior second derivatives, m_0 = m_{n-1} = 0.
    std::vector<double> diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Forward sweep; sub-diagonal entry of row i is h_{i-1} = x_i - x_{i-1}.
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = x_[i] - x_[i - 1];
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::pair<double, double> NaturalCubicSpline::eval(double x) const {
    if (!(x >= x_.front() && x <= x_.back())) {
        std::ostringstream msg;
        msg << "t = " << x << " outside tabulated range [" << x_.front() << ", " << x_.back() << "]";
        throw OutOfRange(msg.str());
    }
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    i = std::clamp<std::size_t>(i, 1, x_.size() - 1) - 1;

    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    const double value = a * y_[i] + b * y_[i + 1] +
                         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    const double slope = (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
                         (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    return {value, slope};
}

TabulatedCoefficients::TabulatedCoefficients(TabulatedParams params)
    : params_(std::move(params)),
      lambda_(params_.table.t, params_.table.lambda),
      diffusion_(params_.table.t, params_.table.diffusion) {}

CoefficientSample TabulatedCoefficients::sample(double t) const {
    const auto [lam, dlam] = lambda_.eval(t);
    const auto [dif, ddif] = diffusion_.eval(t);
    return {lam, dif, dlam, ddif};
}

CoefficientSample eval_tabulated(const TabulatedCoefficients& table, double t) { return table.sample(t); }

CoefficientTable read_coefficient_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open coefficient table '" + path + "'");

    CoefficientTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = detail::trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = detail::split(text, ',');
        if (!header_seen) {
            if (fields.size() != 3 || detail::trim(fields[0]) != "t" || detail::trim(fields[1]) != "lambda" ||
                detail::trim(fields[2]) != "D")
                throw InvalidConfig(path + ":" + std::to_string(line_no) + ": expected header 't,lambda,D'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 3)
            throw InvalidConfig(path + ":" + std::to_string(line_no) + ": expected 3 columns");
        double values[3];
        for (std::size_t c = 0; c < 3; ++c) {
            const auto parsed = detail::parse_double(detail::trim(fields[c]));
            if (!parsed) throw InvalidConfig(path + ":" + std::to_string(line_no) + ": malformed number '" + fields[c] + "'");
            values[c] = *parsed;
        }
        if (!table.t.empty() && !(values[0] > table.t.back()))
            throw InvalidConfig(path + ":" + std::to_string(line_no) + ": t not strictly increasing");
        table.t.push_back(values[0]);
        table.lambda.push_back(values[1]);
        table.diffusion.push_back(values[2]);
    }
    if (!header_seen) throw InvalidConfig(path + ": missing header 't,lambda,D'");
    if (table.t.size() < 4) throw InvalidConfig(path + ": at least 4 rows required");
    return table;
}

std::unique_ptr<CoefficientProvider> make_provider(const ProviderConfig& config) {
    if (const auto* c = std::get_if<ConstantParams>(&config)) return std::make_unique<ConstantCoefficients>(*c);
    if (const auto* p = std::get_if<PhenomenologicalParams>(&config))
        return std::make_unique<PhenomenologicalCoefficients>(*p);
    return std::make_unique<TabulatedCoefficients>(std::get<TabulatedParams>(config));
}

double check_derivatives(const CoefficientProvider& provider, std::span<const double> times, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");

    double dev_lambda = 0.0, dev_diffusion = 0.0;
    double scale_lambda = 0.0, scale_diffusion = 0.0;
    for (double t : times) {
        const auto mid = provider.sample(t);
        const auto hi = provider.sample(t + h);
        const auto lo = provider.sample(t - h);
        const double fd_lambda = (hi.lambda - lo.lambda) / (2.0 * h);
        const double fd_diffusion = (hi.diffusion - lo.diffusion) / (2.0 * h);
        dev_lambda = std::max(dev_lambda, std::abs(mid.dlambda_dt - fd_lambda));
        dev_diffusion = std::max(dev_diffusion, std::abs(mid.ddiffusion_dt - fd_diffusion));
        scale_lambda = std::max(scale_lambda, std::abs(fd_lambda));
        scale_diffusion = std::max(scale_diffusion, std::abs(fd_diffusion));
    }
    const auto normalized = [](double dev, double scale) { return scale > 0.0 ? dev / scale : dev; };
    return std::max(normalized(dev_lambda, scale_lambda), normalized(dev_diffusion, scale_diffusion));
}

}  // namespace oscibath
