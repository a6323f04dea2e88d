#include "oscibath/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace oscibath {

namespace {

struct Moments {
    double mean{0.0};
    double stddev{0.0};
};

Moments moments(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

// Offset in (-0.5, 0.5) of the vertex of the parabola through three samples.
double vertex_offset(double left, double mid, double right) {
    const double curvature = left - 2.0 * mid + right;
    if (curvature == 0.0) return 0.0;
    return std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
}

struct Extremum {
    double position;  // fractional sample index
    double value;
};

std::vector<Extremum> local_maxima(std::span<const double> y) {
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            const double d = vertex_offset(y[i - 1], y[i], y[i + 1]);
            out.push_back({static_cast<double>(i) + d, y[i] - 0.25 * (y[i - 1] - y[i + 1]) * d});
        }
    }
    return out;
}

std::vector<Extremum> local_minima(std::span<const double> y) {
    std::vector<double> neg(y.begin(), y.end());
    for (double& v : neg) v = -v;
    auto out = local_maxima(neg);
    for (auto& e : out) e.value = -e.value;
    return out;
}

// Pearson correlation between y[0, N-k) and y[k, N) for k = 0..max_lag.
std::vector<double> normalized_autocorrelation(std::span<const double> y, std::size_t max_lag) {
    const std::size_t n = y.size();
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n), s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = y[i] - mean;
        s1[i + 1] = s1[i] + x[i];
        s2[i + 1] = s2[i] + x[i] * x[i];
    }
    std::vector<double> r(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        const std::size_t m = n - k;
        double cross = 0.0;
        for (std::size_t i = 0; i < m; ++i) cross += x[i] * x[i + k];
        const double md = static_cast<double>(m);
        const double sa = s1[m], saa = s2[m];
        const double sb = s1[n] - s1[k], sbb = s2[n] - s2[k];
        const double cov = cross - sa * sb / md;
        const double va = saa - sa * sa / md;
        const double vb = sbb - sb * sb / md;
        r[k] = (va > 0.0 && vb > 0.0) ? cov / std::sqrt(va * vb) : 0.0;
    }
    return r;
}

// Lag (in samples, fractional) of the autocorrelation peak taken as the period.
std::optional<double> autocorrelation_period(std::span<const double> y) {
    const std::size_t max_lag = y.size() / 2;
    const auto r = normalized_autocorrelation(y, max_lag);

    std::size_t k = 1;
    while (k < max_lag && r[k] >= r[k + 1]) ++k;  // descend to the first local minimum

    std::vector<std::size_t> peaks;
    for (std::size_t j = std::max<std::size_t>(k, 1); j + 1 <= max_lag; ++j)
        if (r[j] > r[j - 1] && r[j] >= r[j + 1]) peaks.push_back(j);
    if (peaks.empty()) return std::nullopt;

    double best = -1.0;
    for (auto j : peaks) best = std::max(best, r[j]);
    if (best <= 0.0) return std::nullopt;
    for (auto j : peaks) {
        if (r[j] >= 0.85 * best)
            return static_cast<double>(j) + vertex_offset(r[j - 1], r[j], r[j + 1]);
    }
    return std::nullopt;
}

}  // namespace

SignalView channel_view(const SeriesData& series, std::size_t oscillator, Field field) {
    const auto& ch = series.channels.at(oscillator);
    const std::vector<double>* data = &ch.n;
    switch (field) {
        case Field::n: data = &ch.n; break;
        case Field::v: data = &ch.v; break;
        case Field::lambda: data = &ch.lambda; break;
        case Field::diffusion: data = &ch.diffusion; break;
    }
    return {series.t.empty() ? 0.0 : series.t.front(), series.dt, *data};
}

SignalView slice(const SignalView& signal, double t_a, double t_b) {
    if (signal.size() == 0 || !(t_b > t_a)) return {t_a, signal.dt, {}};
    const double lo = std::ceil((t_a - signal.t0) / signal.dt - 0.5);
    const double hi = std::floor((t_b - signal.t0) / signal.dt + 0.5);
    const auto first = static_cast<std::size_t>(std::max(0.0, lo));
    const auto last = static_cast<std::size_t>(
        std::clamp(hi, -1.0, static_cast<double>(signal.size()) - 1.0) + 1.0);  // one past
    if (last <= first) return {t_a, signal.dt, {}};
    return {signal.time(first), signal.dt, signal.y.subspan(first, last - first)};
}

TransientEstimate detect_transient(const SignalView& signal, double window) {
    const auto m = static_cast<std::size_t>(std::llround(window / signal.dt));
    if (m < 2 || signal.size() < 4 * m)
        throw AnalysisError(AnalysisFailure::too_short, "series too short for 4 transient windows");

    const auto& y = signal.y;
    const std::size_t n = y.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];

    struct Stats {
        double mean, half_range;
    };
    const auto stats = [&](std::size_t begin) {
        const auto [lo, hi] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(begin),
                                                  y.begin() + static_cast<std::ptrdiff_t>(begin + m));
        return Stats{(prefix[begin + m] - prefix[begin]) / static_cast<double>(m), 0.5 * (*hi - *lo)};
    };
    const auto close = [](const Stats& a, const Stats& b) {
        const double mean_scale = std::max({std::abs(a.mean), std::abs(b.mean), a.half_range, b.half_range});
        const double amp_scale = std::max(a.half_range, b.half_range);
        return std::abs(a.mean - b.mean) <= 0.05 * mean_scale &&
               std::abs(a.half_range - b.half_range) <= 0.05 * amp_scale;
    };

    const double midpoint = signal.t0 + 0.5 * (signal.t_last() - signal.t0);
    for (std::size_t start = 0; start + 2 * m <= n && signal.time(start) <= midpoint; ++start) {
        bool stable = true;
        Stats prev = stats(start);
        for (std::size_t b = start + m; b + m <= n; b += m) {
            const Stats cur = stats(b);
            if (!close(prev, cur)) {
                stable = false;
                break;
            }
            prev = cur;
        }
        if (stable) return {signal.time(start), false};
    }
    return {midpoint, true};
}

OscillationReport analyze_oscillation(const SignalView& channel, double t_a, double t_b, double atol) {
    const SignalView win = slice(channel, t_a, t_b);
    if (win.size() < 64)
        throw AnalysisError(AnalysisFailure::too_short, "analysis window holds fewer than 64 samples");

    OscillationReport report;
    report.window_start = win.t0;
    report.window_end = win.t_last();
    report.transient_end = win.t0;

    const auto mom = moments(win.y);
    report.mean_level = mom.mean;
    report.stddev = mom.stddev;
    const std::size_t half = win.size() / 2;
    const double first_mean = moments(win.y.first(half)).mean;
    const double second_mean = moments(win.y.subspan(half)).mean;
    report.mean_uncertainty = 0.5 * std::abs(first_mean - second_mean);

    report.is_stationary = mom.stddev < std::max(100.0 * atol, 1e-6 * std::abs(mom.mean));
    if (report.is_stationary) {
        report.mean_uncertainty = std::max(report.mean_uncertainty, mom.stddev);
        return report;
    }

    const auto maxima = local_maxima(win.y);
    const auto minima = local_minima(win.y);
    if (!maxima.empty() && !minima.empty()) {
        double hi = 0.0, lo = 0.0;
        for (const auto& e : maxima) hi += e.value;
        for (const auto& e : minima) lo += e.value;
        report.amplitude = 0.5 * (hi / static_cast<double>(maxima.size()) - lo / static_cast<double>(minima.size()));
    } else {
        const auto [lo, hi] = std::minmax_element(win.y.begin(), win.y.end());
        report.amplitude = 0.5 * (*hi - *lo);
    }

    const auto lag = autocorrelation_period(win.y);
    if (!lag)
        throw AnalysisError(AnalysisFailure::ambiguous_period, "no autocorrelation peak inside half the window");
    const double period = *lag * win.dt;
    const double window_length = win.t_last() - win.t0;
    const double spec = spectral_period(win.y, win.dt, 0.5 * window_length);
    if (std::abs(period - spec) > 0.1 * period) {
        throw AnalysisError(AnalysisFailure::ambiguous_period,
                            "autocorrelation period " + std::to_string(period) + " and spectral period " +
                                std::to_string(spec) + " disagree by more than 10%");
    }
    report.period = period;
    report.spectral_period = spec;
    report.period_uncertainty = std::max(std::abs(period - spec), 0.5 * win.dt * period / window_length);

    const double record = channel.t_last() - channel.t0;
    if (record >= 4.0 * period) {
        const auto transient = detect_transient(channel, period);
        report.transient_end = transient.transient_end;
        report.transient_low_confidence = transient.low_confidence;
    }
    return report;
}

OscillationReport extract_period(const SignalView& channel, double t_a, double t_b, double atol) {
    auto report = analyze_oscillation(channel, t_a, t_b, atol);
    if (report.is_stationary)
        throw AnalysisError(AnalysisFailure::no_oscillation,
                            "no oscillation: windowed standard deviation below the stationarity threshold");
    return report;
}

EnvelopeReport envelope(const SignalView& channel, double t_a, double t_b) {
    const SignalView win = slice(channel, t_a, t_b);
    const auto maxima = local_maxima(win.y);
    if (maxima.size() < 3)
        throw AnalysisError(AnalysisFailure::too_few_peaks,
                            "envelope needs at least 3 local maxima, found " + std::to_string(maxima.size()));
    EnvelopeReport report;
    for (const auto& e : maxima) {
        report.peak_times.push_back(win.t0 + e.position * win.dt);
        report.peak_values.push_back(e.value);
    }
    const auto [lo, hi] = std::minmax_element(report.peak_values.begin(), report.peak_values.end());
    const double mean = std::accumulate(report.peak_values.begin(), report.peak_values.end(), 0.0) /
                        static_cast<double>(report.peak_values.size());
    report.modulation_depth = mean != 0.0 ? (*hi - *lo) / std::abs(mean) : 0.0;
    return report;
}

double phase_lock_score(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("phase_lock_score needs equally long signals");
    const std::size_t n = a.size();

    // Linear detrend, then a cosine taper over the outer 10% at each end.
    const auto prepare = [n](std::span<const double> x) {
        const double nd = static_cast<double>(n);
        const double tm = 0.5 * (nd - 1.0);
        const double xm = std::accumulate(x.begin(), x.end(), 0.0) / nd;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dt = static_cast<double>(i) - tm;
            sxy += dt * (x[i] - xm);
            sxx += dt * dt;
        }
        const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
        std::vector<double> out(n);
        const std::size_t edge = n / 10;
        for (std::size_t i = 0; i < n; ++i) {
            double w = 1.0;
            const std::size_t from_edge = std::min(i, n - 1 - i);
            if (from_edge < edge)
                w = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(from_edge) / static_cast<double>(edge)));
            out[i] = w * (x[i] - xm - slope * (static_cast<double>(i) - tm));
        }
        return out;
    };

    const auto za = analytic_signal(prepare(a));
    const auto zb = analytic_signal(prepare(b));
    // The tapered edges carry no reliable phase; average over the interior.
    const std::size_t edge = n / 10;
    std::complex<double> sum{0.0, 0.0};
    std::size_t count = 0;
    for (std::size_t i = edge; i + edge < n; ++i) {
        const double dphi = std::arg(za[i]) - std::arg(zb[i]);
        sum += std::polar(1.0, dphi);
        ++count;
    }
    return count ? std::abs(sum) / static_cast<double>(count) : 0.0;
}

SyncReport synchronization_metrics(const SignalView& a, const SignalView& b, double t_a, double t_b, double atol) {
    if (a.dt != b.dt || a.t0 != b.t0 || a.size() != b.size())
        throw std::invalid_argument("synchronization metrics need channels on the same grid");
    const auto ra = extract_period(a, t_a, t_b, atol);
    const auto rb = extract_period(b, t_a, t_b, atol);
    SyncReport report;
    report.period_a = *ra.period;
    report.period_b = *rb.period;
    report.period_ratio = report.period_a / report.period_b;
    report.period_ratio_uncertainty =
        report.period_ratio * (*ra.period_uncertainty / report.period_a + *rb.period_uncertainty / report.period_b);
    const auto wa = slice(a, t_a, t_b);
    const auto wb = slice(b, t_a, t_b);
    report.phase_lock_score = phase_lock_score(wa.y, wb.y);
    return report;
}

EigenfrequencyCandidates eigenfrequency_candidates(const SimulationConfig& config) {
    EigenfrequencyCandidates out;
    for (const auto& osc : config.oscillators) out.bare.push_back(osc.omega);

    const std::size_t n = config.coupling.size();
    Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            laplacian(ii, jj) = -config.coupling(i, j);
            laplacian(ii, ii) += config.coupling(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, laplacian.cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double ev = solver.eigenvalues()(k);
        if (ev > 1e-12 * scale) out.normal_modes.push_back(std::sqrt(ev));
    }
    return out;
}

NearestEigenfrequency nearest_eigenfrequency(double measured, const EigenfrequencyCandidates& candidates) {
    NearestEigenfrequency best;
    double best_gap = std::numeric_limits<double>::infinity();
    const auto consider = [&](double f, bool bare) {
        const double gap = std::abs(measured - f) / f;
        if (gap < best_gap) {
            best_gap = gap;
            best = {f, bare, gap};
        }
    };
    for (double f : candidates.bare) consider(f, true);
    for (double f : candidates.normal_modes) consider(f, false);
    return best;
}

}  // namespace oscibath
