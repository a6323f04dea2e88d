// analysis.hpp — Observables of the asymptotic oscillations of n(t)
//
// All functions take a uniformly sampled channel and an analysis window
// [t_a, t_b] in the channel's time units. Nothing here mutates its input.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "oscibath/model.hpp"

namespace oscibath {

enum class AnalysisFailure { too_short, no_oscillation, ambiguous_period, too_few_peaks };

class AnalysisError : public std::runtime_error {
public:
    AnalysisError(AnalysisFailure kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    AnalysisFailure kind() const { return kind_; }

private:
    AnalysisFailure kind_;
};

// Samples y[k] taken at t0 + k * dt.
struct SignalView {
    double t0{0.0};
    double dt{1.0};
    std::span<const double> y;

    std::size_t size() const { return y.size(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double t_last() const { return time(y.size() - 1); }
};

enum class Field { n, v, lambda, diffusion };

SignalView channel_view(const SeriesData& series, std::size_t oscillator, Field field = Field::n);

// Samples with t_a <= t <= t_b (half a sample of slack at both ends).
SignalView slice(const SignalView& signal, double t_a, double t_b);

struct TransientEstimate {
    double transient_end{0.0};
    bool low_confidence{false};
};

// Earliest start s such that, tiling [s, end] with windows of length
// `window`, consecutive windows differ by at most 5% in mean and in
// half-range. Starts beyond the record's midpoint are not credible; when no
// start qualifies the midpoint is returned with low_confidence set.
TransientEstimate detect_transient(const SignalView& signal, double window);

struct OscillationReport {
    double window_start{0.0};
    double window_end{0.0};
    double transient_end{0.0};
    bool transient_low_confidence{false};
    bool is_stationary{false};
    std::optional<double> period;              // autocorrelation estimate
    std::optional<double> period_uncertainty;  // half-width
    std::optional<double> spectral_period;     // cross-check
    double mean_level{0.0};
    double mean_uncertainty{0.0};
    double stddev{0.0};
    double amplitude{0.0};  // mean peak-to-trough half-range
};

// Full report; period fields stay empty when the window is stationary.
// Throws AnalysisError(too_short) for windows under 64 samples and
// AnalysisError(ambiguous_period) when the estimators disagree by > 10%.
OscillationReport analyze_oscillation(const SignalView& channel, double t_a, double t_b, double atol = 1e-12);

// As analyze_oscillation, but a stationary window is an error (no_oscillation).
OscillationReport extract_period(const SignalView& channel, double t_a, double t_b, double atol = 1e-12);

struct EnvelopeReport {
    std::vector<double> peak_times;
    std::vector<double> peak_values;
    double modulation_depth{0.0};
};

EnvelopeReport envelope(const SignalView& channel, double t_a, double t_b);

struct SyncReport {
    double period_a{0.0};
    double period_b{0.0};
    double period_ratio{0.0};
    double period_ratio_uncertainty{0.0};
    double phase_lock_score{0.0};
};

SyncReport synchronization_metrics(const SignalView& a, const SignalView& b, double t_a, double t_b,
                                   double atol = 1e-12);

// Phase-locking magnitude |<exp(i(φa - φb))>| of two equally sampled signals.
double phase_lock_score(std::span<const double> a, std::span<const double> b);

// Analytic signal x + i H[x] via the discrete Hilbert transform.
std::vector<std::complex<double>> analytic_signal(std::span<const double> x);

// Period of the strongest spectral line with period in [2 dt, max_period].
double spectral_period(std::span<const double> x, double dt, double max_period);

// Candidate frequencies that "eigenfrequency" may refer to: the bare
// oscillator frequencies Ω_i and the undamped normal modes of the coupling
// Laplacian, sqrt(eig(L)) with L_ii = Σ_j β_ij and L_ij = -β_ij.
struct EigenfrequencyCandidates {
    std::vector<double> bare;
    std::vector<double> normal_modes;
};

EigenfrequencyCandidates eigenfrequency_candidates(const SimulationConfig& config);

struct NearestEigenfrequency {
    double frequency{0.0};
    bool is_bare{true};
    double relative_gap{0.0};
};

NearestEigenfrequency nearest_eigenfrequency(double measured_frequency, const EigenfrequencyCandidates& candidates);

}  // namespace oscibath
