// scenario.hpp — Sectioned key = value scenario files
//
//   [integration]        t_end, output_dt, rtol, atol
//   [oscillator.I]       omega, n0, v0
//   [coefficients.I]     kind = constant | phenomenological | tabulated, plus
//                          constant:         lambda, D
//                          phenomenological: mean_lambda, amp_lambda, mean_D, amp_D,
//                                            osc_freq (default omega), phase_lambda,
//                                            phase_D, ramp_time (default 0.5),
//                                            allow_negative_friction
//                          tabulated:        file (CSV with header t,lambda,D)
//   [bath.I.J]           statistics, temperature, alpha, gamma   (optional)
//   [coupling]           beta (all pairs), beta.I.J (one pair)
//
// Oscillators are numbered from 1. Lines starting with '#' are comments.

#pragma once

#include <string>
#include <vector>

#include "oscibath/model.hpp"

namespace oscibath {

struct ScenarioEntry {
    std::string key;
    std::string value;
    std::size_t line{0};
};

struct ScenarioSection {
    std::string name;
    std::vector<ScenarioEntry> entries;
};

// Raw, order-preserving view of a scenario file.
class ScenarioDocument {
public:
    static ScenarioDocument parse(const std::string& text, const std::string& origin = "<scenario>");
    static ScenarioDocument load(const std::string& path);

    const std::vector<ScenarioSection>& sections() const { return sections_; }
    const std::string& origin() const { return origin_; }

    // Assigns `value` to a dotted key such as "coupling.beta" or
    // "oscillator.2.omega"; the longest existing section prefix wins.
    // Throws InvalidConfig when the key does not name a numeric field.
    void set(const std::string& dotted_key, const std::string& value);

private:
    std::vector<ScenarioSection> sections_;
    std::string origin_;
};

// Interprets a document; throws InvalidConfig naming the offending key.
// The result is validated.
SimulationConfig to_config(const ScenarioDocument& doc);

SimulationConfig parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
SimulationConfig load_scenario(const std::string& path);

// Canonical text for a config; numbers carry 17 significant digits.
std::string serialize_scenario(const SimulationConfig& config);

}  // namespace oscibath
