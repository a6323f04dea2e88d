#include "oscibath/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "oscibath/coefficients.hpp"
#include "text_util.hpp"

namespace oscibath {

namespace {

using detail::format_double;
using detail::trim;

const std::set<std::string> integration_keys{"t_end", "output_dt", "rtol", "atol"};
const std::set<std::string> oscillator_keys{"omega", "n0", "v0"};
const std::set<std::string> bath_numeric_keys{"temperature", "alpha", "gamma"};
const std::set<std::string> constant_keys{"lambda", "D"};
const std::set<std::string> phenomenological_keys{"mean_lambda", "amp_lambda", "mean_D",  "amp_D",
                                                  "osc_freq",    "phase_lambda", "phase_D", "ramp_time"};

std::optional<std::size_t> parse_index(const std::string& s) {
    if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return std::nullopt;
    const auto v = static_cast<std::size_t>(std::stoul(s));
    if (v == 0) return std::nullopt;
    return v;
}

// Section name -> (kind, indices).
struct SectionId {
    std::string kind;
    std::vector<std::size_t> index;
};

std::optional<SectionId> classify(const std::string& name) {
    const auto parts = detail::split(name, '.');
    const std::string& kind = parts[0];
    std::size_t expected = 0;
    if (kind == "integration" || kind == "coupling") expected = 0;
    else if (kind == "oscillator" || kind == "coefficients") expected = 1;
    else if (kind == "bath") expected = 2;
    else return std::nullopt;
    if (parts.size() != expected + 1) return std::nullopt;
    SectionId id{kind, {}};
    for (std::size_t k = 1; k < parts.size(); ++k) {
        const auto idx = parse_index(parts[k]);
        if (!idx) return std::nullopt;
        id.index.push_back(*idx);
    }
    return id;
}

[[noreturn]] void fail_key(const std::string& section, const ScenarioEntry& e, const std::string& what) {
    throw InvalidConfig(section + "." + e.key + " (line " + std::to_string(e.line) + "): " + what);
}

double number(const std::string& section, const ScenarioEntry& e) {
    const auto v = detail::parse_double(e.value);
    if (!v) fail_key(section, e, "malformed number '" + e.value + "'");
    return *v;
}

bool boolean(const std::string& section, const ScenarioEntry& e) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail_key(section, e, "expected true or false, got '" + e.value + "'");
}

// Key -> entry map with duplicate detection.
std::map<std::string, const ScenarioEntry*> index_entries(const ScenarioSection& s) {
    std::map<std::string, const ScenarioEntry*> out;
    for (const auto& e : s.entries) {
        if (!out.emplace(e.key, &e).second) fail_key(s.name, e, "duplicate key");
    }
    return out;
}

void reject_unknown(const ScenarioSection& s, const std::set<std::string>& allowed) {
    for (const auto& e : s.entries)
        if (!allowed.count(e.key)) fail_key(s.name, e, "unknown key");
}

std::string section_of(const std::vector<std::string>& parts) {
    const std::string& kind = parts[0];
    std::size_t depth = 1;
    if (kind == "oscillator" || kind == "coefficients") depth = 2;
    else if (kind == "bath") depth = 3;
    if (parts.size() <= depth) return {};
    std::string name = parts[0];
    for (std::size_t k = 1; k < depth; ++k) name += "." + parts[k];
    return name;
}

bool is_numeric_field(const SectionId& id, const std::string& key) {
    if (id.kind == "integration") return integration_keys.count(key) > 0;
    if (id.kind == "oscillator") return oscillator_keys.count(key) > 0;
    if (id.kind == "bath") return bath_numeric_keys.count(key) > 0;
    if (id.kind == "coefficients") return constant_keys.count(key) > 0 || phenomenological_keys.count(key) > 0;
    if (id.kind == "coupling") {
        if (key == "beta") return true;
        const auto parts = detail::split(key, '.');
        return parts.size() == 3 && parts[0] == "beta" && parse_index(parts[1]) && parse_index(parts[2]);
    }
    return false;
}

}  // namespace

ScenarioDocument ScenarioDocument::parse(const std::string& text, const std::string& origin) {
    ScenarioDocument doc;
    doc.origin_ = origin;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidConfig(origin + ":" + std::to_string(line_no) + ": unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!classify(name))
                throw InvalidConfig(origin + ":" + std::to_string(line_no) + ": unknown section [" + name + "]");
            if (!seen.insert(name).second)
                throw InvalidConfig(origin + ":" + std::to_string(line_no) + ": duplicate section [" + name + "]");
            doc.sections_.push_back({name, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        if (doc.sections_.empty())
            throw InvalidConfig(origin + ":" + std::to_string(line_no) + ": key outside any section");
        doc.sections_.back().entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no});
    }
    return doc;
}

ScenarioDocument ScenarioDocument::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open scenario '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

void ScenarioDocument::set(const std::string& dotted_key, const std::string& value) {
    const auto parts = detail::split(dotted_key, '.');
    const std::string section = section_of(parts);
    const std::optional<SectionId> id = section.empty() ? std::nullopt : classify(section);
    const std::string key = section.empty() ? std::string{} : dotted_key.substr(section.size() + 1);
    if (!id || !is_numeric_field(*id, key))
        throw InvalidConfig("'" + dotted_key + "' does not name a numeric scenario field");

    auto it = std::find_if(sections_.begin(), sections_.end(), [&](const auto& s) { return s.name == section; });
    if (it == sections_.end()) {
        sections_.push_back({section, {}});
        it = sections_.end() - 1;
    }
    auto& entries = it->entries;
    if (section == "coupling" && key == "beta") {
        // A uniform coupling replaces any per-pair values.
        std::erase_if(entries, [](const auto& e) { return e.key.rfind("beta.", 0) == 0; });
    }
    auto entry = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.key == key; });
    if (entry != entries.end()) entry->value = value;
    else entries.push_back({key, value, 0});
}

SimulationConfig to_config(const ScenarioDocument& doc) {
    std::map<std::size_t, const ScenarioSection*> oscillators, coefficients;
    std::map<std::pair<std::size_t, std::size_t>, const ScenarioSection*> baths;
    const ScenarioSection* integration = nullptr;
    const ScenarioSection* coupling = nullptr;

    for (const auto& s : doc.sections()) {
        const auto id = *classify(s.name);
        if (id.kind == "integration") integration = &s;
        else if (id.kind == "coupling") coupling = &s;
        else if (id.kind == "oscillator") oscillators[id.index[0]] = &s;
        else if (id.kind == "coefficients") coefficients[id.index[0]] = &s;
        else baths[{id.index[0], id.index[1]}] = &s;
    }

    const std::size_t n = oscillators.size();
    if (n == 0) throw InvalidConfig("scenario defines no [oscillator.N] sections");
    if (oscillators.rbegin()->first != n) throw InvalidConfig("oscillator sections must be numbered 1.." + std::to_string(n));

    SimulationConfig config;
    if (integration) {
        reject_unknown(*integration, integration_keys);
        const auto keys = index_entries(*integration);
        for (const auto& [key, e] : keys) {
            const double v = number(integration->name, *e);
            if (key == "t_end") config.t_end = v;
            else if (key == "output_dt") config.output_dt = v;
            else if (key == "rtol") config.rtol = v;
            else config.atol = v;
        }
    }

    std::vector<bool> slope_given;
    for (std::size_t i = 1; i <= n; ++i) {
        const auto& s = *oscillators.at(i);
        reject_unknown(s, oscillator_keys);
        const auto keys = index_entries(s);
        if (!keys.count("omega")) throw InvalidConfig(s.name + ".omega: missing");
        OscillatorSpec osc;
        osc.omega = number(s.name, *keys.at("omega"));
        if (keys.count("n0")) osc.n0 = number(s.name, *keys.at("n0"));
        if (keys.count("v0")) osc.v0 = number(s.name, *keys.at("v0"));
        slope_given.push_back(keys.count("v0") > 0);
        config.oscillators.push_back(osc);
    }

    for (const auto& [idx, s] : coefficients)
        if (idx > n) throw InvalidConfig("[" + s->name + "] has no matching oscillator");
    for (std::size_t i = 1; i <= n; ++i) {
        const auto found = coefficients.find(i);
        if (found == coefficients.end()) throw InvalidConfig("coefficients." + std::to_string(i) + ": section missing");
        const auto& s = *found->second;
        const auto keys = index_entries(s);
        if (!keys.count("kind")) throw InvalidConfig(s.name + ".kind: missing");
        const std::string kind = keys.at("kind")->value;
        if (kind == "constant") {
            auto allowed = constant_keys;
            allowed.insert("kind");
            reject_unknown(s, allowed);
            ConstantParams p;
            if (keys.count("lambda")) p.lambda = number(s.name, *keys.at("lambda"));
            if (keys.count("D")) p.diffusion = number(s.name, *keys.at("D"));
            config.providers.emplace_back(p);
        } else if (kind == "phenomenological") {
            auto allowed = phenomenological_keys;
            allowed.insert({"kind", "allow_negative_friction"});
            reject_unknown(s, allowed);
            PhenomenologicalParams p;
            p.osc_freq = config.oscillators[i - 1].omega;
            const auto get = [&](const char* key, double& field) {
                if (keys.count(key)) field = number(s.name, *keys.at(key));
            };
            get("mean_lambda", p.mean_lambda);
            get("amp_lambda", p.amp_lambda);
            get("mean_D", p.mean_diffusion);
            get("amp_D", p.amp_diffusion);
            get("osc_freq", p.osc_freq);
            get("phase_lambda", p.phase_lambda);
            get("phase_D", p.phase_diffusion);
            get("ramp_time", p.ramp_time);
            if (keys.count("allow_negative_friction"))
                p.allow_negative_friction = boolean(s.name, *keys.at("allow_negative_friction"));
            config.providers.emplace_back(p);
        } else if (kind == "tabulated") {
            reject_unknown(s, {"kind", "file"});
            if (!keys.count("file")) throw InvalidConfig(s.name + ".file: missing");
            TabulatedParams p;
            p.source = keys.at("file")->value;
            p.table = read_coefficient_table(p.source);
            config.providers.emplace_back(std::move(p));
        } else {
            fail_key(s.name, *keys.at("kind"), "unknown coefficient kind '" + kind + "'");
        }
    }

    config.baths.assign(n, {});
    for (const auto& [key, s] : baths) {
        const auto [osc, slot] = key;
        if (osc > n) throw InvalidConfig("[" + s->name + "] has no matching oscillator");
        if (slot != config.baths[osc - 1].size() + 1)
            throw InvalidConfig("[" + s->name + "]: baths must be numbered consecutively from 1");
        reject_unknown(*s, {"statistics", "temperature", "alpha", "gamma"});
        const auto keys = index_entries(*s);
        for (const char* required : {"statistics", "temperature", "alpha", "gamma"})
            if (!keys.count(required)) throw InvalidConfig(s->name + "." + required + ": missing");
        BathSpec bath;
        try {
            bath.statistics = parse_bath_statistics(keys.at("statistics")->value);
        } catch (const InvalidConfig& e) {
            fail_key(s->name, *keys.at("statistics"), e.what());
        }
        bath.temperature = number(s->name, *keys.at("temperature"));
        bath.coupling = number(s->name, *keys.at("alpha"));
        bath.cutoff = number(s->name, *keys.at("gamma"));
        config.baths[osc - 1].push_back(bath);
    }

    config.coupling = CouplingNetwork(n);
    if (coupling) {
        const auto keys = index_entries(*coupling);
        for (const auto& e : coupling->entries)
            if (!is_numeric_field({"coupling", {}}, e.key)) fail_key(coupling->name, e, "unknown key");
        if (keys.count("beta")) config.coupling = CouplingNetwork::uniform(n, number(coupling->name, *keys.at("beta")));
        for (const auto& e : coupling->entries) {
            if (e.key == "beta") continue;
            const auto parts = detail::split(e.key, '.');
            const std::size_t i = *parse_index(parts[1]);
            const std::size_t j = *parse_index(parts[2]);
            if (i > n || j > n || i == j) fail_key(coupling->name, e, "pair index out of range");
            config.coupling.set_pair(i - 1, j - 1, number(coupling->name, e));
        }
    }

    // An omitted v0 takes the slope the first-order equation implies at t = 0.
    config = validate_config(config);
    for (std::size_t i = 0; i < n; ++i) {
        if (slope_given[i]) continue;
        const auto c0 = make_provider(config.providers[i])->sample(0.0);
        config.oscillators[i].v0 = 2.0 * c0.diffusion - 2.0 * c0.lambda * config.oscillators[i].n0;
    }
    return config;
}

SimulationConfig parse_scenario(const std::string& text, const std::string& origin) {
    return to_config(ScenarioDocument::parse(text, origin));
}

SimulationConfig load_scenario(const std::string& path) { return to_config(ScenarioDocument::load(path)); }

std::string serialize_scenario(const SimulationConfig& config) {
    std::ostringstream out;
    const auto kv = [&out](const std::string& key, double value) { out << key << " = " << format_double(value) << '\n'; };

    out << "[integration]\n";
    kv("t_end", config.t_end);
    kv("output_dt", config.output_dt);
    kv("rtol", config.rtol);
    kv("atol", config.atol);

    for (std::size_t i = 0; i < config.oscillators.size(); ++i) {
        const auto& osc = config.oscillators[i];
        const std::string idx = std::to_string(i + 1);
        out << "\n[oscillator." << idx << "]\n";
        kv("omega", osc.omega);
        kv("n0", osc.n0);
        kv("v0", osc.v0);

        out << "\n[coefficients." << idx << "]\n";
        const auto& provider = config.providers.at(i);
        if (const auto* c = std::get_if<ConstantParams>(&provider)) {
            out << "kind = constant\n";
            kv("lambda", c->lambda);
            kv("D", c->diffusion);
        } else if (const auto* p = std::get_if<PhenomenologicalParams>(&provider)) {
            out << "kind = phenomenological\n";
            kv("mean_lambda", p->mean_lambda);
            kv("amp_lambda", p->amp_lambda);
            kv("mean_D", p->mean_diffusion);
            kv("amp_D", p->amp_diffusion);
            kv("osc_freq", p->osc_freq);
            kv("phase_lambda", p->phase_lambda);
            kv("phase_D", p->phase_diffusion);
            kv("ramp_time", p->ramp_time);
            out << "allow_negative_friction = " << (p->allow_negative_friction ? "true" : "false") << '\n';
        } else {
            const auto& tab = std::get<TabulatedParams>(provider);
            if (tab.source.empty())
                throw InvalidConfig("coefficients." + idx + ": in-memory table has no file to reference");
            out << "kind = tabulated\nfile = " << tab.source << '\n';
        }

        if (i < config.baths.size()) {
            for (std::size_t b = 0; b < config.baths[i].size(); ++b) {
                const auto& bath = config.baths[i][b];
                out << "\n[bath." << idx << '.' << b + 1 << "]\n";
                out << "statistics = " << to_string(bath.statistics) << '\n';
                kv("temperature", bath.temperature);
                kv("alpha", bath.coupling);
                kv("gamma", bath.cutoff);
            }
        }
    }

    out << "\n[coupling]\n";
    const std::size_t n = config.coupling.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (config.coupling(i, j) != 0.0)
                kv("beta." + std::to_string(i + 1) + "." + std::to_string(j + 1), config.coupling(i, j));
    return out.str();
}

}  // namespace oscibath
