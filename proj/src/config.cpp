#include "kvn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "kvn/csv.hpp"

namespace kvn {

const char* to_string(ScenarioName s) {
    switch (s) {
        case ScenarioName::Free: return "free";
        case ScenarioName::Box: return "box";
        case ScenarioName::Gravity: return "gravity";
        case ScenarioName::TwoSlit: return "two-slit";
        case ScenarioName::KappaDial: return "kappa-dial";
        case ScenarioName::Spectrum: return "spectrum";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "config line " << line << ": " << what;
    throw ConfigError(msg.str());
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return trim(s.substr(1, s.size() - 2));
    return s;
}

template <class T>
T parse_number(const std::string& text, const std::string& key, int line) {
    T v{};
    const char* b = text.data();
    const char* e = b + text.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) fail(line, "malformed number '" + text + "' for key '" + key + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(v)) fail(line, "non-finite value for key '" + key + "'");
    return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& key, int line) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(trim(item), key, line));
    if (out.empty()) fail(line, "empty list for key '" + key + "'");
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&, int)>;
using Getter = std::function<std::string(const ScenarioConfig&)>;

struct Field {
    std::string key;
    Setter set;
    Getter get;
};

template <class T>
Field number(const std::string& key, T ScenarioConfig::*member) {
    return {key,
            [member](ScenarioConfig& c, const std::string& k, const std::string& v, int line) {
                c.*member = parse_number<T>(v, k, line);
            },
            [member](const ScenarioConfig& c) {
                if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
                else return std::to_string(c.*member);
            }};
}

Field text(const std::string& key, std::string ScenarioConfig::*member, std::vector<std::string> choices = {}) {
    return {key,
            [member, choices](ScenarioConfig& c, const std::string& k, const std::string& v, int line) {
                if (!choices.empty() && std::find(choices.begin(), choices.end(), v) == choices.end())
                    fail(line, "invalid value '" + v + "' for key '" + k + "'");
                if (v.empty()) fail(line, "empty value for key '" + k + "'");
                c.*member = v;
            },
            [member](const ScenarioConfig& c) { return c.*member; }};
}

Field list(const std::string& key, std::vector<double> ScenarioConfig::*member) {
    return {key,
            [member](ScenarioConfig& c, const std::string& k, const std::string& v, int line) {
                c.*member = parse_list(v, k, line);
            },
            [member](const ScenarioConfig& c) { return list_text(c.*member); }};
}

const std::vector<Field>& all_fields() {
    static const std::vector<Field> f = {
        number("hbar", &ScenarioConfig::hbar),
        number("mass", &ScenarioConfig::mass),
        number("seed", &ScenarioConfig::seed),
        number("n_samples", &ScenarioConfig::n_samples),
        text("output_dir", &ScenarioConfig::output_dir),
        number("q_min", &ScenarioConfig::q_min),
        number("q_max", &ScenarioConfig::q_max),
        number("n_q", &ScenarioConfig::n_q),
        number("dual_min", &ScenarioConfig::dual_min),
        number("dual_max", &ScenarioConfig::dual_max),
        number("n_dual", &ScenarioConfig::n_dual),
        number("q0", &ScenarioConfig::q0),
        number("p0", &ScenarioConfig::p0),
        number("sigma_q", &ScenarioConfig::sigma_q),
        number("sigma_p", &ScenarioConfig::sigma_p),
        list("times", &ScenarioConfig::times),
        number("length", &ScenarioConfig::length),
        number("g", &ScenarioConfig::g),
        text("backend", &ScenarioConfig::backend, {"characteristics", "image-kernel"}),
        number("n_images", &ScenarioConfig::n_images),
        number("tail_tol", &ScenarioConfig::tail_tol),
        text("potential", &ScenarioConfig::potential, {"quartic", "harmonic"}),
        list("kappas", &ScenarioConfig::kappas),
        text("protocol", &ScenarioConfig::protocol, {"coherent", "fixed-moments"}),
        number("dt", &ScenarioConfig::dt),
        number("t_final", &ScenarioConfig::t_final),
        number("slit_separation", &ScenarioConfig::slit_separation),
        number("slit_width", &ScenarioConfig::slit_width),
        number("momentum_spread", &ScenarioConfig::momentum_spread),
        number("n_max", &ScenarioConfig::n_max),
        number("kappa_min", &ScenarioConfig::kappa_min),
        number("kappa_max", &ScenarioConfig::kappa_max),
        number("n_kappa", &ScenarioConfig::n_kappa),
    };
    return f;
}

const Field& field(const std::string& key) {
    for (const Field& f : all_fields())
        if (f.key == key) return f;
    throw ConfigError("internal: no field " + key);
}

ScenarioConfig defaults(ScenarioName s) {
    ScenarioConfig c;
    c.scenario = s;
    switch (s) {
        case ScenarioName::Free:
            c.q_min = -2.0, c.q_max = 6.0, c.n_q = 512;
            c.dual_min = -3.0, c.dual_max = 3.0, c.n_dual = 256;
            c.q0 = 0.5, c.p0 = 1.0, c.sigma_q = 0.1, c.sigma_p = 0.1;
            c.times = {0.25, 0.75, 2.0};
            break;
        case ScenarioName::Box:
            c.length = 1.0, c.n_q = 256;
            c.dual_min = -2.0, c.dual_max = 2.0, c.n_dual = 256;
            c.q0 = 0.5, c.p0 = 1.0, c.sigma_q = 0.05, c.sigma_p = 0.1;
            c.times = {0.25, 0.75, 2.0};
            break;
        case ScenarioName::Gravity:
            c.q_min = -2.0, c.q_max = 3.0, c.n_q = 512;
            c.dual_min = -3.0, c.dual_max = 3.0, c.n_dual = 256;
            c.q0 = 0.5, c.p0 = 1.0, c.sigma_q = 0.1, c.sigma_p = 0.1;
            c.g = 1.0;
            c.times = {0.25, 0.75, 2.0};
            break;
        case ScenarioName::TwoSlit:
            c.slit_separation = 1.0, c.slit_width = 0.05, c.momentum_spread = 0.3, c.t_final = 1.0;
            break;
        case ScenarioName::KappaDial:
            c.potential = "quartic";
            c.kappas = {0.4, 0.2, 0.1};
            c.q0 = 1.0, c.p0 = 0.0, c.sigma_q = std::sqrt(0.2), c.sigma_p = std::sqrt(0.2);
            c.t_final = 1.0, c.dt = 1e-3;
            break;
        case ScenarioName::Spectrum:
            c.length = 1.0, c.n_max = 3, c.kappa_min = 0.0, c.kappa_max = 1.0, c.n_kappa = 11;
            break;
    }
    return c;
}

const std::vector<std::string> kGlobal = {"hbar", "mass", "seed", "output_dir"};

}  // namespace

std::vector<std::string> allowed_keys(ScenarioName s) {
    std::vector<std::string> k = kGlobal;
    auto add = [&](std::initializer_list<const char*> more) { k.insert(k.end(), more.begin(), more.end()); };
    switch (s) {
        case ScenarioName::Free:
            add({"n_samples", "q_min", "q_max", "n_q", "dual_min", "dual_max", "n_dual", "q0", "p0", "sigma_q",
                 "sigma_p", "times"});
            break;
        case ScenarioName::Box:
            add({"n_samples", "length", "n_q", "dual_min", "dual_max", "n_dual", "q0", "p0", "sigma_q", "sigma_p",
                 "times", "backend", "n_images", "tail_tol"});
            break;
        case ScenarioName::Gravity:
            add({"n_samples", "q_min", "q_max", "n_q", "dual_min", "dual_max", "n_dual", "q0", "p0", "sigma_q",
                 "sigma_p", "times", "g"});
            break;
        case ScenarioName::TwoSlit:
            add({"slit_separation", "slit_width", "momentum_spread", "t_final"});
            break;
        case ScenarioName::KappaDial:
            add({"potential", "kappas", "protocol", "q0", "p0", "sigma_q", "sigma_p", "t_final", "dt"});
            break;
        case ScenarioName::Spectrum:
            add({"length", "n_max", "kappa_min", "kappa_max", "n_kappa"});
            break;
    }
    return k;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out{{"scenario", to_string(scenario)}};
    for (const std::string& k : allowed_keys(scenario)) out.emplace_back(k, field(k).get(*this));
    return out;
}

ScenarioConfig parse_config(const std::string& input) {
    std::istringstream in(input);
    std::string raw;
    int line = 0;
    bool have_section = false;
    ScenarioConfig cfg;
    std::vector<std::string> keys;
    std::set<std::string> seen;

    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "malformed section header");
            if (have_section) fail(line, "only one [scenario] section is allowed");
            const std::string name = trim(s.substr(1, s.size() - 2));
            static const std::vector<std::pair<std::string, ScenarioName>> names = {
                {"free", ScenarioName::Free},         {"box", ScenarioName::Box},
                {"gravity", ScenarioName::Gravity},   {"two-slit", ScenarioName::TwoSlit},
                {"kappa-dial", ScenarioName::KappaDial}, {"spectrum", ScenarioName::Spectrum}};
            auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.first == name; });
            if (it == names.end()) fail(line, "unknown scenario '" + name + "'");
            cfg = defaults(it->second);
            keys = allowed_keys(it->second);
            have_section = true;
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = unquote(trim(s.substr(eq + 1)));
        if (!have_section) fail(line, "key '" + key + "' appears before the [scenario] section header");
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            fail(line, "unknown key '" + key + "' for scenario " + to_string(cfg.scenario));
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
        field(key).set(cfg, key, value, line);
    }
    if (!have_section) throw ConfigError("config: missing [scenario] section header");

    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
        if (cfg.times[i] < 0.0) throw ConfigError("config: times must be >= 0");
        if (i > 0 && !(cfg.times[i] > cfg.times[i - 1]))
            throw ConfigError("config: times must be strictly increasing");
    }
    if (!(cfg.hbar > 0.0) || !(cfg.mass > 0.0)) throw ConfigError("config: hbar and mass must be positive");
    if (cfg.n_samples < 1) throw ConfigError("config: n_samples must be >= 1");
    if (cfg.scenario == ScenarioName::Spectrum && (cfg.n_max < 1 || cfg.n_kappa < 2))
        throw ConfigError("config: spectrum needs n_max >= 1 and n_kappa >= 2");
    if (cfg.scenario == ScenarioName::KappaDial && cfg.kappas.empty())
        throw ConfigError("config: kappas must not be empty");
    return cfg;
}

}  // namespace kvn
