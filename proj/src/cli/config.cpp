#include "dicke/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>

namespace dicke::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::invalid_argument(key + ": " + message), key_(std::move(key)), message_(message) {}

std::string ConfigError::line() const {
    return json{{"error", "config"}, {"key", key_}, {"message", message_}}.dump();
}

namespace {

const std::array<std::string, 5> kCommands{"spectrum", "evolve", "optimize", "scaling", "validate"};

void read(const json& v, const std::string& key, double& dst) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
    dst = x;
}

void read(const json& v, const std::string& key, int& dst) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError(key, "integer out of range");
    }
    dst = static_cast<int>(x);
}

void read(const json& v, const std::string& key, bool& dst) {
    if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
    dst = v.get<bool>();
}

void read(const json& v, const std::string& key, std::string& dst) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    dst = v.get<std::string>();
}

void read(const json& v, const std::string& key, std::vector<int>& dst) {
    if (!v.is_array()) throw ConfigError(key, "expected an array of integers");
    std::vector<int> values;
    for (const auto& item : v) {
        int x = 0;
        read(item, key, x);
        values.push_back(x);
    }
    dst = std::move(values);
}

template <class F>
void for_each_field(RunConfig& c, F&& f) {
    f("command", c.command);
    f("preset", c.preset);
    f("ions", c.ions);
    f("chi_khz", c.chi_khz);
    f("delta_khz", c.delta_khz);
    f("delta_min_khz", c.delta_min_khz);
    f("delta_max_khz", c.delta_max_khz);
    f("points", c.points);
    f("pulse", c.pulse);
    f("duration_ms", c.duration_ms);
    f("delta_start_khz", c.delta_start_khz);
    f("delta_end_khz", c.delta_end_khz);
    f("width_ms", c.width_ms);
    f("optimized", c.optimized);
    f("steps", c.steps);
    f("samples", c.samples);
    f("horizon_ms", c.horizon_ms);
    f("ion_counts", c.ion_counts);
    f("max_ions", c.max_ions);
    f("out", c.out);
}

void require(bool ok, const std::string& key, const std::string& message) {
    if (!ok) throw ConfigError(key, message);
}

void require_register(int ions, const std::string& key) {
    require(ions >= 2 && ions % 2 == 0, key, "ion number must be even and at least 2");
    require(ions <= 4000, key, "ion number must not exceed 4000");
}

} // namespace

RunConfig defaults_for(const std::string& command) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        throw ConfigError("command", "unknown command '" + command + "'");
    }
    RunConfig c;
    c.command = command;
    if (command == "validate") c.max_ions = 8;
    return c;
}

RunConfig apply_preset(RunConfig base, const std::string& preset) {
    static const std::map<std::string, std::string> owner{
        {"fig2a", "spectrum"}, {"fig2b", "evolve"}, {"fig3a", "evolve"}, {"fig3b", "evolve"},
        {"fig3c", "evolve"},   {"fig3d", "evolve"}, {"fig3e", "evolve"}, {"fig3f", "evolve"},
        {"fig4", "scaling"},
    };
    const auto it = owner.find(preset);
    if (it == owner.end()) throw ConfigError("preset", "unknown preset '" + preset + "'");
    if (!base.command.empty() && base.command != it->second) {
        throw ConfigError("preset", "preset '" + preset + "' belongs to the " + it->second + " command");
    }
    RunConfig c = base.command.empty() ? defaults_for(it->second) : std::move(base);
    c.preset = preset;
    c.chi_khz = 3.0;

    if (preset == "fig2a") {
        c.ions = 16;
        c.delta_min_khz = -90.0;
        c.delta_max_khz = 90.0;
        c.points = 901;
    } else if (preset == "fig2b") {
        c.ions = 16;
        c.pulse = "rap";
        c.duration_ms = 2.0;
        c.delta_start_khz = -28.0;
        c.delta_end_khz = 28.0;
        c.width_ms = 1.3;
    } else if (preset.starts_with("fig3")) {
        const char panel = preset.back();
        static const std::map<char, int> ions{{'a', 2}, {'b', 6}, {'c', 20}, {'d', 2}, {'e', 6}, {'f', 20}};
        c.ions = ions.at(panel);
        c.pulse = "square";
        c.duration_ms = 1.0;
        c.delta_khz = 0.0;
        c.optimized = panel >= 'd';
    } else if (preset == "fig4") {
        c.ion_counts = {2, 4, 8, 16, 32, 64, 128, 300};
        c.max_ions = 64;
    }
    return c;
}

json to_json(const RunConfig& config) {
    json doc = json::object();
    RunConfig copy = config;
    for_each_field(copy, [&](const char* key, const auto& value) { doc[key] = value; });
    return doc;
}

RunConfig overlay_json(RunConfig base, const json& doc) {
    if (!doc.is_object()) throw ConfigError("$", "config must be a JSON object");
    std::vector<std::string> known;
    for_each_field(base, [&](const char* key, auto&) { known.emplace_back(key); });
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key, "unknown key");
        }
    }
    for_each_field(base, [&](const char* key, auto& field) {
        if (const auto it = doc.find(key); it != doc.end()) read(*it, key, field);
    });
    return base;
}

void validate(const RunConfig& c) {
    require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(), "command",
            "unknown command '" + c.command + "'");
    require(!c.out.empty(), "out", "output directory must not be empty");
    if (!c.preset.empty()) {
        RunConfig probe;
        probe.command = c.command;
        apply_preset(probe, c.preset);
    }

    if (c.command == "spectrum") {
        require_register(c.ions, "ions");
        require(c.chi_khz > 0.0, "chi_khz", "must be positive");
        require(c.delta_max_khz > c.delta_min_khz, "delta_max_khz", "must exceed delta_min_khz");
        require(c.points >= 2 && c.points <= 1000000, "points", "must lie in [2, 1000000]");
    } else if (c.command == "evolve") {
        require_register(c.ions, "ions");
        require(c.chi_khz > 0.0, "chi_khz", "must be positive");
        require(c.pulse == "square" || c.pulse == "rap", "pulse", "must be 'square' or 'rap'");
        require(c.duration_ms > 0.0, "duration_ms", "must be positive");
        require(c.steps >= 1, "steps", "must be at least 1");
        require(c.samples >= 2, "samples", "must be at least 2");
        if (c.pulse == "rap") {
            require(c.width_ms > 0.0, "width_ms", "must be positive");
            require(!c.optimized, "optimized", "only applies to square pulses");
        } else if (c.optimized) {
            require(c.horizon_ms >= 0.0, "horizon_ms", "must be non-negative");
        }
    } else if (c.command == "optimize") {
        require_register(c.ions, "ions");
        require(c.chi_khz > 0.0, "chi_khz", "must be positive");
        require(c.horizon_ms >= 0.0, "horizon_ms", "must be non-negative");
    } else if (c.command == "scaling") {
        require(c.chi_khz > 0.0, "chi_khz", "must be positive");
        require(!c.ion_counts.empty(), "ion_counts", "must not be empty");
        for (int n : c.ion_counts) require_register(n, "ion_counts");
        require(c.max_ions >= 2, "max_ions", "must be at least 2");
        require(std::any_of(c.ion_counts.begin(), c.ion_counts.end(), [&](int n) { return n <= c.max_ions; }),
                "max_ions", "excludes every entry of ion_counts");
        require(c.horizon_ms >= 0.0, "horizon_ms", "must be non-negative");
    } else if (c.command == "validate") {
        require_register(c.max_ions, "max_ions");
        require(c.max_ions <= 200, "max_ions", "must not exceed 200");
    }
}

} // namespace dicke::cli
