#pragma once

// Command-line front end. Frequencies in RunConfig are ordinary frequencies in kHz and are
// multiplied by 2 pi on the way into the library (rad/ms); times are in ms.

#include "json.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dicke::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_numerical = 3,
    exit_validation = 4,
};

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message);

    const std::string& key() const { return key_; }
    const std::string& message() const { return message_; }

    /// {"error":"config","key":...,"message":...} on a single line.
    std::string line() const;

private:
    std::string key_;
    std::string message_;
};

struct RunConfig {
    std::string command;        ///< spectrum | evolve | optimize | scaling | validate
    std::string preset;         ///< empty, fig2a, fig2b, fig3a..fig3f or fig4
    int ions = 16;
    double chi_khz = 3.0;
    double delta_khz = 0.0;     ///< square pulse detuning
    double delta_min_khz = -28.0;
    double delta_max_khz = 28.0;
    int points = 401;           ///< spectrum grid size
    std::string pulse = "square";
    double duration_ms = 1.0;
    double delta_start_khz = -28.0;
    double delta_end_khz = 28.0;
    double width_ms = 1.3;      ///< RAP envelope e^-1 full width
    bool optimized = false;     ///< evolve: replace delta_khz by the optimized square-pulse detuning
    int steps = 64;             ///< initial step count of the propagator
    int samples = 2000;         ///< output grid intervals; a trace has samples + 1 rows
    double horizon_ms = 0.0;    ///< optimizer time window, 0 selects the automatic one
    std::vector<int> ion_counts{2, 4, 8, 16, 32, 64, 128, 300};
    int max_ions = 64;          ///< scaling: largest count run; validate: largest register checked
    std::string out = ".";

    bool operator==(const RunConfig&) const = default;
};

/// Defaults for a command, before any preset, file or flag is applied.
RunConfig defaults_for(const std::string& command);

/// Overlays a preset onto `base`; throws ConfigError with key "preset" for an unknown name or one
/// that belongs to another command.
RunConfig apply_preset(RunConfig base, const std::string& preset);

nlohmann::json to_json(const RunConfig& config);

/// Overlays every key present in `doc` onto `base`. Unknown keys and wrong types are rejected.
RunConfig overlay_json(RunConfig base, const nlohmann::json& doc);

/// Per-command checks; throws ConfigError naming the first offending key.
void validate(const RunConfig& config);

/// Executes a validated config, writing data files into config.out plus metadata.json.
/// Diagnostics go to `err`, a one-line summary to `out`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing, config resolution, run).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dicke::cli
