#pragma once

// Square-pulse detuning optimization and the fidelity / optimal-detuning scaling study.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dicke {

struct OptimizationResult {
    int n_ions = 0;
    double chi = 0.0;
    double delta_opt = 0.0;
    double best_fidelity = 0.0;
    double time_of_peak = 0.0;
    double horizon = 0.0;             ///< final (possibly extended) time window
    double fidelity_at_zero = 0.0;    ///< peak fidelity of the resonant (Delta = 0) pulse
    std::vector<std::pair<double, double>> scan_trace;  ///< coarse (delta, peak fidelity)
    std::vector<double> refinement_history;             ///< incumbent after each golden-section step
    bool horizon_limited = false;     ///< peak still on the time boundary after all extensions
    bool at_bracket_edge = false;     ///< optimum on an end of the detuning bracket
};

struct OptimizerOptions {
    std::optional<double> horizon;   ///< ms; default max(4 pi / (sqrt(2N) g), 1.25 pi / g)
    int coarse_points = 41;
    double bracket = 2.0;            ///< search Delta in [0, bracket * g]
    double delta_tolerance = 1e-10;  ///< golden-section stop, relative to g
    int max_extensions = 10;
    double extension_factor = 1.5;
    double boundary_fraction = 0.98; ///< a peak later than this fraction of the horizon triggers extension
};

/// Largest target population reached by a square pulse with constant (delta, chi) within
/// [0, horizon], starting from the all-ancilla state. Returns (fidelity, time).
std::pair<double, double> square_pulse_peak(int n_pairs, double chi, double delta, double horizon);

/// Coarse grid over Delta in [0, 2g] followed by golden-section refinement of
/// Delta -> max_t fidelity(t). chi is the Ising strength (g = chi / 2).
OptimizationResult optimize_detuning(int n_pairs, double chi, const OptimizerOptions& options = {});

struct PowerLawFit {
    double coefficient = 0.0;
    double exponent = 0.0;
    double rms_log_residual = 0.0;
    int points = 0;
};

/// Ordinary least squares of ln y against ln x. Needs at least two points with distinct x,
/// all coordinates positive.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct ScalingEntry {
    int n_ions = 0;
    std::optional<OptimizationResult> result;
    std::string error;  ///< set when the optimization failed
};

struct ScalingResult {
    std::vector<ScalingEntry> entries;  ///< in input order
    PowerLawFit fidelity_fit;           ///< best_fidelity against n_ions
    PowerLawFit delta_fit;              ///< delta_opt against n_ions
    bool complete = true;               ///< every count succeeded
};

/// optimize_detuning for each (even) ion count, then power-law fits over the successful ones.
ScalingResult scaling_study(const std::vector<int>& ion_counts, double chi, const OptimizerOptions& options = {});

} // namespace dicke
