#pragma once

// Time evolution on the ladder. Times in ms, frequencies in rad/ms.

#include "dicke/ladder.hpp"

#include <Eigen/Dense>

#include <vector>

namespace dicke {

struct LadderState {
    Eigen::VectorXcd amplitudes;  ///< over pair index p = 0..N
    double time = 0.0;

    int n_pairs() const { return static_cast<int>(amplitudes.size()) - 1; }
    double norm_squared() const { return amplitudes.squaredNorm(); }
};

/// All population in |2N, 0> (every ion in the ancilla level).
LadderState initial_state(int n_pairs);

/// Population of the half-excited Dicke state |0, 0>, the last pair index.
double fidelity(const LadderState& state);

enum class PulseKind { square, rap };

/// Detuning Delta(t) and Ising strength chi(t) on [0, duration]. The Hamiltonian at time t is
/// (chi(t) / 2) J_x^2 + Delta(t) * p on the ladder.
struct PulseSchedule {
    PulseKind kind = PulseKind::square;
    double duration = 0.0;

    // square
    double delta = 0.0;
    double chi = 0.0;

    // rap: linear detuning ramp, Gaussian chi envelope centred at duration / 2
    double delta_start = 0.0;
    double delta_end = 0.0;
    double chi_peak = 0.0;
    double envelope_width = 0.0;  ///< full width at which chi drops to chi_peak / e

    static PulseSchedule square(double duration, double delta, double chi);
    static PulseSchedule rap(double duration, double delta_start, double delta_end, double chi_peak,
                             double envelope_width);

    void validate() const;

    double delta_at(double t) const;
    double chi_at(double t) const;

    /// Same pulse played backwards in time.
    PulseSchedule reversed() const;
};

struct SimulationTrace {
    std::vector<double> times;
    Eigen::MatrixXd populations;      ///< rows follow times, columns follow pair index
    std::vector<double> fidelity;
    std::vector<double> norm_error;   ///< |1 - |psi|^2|
    LadderState final_state;
    int steps = 0;                    ///< integration steps of the returned trace
    double convergence_change = 0.0;  ///< max population change against half the steps
};

struct PropagationOptions {
    int output_samples = 2000;   ///< intervals of the output grid; the trace holds output_samples + 1 rows
    bool converge = true;        ///< double the step count until populations settle
    double tolerance = 1e-8;
    int max_steps = 1 << 20;
};

/// Piecewise-constant midpoint propagation: each step of length h = duration / steps applies
/// exp(-i H(t_mid) h) through an eigendecomposition of H(t_mid). Output samples between step
/// boundaries are obtained from the same step exponential, so the output grid does not depend
/// on the step count. With options.converge the step count is doubled until the largest
/// population change drops below options.tolerance.
///
/// Only params.n_pairs is read; the couplings come from the schedule.
SimulationTrace propagate(const LadderState& initial, const PulseSchedule& schedule, const EffectiveParams& params,
                          int steps, const PropagationOptions& options = {});

} // namespace dicke
