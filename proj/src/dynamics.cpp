#include "dicke/dynamics.hpp"

#include "dicke/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace dicke {

namespace {

constexpr double kNormTolerance = 1e-10;

SimulationTrace run_fixed(const LadderState& initial, const PulseSchedule& schedule, const LadderMatrix& unit,
                          int steps, int samples) {
    const int dim = unit.dim();
    const double h = schedule.duration / steps;

    SimulationTrace trace;
    trace.steps = steps;
    trace.times.resize(static_cast<std::size_t>(samples) + 1);
    trace.populations.resize(samples + 1, dim);
    trace.fidelity.resize(trace.times.size());
    trace.norm_error.resize(trace.times.size());

    // Step that owns each output time, and the offset into that step.
    std::vector<int> owner(trace.times.size());
    for (int j = 0; j <= samples; ++j) {
        const double t = schedule.duration * j / samples;
        trace.times[j] = initial.time + t;
        owner[j] = std::min(static_cast<int>(std::floor(t / h)), steps - 1);
    }

    auto record = [&](int j, const Eigen::VectorXcd& psi) {
        const Eigen::VectorXd pops = psi.cwiseAbs2();
        trace.populations.row(j) = pops.transpose();
        trace.fidelity[j] = pops(dim - 1);
        trace.norm_error[j] = std::abs(1.0 - pops.sum());
    };

    Eigen::VectorXcd psi = initial.amplitudes;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    double last_chi = std::numeric_limits<double>::quiet_NaN();
    double last_delta = std::numeric_limits<double>::quiet_NaN();
    int next_output = 0;

    for (int k = 0; k < steps; ++k) {
        const double t0 = k * h;
        const double mid = t0 + 0.5 * h;
        const double chi = schedule.chi_at(mid);
        const double delta = schedule.delta_at(mid);
        if (chi != last_chi || delta != last_delta) {
            solver.compute(with_couplings(unit, 0.5 * chi, delta));
            if (solver.info() != Eigen::Success) {
                throw NumericalError("propagate: eigensolver failed at step " + std::to_string(k), k);
            }
            last_chi = chi;
            last_delta = delta;
        }
        const Eigen::MatrixXd& v = solver.eigenvectors();
        const Eigen::VectorXd& e = solver.eigenvalues();
        const Eigen::VectorXcd coeffs = v.transpose().cast<std::complex<double>>() * psi;

        auto evolve = [&](double tau) {
            Eigen::VectorXcd phased(dim);
            for (int i = 0; i < dim; ++i) phased(i) = coeffs(i) * std::polar(1.0, -e(i) * tau);
            return Eigen::VectorXcd(v.cast<std::complex<double>>() * phased);
        };

        while (next_output <= samples && owner[next_output] == k) {
            const double offset = schedule.duration * next_output / samples - t0;
            record(next_output, offset == 0.0 ? psi : evolve(offset));
            ++next_output;
        }
        psi = evolve(h);
    }
    trace.final_state = LadderState{psi, initial.time + schedule.duration};
    return trace;
}

} // namespace

LadderState initial_state(int n_pairs) {
    if (n_pairs < 1) throw DomainError("initial_state: n_pairs must be >= 1");
    LadderState s;
    s.amplitudes = Eigen::VectorXcd::Zero(n_pairs + 1);
    s.amplitudes(0) = 1.0;
    return s;
}

double fidelity(const LadderState& state) {
    if (state.amplitudes.size() == 0) throw DomainError("fidelity: empty state");
    return std::norm(state.amplitudes(state.amplitudes.size() - 1));
}

PulseSchedule PulseSchedule::square(double duration, double delta, double chi) {
    PulseSchedule s;
    s.kind = PulseKind::square;
    s.duration = duration;
    s.delta = delta;
    s.chi = chi;
    s.validate();
    return s;
}

PulseSchedule PulseSchedule::rap(double duration, double delta_start, double delta_end, double chi_peak,
                                 double envelope_width) {
    PulseSchedule s;
    s.kind = PulseKind::rap;
    s.duration = duration;
    s.delta_start = delta_start;
    s.delta_end = delta_end;
    s.chi_peak = chi_peak;
    s.envelope_width = envelope_width;
    s.validate();
    return s;
}

void PulseSchedule::validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw DomainError("schedule: duration must be > 0");
    if (kind == PulseKind::square) {
        if (!(chi >= 0.0)) throw DomainError("schedule: chi must be >= 0");
        if (!std::isfinite(delta)) throw DomainError("schedule: delta must be finite");
    } else {
        if (!(chi_peak >= 0.0)) throw DomainError("schedule: chi_peak must be >= 0");
        if (!(envelope_width > 0.0)) throw DomainError("schedule: envelope_width must be > 0");
        if (!std::isfinite(delta_start) || !std::isfinite(delta_end)) {
            throw DomainError("schedule: sweep endpoints must be finite");
        }
    }
}

double PulseSchedule::delta_at(double t) const {
    if (kind == PulseKind::square) return delta;
    return delta_start + (delta_end - delta_start) * (t / duration);
}

double PulseSchedule::chi_at(double t) const {
    if (kind == PulseKind::square) return chi;
    const double x = (t - 0.5 * duration) / (0.5 * envelope_width);
    return chi_peak * std::exp(-x * x);
}

PulseSchedule PulseSchedule::reversed() const {
    PulseSchedule r = *this;
    if (kind == PulseKind::rap) std::swap(r.delta_start, r.delta_end);
    return r;
}

SimulationTrace propagate(const LadderState& initial, const PulseSchedule& schedule, const EffectiveParams& params,
                          int steps, const PropagationOptions& options) {
    params.validate();
    schedule.validate();
    if (steps < 1) throw DomainError("propagate: steps must be >= 1");
    if (options.output_samples < 1) throw DomainError("propagate: output_samples must be >= 1");
    if (initial.n_pairs() != params.n_pairs) throw DomainError("propagate: state dimension does not match n_pairs");
    if (std::abs(initial.norm_squared() - 1.0) > kNormTolerance) {
        throw DomainError("propagate: initial state is not normalized");
    }

    EffectiveParams unit_params = params;
    unit_params.g = 1.0;
    unit_params.delta = 0.0;
    unit_params.omega1.reset();
    const LadderMatrix unit = build_via_projection(unit_params);

    SimulationTrace coarse = run_fixed(initial, schedule, unit, steps, options.output_samples);
    if (!options.converge) return coarse;

    for (long long s = 2LL * steps; s <= options.max_steps; s *= 2) {
        SimulationTrace fine = run_fixed(initial, schedule, unit, static_cast<int>(s), options.output_samples);
        fine.convergence_change = (fine.populations - coarse.populations).cwiseAbs().maxCoeff();
        if (fine.convergence_change < options.tolerance) return fine;
        coarse = std::move(fine);
    }
    throw NumericalError("propagate: populations did not converge within " + std::to_string(options.max_steps) +
                         " steps (last change " + std::to_string(coarse.convergence_change) + ")");
}

} // namespace dicke
