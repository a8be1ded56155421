#include "dicke/optimizer.hpp"

#include "dicke/detail/parallel.hpp"
#include "dicke/errors.hpp"
#include "dicke/ladder.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace dicke {

namespace {

constexpr double kGolden = 0.6180339887498949;

LadderMatrix unit_ladder(int n_pairs) {
    EffectiveParams p;
    p.n_pairs = n_pairs;
    p.g = 1.0;
    return build_via_projection(p);
}

// Target population of a constant Hamiltonian, f(t) = |sum_k c_k exp(-i E_k t)|^2 with
// c_k = <N|k><k|0>.
class TargetSignal {
public:
    TargetSignal(const LadderMatrix& unit, double g, double delta) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(with_couplings(unit, g, delta));
        if (solver.info() != Eigen::Success) throw NumericalError("square pulse: eigensolver failed");
        const Eigen::MatrixXd& v = solver.eigenvectors();
        const int last = unit.dim() - 1;
        double largest = 0.0;
        for (int k = 0; k <= last; ++k) largest = std::max(largest, std::abs(v(last, k) * v(0, k)));
        for (int k = 0; k <= last; ++k) {
            const double c = v(last, k) * v(0, k);
            if (std::abs(c) > 1e-15 * largest) {
                weights_.push_back(c);
                energies_.push_back(solver.eigenvalues()(k));
            }
        }
    }

    double operator()(double t) const {
        std::complex<double> a = 0.0;
        for (std::size_t k = 0; k < weights_.size(); ++k) a += weights_[k] * std::polar(1.0, -energies_[k] * t);
        return std::norm(a);
    }

    double bandwidth() const {
        if (energies_.empty()) return 0.0;
        const auto [lo, hi] = std::minmax_element(energies_.begin(), energies_.end());
        return *hi - *lo;
    }

    // Maximum over [0, horizon]: dense sampling (about ten samples per fastest period) then
    // golden-section polishing around the best sample.
    std::pair<double, double> peak(double horizon) const {
        const double periods = bandwidth() * horizon / (2.0 * std::numbers::pi);
        const long samples = std::max<long>(2000, static_cast<long>(std::ceil(10.0 * periods)));
        const double dt = horizon / samples;

        std::vector<std::complex<double>> phase(weights_.size(), 1.0);
        std::vector<std::complex<double>> step(weights_.size());
        for (std::size_t k = 0; k < weights_.size(); ++k) step[k] = std::polar(1.0, -energies_[k] * dt);

        double best = -1.0;
        long best_i = 0;
        for (long i = 0; i <= samples; ++i) {
            if (i % 256 == 0) {
                // Re-anchor the running phases to keep rounding from accumulating.
                for (std::size_t k = 0; k < weights_.size(); ++k) phase[k] = std::polar(1.0, -energies_[k] * (i * dt));
            }
            std::complex<double> a = 0.0;
            for (std::size_t k = 0; k < weights_.size(); ++k) {
                a += weights_[k] * phase[k];
                phase[k] *= step[k];
            }
            const double f = std::norm(a);
            if (f > best) {
                best = f;
                best_i = i;
            }
        }

        double lo = std::max(0.0, (best_i - 1) * dt);
        double hi = std::min(horizon, (best_i + 1) * dt);
        double best_t = best_i * dt;
        best = (*this)(best_t);
        double x1 = hi - kGolden * (hi - lo);
        double x2 = lo + kGolden * (hi - lo);
        double f1 = (*this)(x1);
        double f2 = (*this)(x2);
        while (hi - lo > 1e-13 * std::max(1.0, horizon)) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - kGolden * (hi - lo);
                f1 = (*this)(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + kGolden * (hi - lo);
                f2 = (*this)(x2);
            }
            if (f1 > best) {
                best = f1;
                best_t = x1;
            }
            if (f2 > best) {
                best = f2;
                best_t = x2;
            }
        }
        return {best, best_t};
    }

private:
    std::vector<double> weights_;
    std::vector<double> energies_;
};

double default_horizon(int n_pairs, double g) {
    const double pi = std::numbers::pi;
    return std::max(4.0 * pi / (std::sqrt(2.0 * n_pairs) * g), 1.25 * pi / g);
}

OptimizationResult optimize_once(const LadderMatrix& unit, int n_pairs, double chi, double horizon,
                                 const OptimizerOptions& options) {
    const double g = 0.5 * chi;
    auto objective = [&](double delta) { return TargetSignal(unit, g, delta).peak(horizon); };

    OptimizationResult r;
    r.n_ions = 2 * n_pairs;
    r.chi = chi;
    r.horizon = horizon;

    const int points = options.coarse_points;
    const double upper = options.bracket * g;
    std::vector<std::pair<double, double>> coarse(static_cast<std::size_t>(points));
    std::vector<double> coarse_time(static_cast<std::size_t>(points));
    detail::parallel_for(coarse.size(), [&](std::size_t i) {
        const double delta = upper * static_cast<double>(i) / (points - 1);
        const auto [f, t] = objective(delta);
        coarse[i] = {delta, f};
        coarse_time[i] = t;
    });
    r.scan_trace = coarse;
    r.fidelity_at_zero = coarse.front().second;

    std::size_t best = 0;
    for (std::size_t i = 1; i < coarse.size(); ++i) {
        if (coarse[i].second > coarse[best].second) best = i;
    }
    r.delta_opt = coarse[best].first;
    r.best_fidelity = coarse[best].second;
    r.time_of_peak = coarse_time[best];

    double lo = coarse[best == 0 ? 0 : best - 1].first;
    double hi = coarse[std::min(best + 1, coarse.size() - 1)].first;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    auto p1 = objective(x1);
    auto p2 = objective(x2);
    auto consider = [&](double x, const std::pair<double, double>& p) {
        if (p.first > r.best_fidelity) {
            r.best_fidelity = p.first;
            r.delta_opt = x;
            r.time_of_peak = p.second;
        }
    };
    while (hi - lo > options.delta_tolerance * g) {
        if (p1.first >= p2.first) {
            hi = x2;
            x2 = x1;
            p2 = p1;
            x1 = hi - kGolden * (hi - lo);
            p1 = objective(x1);
            consider(x1, p1);
        } else {
            lo = x1;
            x1 = x2;
            p1 = p2;
            x2 = lo + kGolden * (hi - lo);
            p2 = objective(x2);
            consider(x2, p2);
        }
        r.refinement_history.push_back(r.best_fidelity);
    }
    const double edge_tol = 1e-6 * upper;
    r.at_bracket_edge = r.delta_opt < edge_tol || r.delta_opt > upper - edge_tol;
    return r;
}

} // namespace

std::pair<double, double> square_pulse_peak(int n_pairs, double chi, double delta, double horizon) {
    if (n_pairs < 1) throw DomainError("square_pulse_peak: n_pairs must be >= 1");
    if (!(chi >= 0.0)) throw DomainError("square_pulse_peak: chi must be >= 0");
    if (!(horizon > 0.0)) throw DomainError("square_pulse_peak: horizon must be > 0");
    return TargetSignal(unit_ladder(n_pairs), 0.5 * chi, delta).peak(horizon);
}

OptimizationResult optimize_detuning(int n_pairs, double chi, const OptimizerOptions& options) {
    if (n_pairs < 1) throw DomainError("optimize_detuning: n_pairs must be >= 1");
    if (!(chi > 0.0)) throw DomainError("optimize_detuning: chi must be > 0");
    if (options.coarse_points < 3) throw DomainError("optimize_detuning: need at least 3 coarse points");
    if (options.horizon && !(*options.horizon > 0.0)) throw DomainError("optimize_detuning: horizon must be > 0");

    const LadderMatrix unit = unit_ladder(n_pairs);
    double horizon = options.horizon.value_or(default_horizon(n_pairs, 0.5 * chi));
    OptimizationResult r = optimize_once(unit, n_pairs, chi, horizon, options);
    for (int ext = 0; r.time_of_peak > options.boundary_fraction * horizon; ++ext) {
        if (ext == options.max_extensions) {
            r.horizon_limited = true;
            break;
        }
        horizon *= options.extension_factor;
        r = optimize_once(unit, n_pairs, chi, horizon, options);
    }
    return r;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw DomainError("fit_power_law: need at least two points");
    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : points) {
        if (!(x > 0.0) || !(y > 0.0)) throw DomainError("fit_power_law: coordinates must be positive");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) throw DomainError("fit_power_law: x values must not all coincide");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.coefficient = std::exp(intercept);
    double rss = 0.0;
    for (const auto& [x, y] : points) {
        const double res = std::log(y) - (intercept + fit.exponent * std::log(x));
        rss += res * res;
    }
    fit.rms_log_residual = std::sqrt(rss / n);
    fit.points = static_cast<int>(points.size());
    return fit;
}

ScalingResult scaling_study(const std::vector<int>& ion_counts, double chi, const OptimizerOptions& options) {
    if (ion_counts.empty()) throw DomainError("scaling_study: no ion counts");
    if (!(chi > 0.0)) throw DomainError("scaling_study: chi must be > 0");

    ScalingResult out;
    out.entries.resize(ion_counts.size());
    detail::parallel_for(ion_counts.size(), [&](std::size_t i) {
        ScalingEntry& e = out.entries[i];
        e.n_ions = ion_counts[i];
        try {
            if (e.n_ions < 2 || e.n_ions % 2 != 0) {
                throw DomainError("ion count must be even and >= 2, got " + std::to_string(e.n_ions));
            }
            e.result = optimize_detuning(e.n_ions / 2, chi, options);
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    });

    std::vector<std::pair<double, double>> fid, det;
    for (const auto& e : out.entries) {
        if (!e.result) {
            out.complete = false;
            continue;
        }
        fid.emplace_back(e.n_ions, e.result->best_fidelity);
        det.emplace_back(e.n_ions, e.result->delta_opt);
    }
    if (fid.size() >= 2) {
        out.fidelity_fit = fit_power_law(fid);
        if (std::all_of(det.begin(), det.end(), [](const auto& p) { return p.second > 0.0; })) {
            out.delta_fit = fit_power_law(det);
        } else {
            out.complete = false;
        }
    } else {
        out.complete = false;
    }
    return out;
}

} // namespace dicke
