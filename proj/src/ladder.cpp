#include "dicke/ladder.hpp"

#include "dicke/detail/parallel.hpp"
#include "dicke/errors.hpp"
#include "dicke/spin_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>

namespace dicke {

namespace {

// Symmetric occupation state (n_a, n_down, n_up) -> amplitude.
using Occupation = std::array<int, 3>;
using OccupationVector = std::map<Occupation, double>;

OccupationVector ladder_vector(int n_pairs, int pair_index, const std::vector<double>& coeffs) {
    const int s = pair_index;
    OccupationVector v;
    for (int m = -s; m <= s; ++m) {
        const double c = coeffs[static_cast<std::size_t>(m + s)];
        if (c != 0.0) v[{2 * n_pairs - 2 * s, s - m, s + m}] = c;
    }
    return v;
}

// Collective a <-> down flip, Pauli convention, on normalized symmetric states.
OccupationVector apply_jx(const OccupationVector& in) {
    OccupationVector out;
    for (const auto& [occ, c] : in) {
        const auto [na, nd, nu] = occ;
        if (nd > 0) out[{na + 1, nd - 1, nu}] += c * std::sqrt(double(na + 1) * nd);
        if (na > 0) out[{na - 1, nd + 1, nu}] += c * std::sqrt(double(na) * (nd + 1));
    }
    return out;
}

double overlap(const OccupationVector& bra, const OccupationVector& ket) {
    double sum = 0.0;
    for (const auto& [occ, c] : bra) {
        if (auto it = ket.find(occ); it != ket.end()) sum += c * it->second;
    }
    return sum;
}

void add_detuning(LadderMatrix& h, double delta) {
    for (int p = 0; p < h.dim(); ++p) h.elements(p, p) += detuning_diagonal(p, delta, h.n_pairs);
}

void warn_regime(const EffectiveParams& params) {
    if (auto warning = params.regime_warning()) std::clog << "warning: " << *warning << '\n';
}

double gap_at_rank(const Eigen::VectorXd& sorted, int rank) {
    const int dim = static_cast<int>(sorted.size());
    double gap = std::numeric_limits<double>::infinity();
    if (rank > 0) gap = std::min(gap, sorted(rank) - sorted(rank - 1));
    if (rank + 1 < dim) gap = std::min(gap, sorted(rank + 1) - sorted(rank));
    return gap;
}

} // namespace

void EffectiveParams::validate() const {
    if (n_pairs < 1) throw DomainError("n_pairs must be >= 1, got " + std::to_string(n_pairs));
    if (!(g >= 0.0)) throw DomainError("Ising coefficient g must be >= 0");
    if (!std::isfinite(delta)) throw DomainError("detuning must be finite");
    if (omega1 && !(*omega1 >= 0.0)) throw DomainError("omega1 must be >= 0");
}

std::optional<std::string> EffectiveParams::regime_warning() const {
    if (omega1 && *omega1 < 10.0 * chi()) {
        return "dressing Rabi frequency " + std::to_string(*omega1) + " is below 10 * chi = " +
               std::to_string(10.0 * chi()) + "; the ladder reduction is not reliable";
    }
    return std::nullopt;
}

EffectiveParams PhysicalDrive::to_effective(int n_pairs) const {
    const double mean_detuning = 0.5 * (std::abs(delta_red) + std::abs(delta_blue));
    if (!(mean_detuning > 0.0)) throw DomainError("sideband detuning must be non-zero");
    EffectiveParams p;
    p.n_pairs = n_pairs;
    p.g = sideband_rabi * sideband_rabi / (4.0 * mean_detuning);
    p.delta = std::abs(delta_red) - std::abs(delta_blue);
    p.omega1 = omega1;
    return p;
}

double v_element(int n, int l, int k) {
    if (n < 0 || n % 2 != 0) throw DomainError("v_element: n must be even and non-negative");
    const int j = n / 2;
    if (std::abs(l) > j || std::abs(k) > j) throw DomainError("v_element: projection exceeds n/2");
    const double jj = double(j) * (j + 1);
    if (l == k) return 2.0 * (jj - double(k) * k);
    if (l == k + 2) return std::sqrt((jj - double(k) * (k + 1)) * (jj - double(k + 1) * (k + 2)));
    if (l == k - 2) return std::sqrt((jj - double(k) * (k - 1)) * (jj - double(k - 1) * (k - 2)));
    return 0.0;
}

double detuning_diagonal(int pair_index, double delta, int n_pairs) {
    if (pair_index < 0 || pair_index > n_pairs) {
        throw DomainError("detuning_diagonal: pair index " + std::to_string(pair_index) +
                          " outside 0.." + std::to_string(n_pairs));
    }
    return delta * pair_index;
}

LadderMatrix build_via_projection(const EffectiveParams& params) {
    params.validate();
    warn_regime(params);
    const int n = params.n_pairs;
    LadderMatrix h{n, Eigen::MatrixXd::Zero(n + 1, n + 1)};

    std::vector<OccupationVector> states;
    states.reserve(static_cast<std::size_t>(n) + 1);
    for (int p = 0; p <= n; ++p) states.push_back(ladder_vector(n, p, p_coefficients(p)));

    for (int p = 0; p <= n; ++p) {
        const OccupationVector image = apply_jx(apply_jx(states[p]));
        h.elements(p, p) = params.g * overlap(states[p], image);
        if (p < n) {
            const double off = params.g * overlap(states[p + 1], image);
            h.elements(p + 1, p) = off;
            h.elements(p, p + 1) = off;
        }
    }
    add_detuning(h, params.delta);
    return h;
}

LadderMatrix build_via_closed_form(const EffectiveParams& params) {
    params.validate();
    warn_regime(params);
    const int n = params.n_pairs;
    LadderMatrix h{n, Eigen::MatrixXd::Zero(n + 1, n + 1)};

    std::vector<double> here = p_coefficients(0);
    for (int s = 0; s <= n; ++s) {
        const std::vector<double> next = s < n ? p_coefficients(s + 1) : std::vector<double>{};
        const int n_a = 2 * n - 2 * s;
        double diag = 0.0;
        double off = 0.0;
        // Only m with S - m even carry weight.
        for (int m = -s; m <= s; m += 1) {
            if ((s - m) % 2 != 0) continue;
            const double c = here[static_cast<std::size_t>(m + s)];
            const int sub = 2 * n - s - m;
            const int k = (n_a - s + m) / 2;
            diag += c * c * v_element(sub, k, k);
            if (s < n && std::abs(m - 1) <= s + 1 && k - 2 >= -sub / 2) {
                off += c * next[static_cast<std::size_t>(m - 1 + s + 1)] * v_element(sub, k - 2, k);
            }
        }
        h.elements(s, s) = params.g * diag;
        if (s < n) {
            h.elements(s + 1, s) = params.g * off;
            h.elements(s, s + 1) = params.g * off;
        }
        here = next;
    }
    add_detuning(h, params.delta);
    return h;
}

Eigen::MatrixXd with_couplings(const LadderMatrix& unit, double g, double delta) {
    Eigen::MatrixXd h = g * unit.elements;
    for (int p = 0; p < unit.dim(); ++p) h(p, p) += detuning_diagonal(p, delta, unit.n_pairs);
    return h;
}

double literal_index_diagonal(int n_pairs, int pair_index) {
    if (pair_index < 0 || pair_index > n_pairs) throw DomainError("pair index out of range");
    const int s = pair_index;
    double sum = 0.0;
    for (int j = 0; j <= s; ++j) {
        const double c = p_coeff(s, s - 2 * j);
        sum += c * c * v_element(2 * n_pairs - 2 * j, s - 2 * j, s - 2 * j);
    }
    return sum;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
    if (points < 2) throw DomainError("linear_grid: need at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
    return grid;
}

SpectrumResult spectrum_scan(const EffectiveParams& params, const std::vector<double>& delta_grid) {
    params.validate();
    if (delta_grid.empty()) throw DomainError("spectrum_scan: empty grid");
    const bool up = delta_grid.size() < 2 || delta_grid[1] > delta_grid[0];
    for (std::size_t i = 1; i < delta_grid.size(); ++i) {
        if (up ? !(delta_grid[i] > delta_grid[i - 1]) : !(delta_grid[i] < delta_grid[i - 1])) {
            throw DomainError("spectrum_scan: grid must be strictly monotone (index " + std::to_string(i) + ")");
        }
    }

    EffectiveParams unit_params = params;
    unit_params.g = 1.0;
    unit_params.delta = 0.0;
    unit_params.omega1.reset();
    const LadderMatrix unit = build_via_projection(unit_params);
    const int dim = unit.dim();
    const std::size_t points = delta_grid.size();

    std::vector<Eigen::VectorXd> values(points);
    std::vector<Eigen::MatrixXd> vectors(points);
    detail::parallel_for(points, [&](std::size_t i) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(with_couplings(unit, params.g, delta_grid[i]));
        if (solver.info() != Eigen::Success) {
            throw NumericalError("spectrum_scan: eigensolver did not converge at grid point " + std::to_string(i),
                                 static_cast<std::ptrdiff_t>(i));
        }
        values[i] = solver.eigenvalues();
        vectors[i] = solver.eigenvectors();
    });

    SpectrumResult out;
    out.params = params;
    out.delta_grid = delta_grid;
    out.sorted.resize(static_cast<Eigen::Index>(points), dim);
    out.tracked.resize(static_cast<Eigen::Index>(points), dim);
    out.gaps.resize(static_cast<Eigen::Index>(points), dim);
    out.rank_of_curve.assign(points, std::vector<int>(static_cast<std::size_t>(dim)));

    std::vector<int> rank(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c) rank[c] = c;
    for (std::size_t i = 0; i < points; ++i) {
        if (i > 0) {
            // Greedy maximal-overlap matching; near-ties go to the closest eigenvalue.
            const Eigen::MatrixXd ov = (vectors[i - 1].transpose() * vectors[i]).cwiseAbs();
            std::vector<int> next(static_cast<std::size_t>(dim), -1);
            std::vector<bool> taken(static_cast<std::size_t>(dim), false);
            for (int step = 0; step < dim; ++step) {
                double best = -1.0;
                for (int c = 0; c < dim; ++c) {
                    if (next[c] >= 0) continue;
                    for (int j = 0; j < dim; ++j) {
                        if (!taken[j]) best = std::max(best, ov(rank[c], j));
                    }
                }
                int pick_c = -1;
                int pick_j = -1;
                double pick_dist = std::numeric_limits<double>::infinity();
                for (int c = 0; c < dim; ++c) {
                    if (next[c] >= 0) continue;
                    for (int j = 0; j < dim; ++j) {
                        if (taken[j] || ov(rank[c], j) < best - 1e-9) continue;
                        const double dist = std::abs(values[i - 1](rank[c]) - values[i](j));
                        if (dist < pick_dist) {
                            pick_dist = dist;
                            pick_c = c;
                            pick_j = j;
                        }
                    }
                }
                next[pick_c] = pick_j;
                taken[pick_j] = true;
            }
            rank = next;
        }
        const auto row = static_cast<Eigen::Index>(i);
        out.sorted.row(row) = values[i].transpose();
        for (int c = 0; c < dim; ++c) {
            out.rank_of_curve[i][c] = rank[c];
            out.tracked(row, c) = values[i](rank[c]);
            out.gaps(row, c) = gap_at_rank(values[i], rank[c]);
        }
    }
    return out;
}

GapResult min_gap(const SpectrumResult& spectrum, GapSide side) {
    const int dim = spectrum.curves();
    if (dim < 2) throw DomainError("min_gap: need at least two curves");
    const int start_rank = side == GapSide::highest ? dim - 1 : 0;
    int curve = 0;
    for (int c = 0; c < dim; ++c) {
        if (spectrum.rank_of_curve.front()[c] == start_rank) curve = c;
    }

    const auto& grid = spectrum.delta_grid;
    const int points = static_cast<int>(grid.size());
    Eigen::Index best_row = 0;
    spectrum.gaps.col(curve).minCoeff(&best_row);
    const int best = static_cast<int>(best_row);

    GapResult result;
    result.delta_at_min = grid[best];
    result.gap = spectrum.gaps(best, curve);
    result.at_grid_edge = best == 0 || best == points - 1;
    if (points < 2) return result;

    EffectiveParams unit_params = spectrum.params;
    unit_params.g = 1.0;
    unit_params.delta = 0.0;
    unit_params.omega1.reset();
    const LadderMatrix unit = build_via_projection(unit_params);
    const int rank = spectrum.rank_of_curve[best][curve];
    auto gap_at = [&](double delta) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(with_couplings(unit, spectrum.params.g, delta),
                                                              Eigen::EigenvaluesOnly);
        return gap_at_rank(solver.eigenvalues(), rank);
    };

    const double grid_lo = std::min(grid.front(), grid.back());
    const double grid_hi = std::max(grid.front(), grid.back());
    double lo = grid[std::max(best - 1, 0)];
    double hi = grid[std::min(best + 1, points - 1)];
    if (lo > hi) std::swap(lo, hi);
    constexpr int kSubdivisions = 8;
    for (int round = 0; round < 60; ++round) {
        double round_best = result.gap;
        double round_delta = result.delta_at_min;
        for (int s = 0; s <= kSubdivisions; ++s) {
            const double d = lo + (hi - lo) * s / kSubdivisions;
            const double gap = gap_at(d);
            if (gap < round_best) {
                round_best = gap;
                round_delta = d;
            }
        }
        const double change = std::abs(result.gap - round_best);
        result.gap = round_best;
        result.delta_at_min = round_delta;
        const double step = (hi - lo) / kSubdivisions;
        lo = std::max(round_delta - step, grid_lo);
        hi = std::min(round_delta + step, grid_hi);
        if (change < 1e-3 * round_best && round > 0) break;
    }
    return result;
}

} // namespace dicke
