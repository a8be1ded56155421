#pragma once

// Reduced Hamiltonian on the dressed m = 0 ladder |N_a, 0>, N_a = 2N, 2N-2, ..., 0.
//
// Units: angular frequencies in rad/ms (hbar = 1). Row/column p of a LadderMatrix is
// |N_a = 2N - 2p, 0>, so p = 0 is the all-ancilla initial state and p = N the
// half-excited Dicke state |D_2N^N>.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dicke {

/// Couplings of the effective model.
struct EffectiveParams {
    int n_pairs = 1;       ///< N; the register holds 2N ions
    double g = 0.0;        ///< coefficient of J_x^2, g = chi / 2 with chi = (eta Omega2)^2 / (2 delta)
    double delta = 0.0;    ///< ladder detuning, energy per transferred ion pair
    std::optional<double> omega1;  ///< dressing Rabi frequency; only the oracle uses it

    int n_ions() const { return 2 * n_pairs; }
    double chi() const { return 2.0 * g; }

    /// Throws DomainError on n_pairs < 1 or g < 0.
    void validate() const;

    /// Non-empty when omega1 is set and the dressing is not at least ten times chi.
    std::optional<std::string> regime_warning() const;
};

/// Laboratory-side drive description. Only used to derive EffectiveParams.
struct PhysicalDrive {
    double sideband_rabi = 0.0;  ///< eta * Omega2
    double delta_red = 0.0;      ///< detuning from the red sideband
    double delta_blue = 0.0;     ///< detuning from the blue sideband
    std::optional<double> omega1;

    /// g = (eta Omega2)^2 / (4 delta) with delta the mean sideband detuning,
    /// ladder detuning |delta_r| - |delta_b|.
    EffectiveParams to_effective(int n_pairs) const;
};

struct LadderMatrix {
    int n_pairs = 0;
    Eigen::MatrixXd elements;

    int dim() const { return n_pairs + 1; }
};

/// H_D assembled by expanding each |N_a, 0> over symmetric occupation states and applying the
/// collective a <-> down flip twice with Schwinger matrix elements. Authoritative construction.
LadderMatrix build_via_projection(const EffectiveParams& params);

/// H_D from closed-form sums of p^2 V (diagonal) and p p' V (first off-diagonal).
///
/// The index placement follows a direct derivation: for a component with n_down down-spins
/// and n_up up-spins the a/down subsystem holds n = 2N - n_up ions with projection
/// k = (N_a - n_down) / 2, so
///   H(p, p)   = g * sum_m p(S, m)^2 V^(2N-S-m)_{k,k}
///   H(p+1, p) = g * sum_m p(S, m) p(S+1, m-1) V^(2N-S-m)_{k-2,k},   S = p, k = (N_a - S + m) / 2.
/// The variant with V^(2N-2j)_{S-2j,S-2j} does not reproduce the projection path
/// (see literal_index_diagonal).
LadderMatrix build_via_closed_form(const EffectiveParams& params);

/// g * unit + diag(delta * p), where unit was built with g = 1 and delta = 0.
Eigen::MatrixXd with_couplings(const LadderMatrix& unit, double g, double delta);

/// Diagonal element divided by g as evaluated from the sum
///   sum_{j=0}^{S} p(S, S-2j)^2 V^(2N-2j)_{S-2j,S-2j}
/// with the indices taken literally. For two ions and p = 0 this gives 4 where the projection gives 2.
double literal_index_diagonal(int n_pairs, int pair_index);

/// <J = n/2, l | J_x J_x | J = n/2, k> with J_x the Pauli sum (4x the spin-1/2 convention).
/// n must be even and non-negative, |l|, |k| <= n/2.
double v_element(int n, int l, int k);

/// Sweep energy of pair index p: delta * p. Throws DomainError unless 0 <= p <= n_pairs.
double detuning_diagonal(int pair_index, double delta, int n_pairs);

/// Spectra over a detuning grid with curves followed through avoided crossings.
struct SpectrumResult {
    EffectiveParams params;            ///< delta field unused; each grid point overrides it
    std::vector<double> delta_grid;
    Eigen::MatrixXd sorted;            ///< grid x (N+1), ascending eigenvalues
    Eigen::MatrixXd tracked;           ///< grid x (N+1), column c follows one adiabatic curve
    std::vector<std::vector<int>> rank_of_curve;  ///< [i][c] = sorted rank of curve c at point i
    Eigen::MatrixXd gaps;              ///< grid x (N+1), nearest-neighbour separation per tracked curve

    int curves() const { return static_cast<int>(tracked.cols()); }
};

/// Full eigendecomposition at every grid point, matched point-to-point by eigenvector overlap.
/// The grid must be strictly monotone.
SpectrumResult spectrum_scan(const EffectiveParams& params, const std::vector<double>& delta_grid);

enum class GapSide { highest, lowest };

struct GapResult {
    double delta_at_min = 0.0;
    double gap = 0.0;
    bool at_grid_edge = false;  ///< minimum sits on the first or last grid point
};

/// Smallest separation between the extreme curve (the curve that is highest, resp. lowest, at the
/// first grid point) and its neighbour, refined by subdivision around the best grid point until
/// the estimate moves by less than 0.1%.
GapResult min_gap(const SpectrumResult& spectrum, GapSide side);

/// Evenly spaced grid helper.
std::vector<double> linear_grid(double lo, double hi, int points);

} // namespace dicke
