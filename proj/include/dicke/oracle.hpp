#pragma once

// Ground truth for the ladder reduction: the full effective Hamiltonian
//   H_I = (Omega1 / 2) S_x + g J_x^2
// on the permutation-symmetric sector of 2N three-level ions (levels a, down, up), and for
// tiny registers on the complete tensor-product space.

#include "dicke/dynamics.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <string>
#include <vector>

namespace dicke {

/// Largest register the symmetric-sector builders accept.
inline constexpr int kMaxSymmetricIons = 400;

/// Occupation-number basis (n_a, n_down, n_up) of the symmetric sector, in lexicographic order.
class SymmetricRegister {
public:
    using Occupation = std::array<int, 3>;

    explicit SymmetricRegister(int n_ions);

    int n_ions() const { return n_ions_; }
    int dimension() const { return static_cast<int>(basis_.size()); }
    const std::vector<Occupation>& basis() const { return basis_; }

    /// Position of an occupation triple; throws DomainError if it does not sum to n_ions.
    int index(const Occupation& occ) const;

private:
    int n_ions_;
    std::vector<Occupation> basis_;
};

struct SymmetricOperator {
    std::string label;
    Eigen::SparseMatrix<double> matrix;
};

/// Collective a <-> down flip, sum_i sigma_x on {a, down}; changes (n_a, n_down) by (-+1, +-1).
SymmetricOperator collective_jx(const SymmetricRegister& reg);

/// Collective down <-> up flip, sum_i sigma_x on {down, up}; changes (n_down, n_up) by (-+1, +-1).
SymmetricOperator collective_sx(const SymmetricRegister& reg);

/// (Omega1 / 2) S_x + g J_x^2 + delta * (2N - n_a) / 2, the last term extending the ladder
/// detuning to every occupation state.
SymmetricOperator build_symmetric_hamiltonian(int n_pairs, double omega1, double g, double delta = 0.0);

/// Builds H_I on the 3^(2N) tensor-product space from single-site operators, projects it onto
/// normalized symmetric occupation states and returns the largest element-wise deviation from
/// build_symmetric_hamiltonian. Requires 2N <= 6.
double full_tensor_check(int n_pairs, double omega1, double g);

/// Columns are the ladder states |N_a = 2N - 2p, 0> written in the occupation basis.
Eigen::MatrixXd ladder_vectors(const SymmetricRegister& reg);

struct LadderEquivalence {
    double deviation = 0.0;       ///< max |<p'| g J_x^2 |p> - build_via_projection|
    double gram_deviation = 0.0;  ///< max |<p'|p> - delta_{p'p}|
    double s_x_residual = 0.0;    ///< max |S_x |p>|, zero for m_x = 0 states
};

/// Projects g J_x^2 onto the ladder states inside the symmetric register and compares with the
/// Delta = 0 ladder matrix. Requires 2N <= 24.
LadderEquivalence ladder_equivalence_check(int n_pairs, double g);

struct LeakageResult {
    std::vector<double> ratios;   ///< chi / Omega1
    std::vector<double> leakage;  ///< final population outside the ladder span
    double slope = 0.0;           ///< log-log slope of leakage against ratio
};

/// Evolves |2N, 0> under the full symmetric H_I for each chi / Omega1 ratio (chi is the schedule's
/// peak Ising strength) and measures the final population outside Span{|N_a, 0>}. Requires
/// 2N <= 12.
LeakageResult leakage_study(int n_pairs, const std::vector<double>& ratios, const PulseSchedule& schedule,
                            int steps = 1);

/// Largest difference of the |0, 0> population between ladder propagation and full symmetric
/// propagation at finite Omega1, over `samples` evenly spaced times.
double ladder_vs_full_deviation(int n_pairs, double omega1, const PulseSchedule& schedule, int samples = 400,
                                int steps = 1);

struct ValidationCheck {
    std::string name;
    double deviation = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

struct ValidationReport {
    int max_ions = 0;
    std::vector<ValidationCheck> checks;

    bool passed() const;
};

/// Oracle suite: full tensor vs symmetric sector, ladder block vs projection, closed form vs
/// projection, the two-ion spectrum, p-coefficients vs the Wigner oracle and the leakage exponent.
ValidationReport run_validation(int max_ions);

} // namespace dicke
