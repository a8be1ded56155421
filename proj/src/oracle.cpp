#include "dicke/oracle.hpp"

#include "dicke/errors.hpp"
#include "dicke/ladder.hpp"
#include "dicke/optimizer.hpp"
#include "dicke/spin_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace dicke {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void require_pairs(int n_pairs, int max_ions, const char* what) {
    if (n_pairs < 1) throw DomainError(std::string(what) + ": n_pairs must be >= 1");
    if (2 * n_pairs > max_ions) {
        throw DomainError(std::string(what) + ": 2N = " + std::to_string(2 * n_pairs) + " exceeds the limit of " +
                          std::to_string(max_ions) + " ions");
    }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// exp(-i H(t_mid) h) stepping on a dense Hermitian (real symmetric) generator; returns the state
// at samples + 1 evenly spaced times.
std::vector<Eigen::VectorXcd> piecewise_propagate(const std::function<Eigen::MatrixXd(double)>& hamiltonian,
                                                  const Eigen::VectorXcd& psi0, double duration, int steps,
                                                  int samples) {
    const double h = duration / steps;
    std::vector<Eigen::VectorXcd> out(static_cast<std::size_t>(samples) + 1);
    std::vector<int> owner(out.size());
    for (int j = 0; j <= samples; ++j) {
        owner[j] = std::min(static_cast<int>(std::floor(duration * j / samples / h)), steps - 1);
    }
    Eigen::VectorXcd psi = psi0;
    int next = 0;
    for (int k = 0; k < steps; ++k) {
        const double t0 = k * h;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian(t0 + 0.5 * h));
        if (solver.info() != Eigen::Success) throw NumericalError("oracle propagation: eigensolver failed", k);
        const Eigen::MatrixXcd v = solver.eigenvectors().cast<std::complex<double>>();
        const Eigen::VectorXcd c = v.adjoint() * psi;
        auto evolve = [&](double tau) {
            Eigen::VectorXcd phased = c;
            for (Eigen::Index i = 0; i < c.size(); ++i) phased(i) *= std::polar(1.0, -solver.eigenvalues()(i) * tau);
            return Eigen::VectorXcd(v * phased);
        };
        while (next <= samples && owner[next] == k) {
            out[next] = evolve(duration * next / samples - t0);
            ++next;
        }
        psi = evolve(h);
    }
    return out;
}

struct FullModel {
    SymmetricRegister reg;
    Eigen::MatrixXd sx;
    Eigen::MatrixXd jx2;
    Eigen::VectorXd pair_count;  // (2N - n_a) / 2 per basis state

    explicit FullModel(int n_pairs) : reg(2 * n_pairs) {
        sx = Eigen::MatrixXd(collective_sx(reg).matrix);
        const Eigen::SparseMatrix<double> jx = collective_jx(reg).matrix;
        jx2 = Eigen::MatrixXd(jx * jx);
        pair_count.resize(reg.dimension());
        for (int i = 0; i < reg.dimension(); ++i) pair_count(i) = 0.5 * (reg.n_ions() - reg.basis()[i][0]);
    }

    Eigen::MatrixXd at(double omega1, double chi, double delta) const {
        Eigen::MatrixXd h = 0.5 * omega1 * sx + 0.5 * chi * jx2;
        h.diagonal() += delta * pair_count;
        return h;
    }

    Eigen::VectorXcd initial() const {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(reg.dimension());
        psi(reg.index({reg.n_ions(), 0, 0})) = 1.0;
        return psi;
    }
};

double peak_chi(const PulseSchedule& s) { return s.kind == PulseKind::square ? s.chi : s.chi_peak; }

} // namespace

SymmetricRegister::SymmetricRegister(int n_ions) : n_ions_(n_ions) {
    if (n_ions < 1) throw DomainError("SymmetricRegister: need at least one ion");
    if (n_ions > kMaxSymmetricIons) {
        throw DomainError("SymmetricRegister: " + std::to_string(n_ions) + " ions exceeds the limit of " +
                          std::to_string(kMaxSymmetricIons));
    }
    basis_.reserve(static_cast<std::size_t>((n_ions + 2) * (n_ions + 1) / 2));
    for (int na = 0; na <= n_ions; ++na) {
        for (int nd = 0; nd <= n_ions - na; ++nd) basis_.push_back({na, nd, n_ions - na - nd});
    }
}

int SymmetricRegister::index(const Occupation& occ) const {
    const auto [na, nd, nu] = occ;
    if (na < 0 || nd < 0 || nu < 0 || na + nd + nu != n_ions_) {
        throw DomainError("SymmetricRegister: occupation does not sum to " + std::to_string(n_ions_));
    }
    // Block for n_a = k holds n_ions - k + 1 entries.
    const int before = na * (n_ions_ + 1) - na * (na - 1) / 2;
    return before + nd;
}

SymmetricOperator collective_jx(const SymmetricRegister& reg) {
    Triplets t;
    for (int i = 0; i < reg.dimension(); ++i) {
        const auto [na, nd, nu] = reg.basis()[i];
        if (nd > 0) t.emplace_back(reg.index({na + 1, nd - 1, nu}), i, std::sqrt(double(na + 1) * nd));
        if (na > 0) t.emplace_back(reg.index({na - 1, nd + 1, nu}), i, std::sqrt(double(na) * (nd + 1)));
    }
    SymmetricOperator op{"J_x", Eigen::SparseMatrix<double>(reg.dimension(), reg.dimension())};
    op.matrix.setFromTriplets(t.begin(), t.end());
    return op;
}

SymmetricOperator collective_sx(const SymmetricRegister& reg) {
    Triplets t;
    for (int i = 0; i < reg.dimension(); ++i) {
        const auto [na, nd, nu] = reg.basis()[i];
        if (nu > 0) t.emplace_back(reg.index({na, nd + 1, nu - 1}), i, std::sqrt(double(nd + 1) * nu));
        if (nd > 0) t.emplace_back(reg.index({na, nd - 1, nu + 1}), i, std::sqrt(double(nd) * (nu + 1)));
    }
    SymmetricOperator op{"S_x", Eigen::SparseMatrix<double>(reg.dimension(), reg.dimension())};
    op.matrix.setFromTriplets(t.begin(), t.end());
    return op;
}

SymmetricOperator build_symmetric_hamiltonian(int n_pairs, double omega1, double g, double delta) {
    require_pairs(n_pairs, kMaxSymmetricIons, "build_symmetric_hamiltonian");
    const SymmetricRegister reg(2 * n_pairs);
    const Eigen::SparseMatrix<double> jx = collective_jx(reg).matrix;
    Eigen::SparseMatrix<double> h = 0.5 * omega1 * collective_sx(reg).matrix + g * (jx * jx);
    if (delta != 0.0) {
        Eigen::SparseMatrix<double> diag(reg.dimension(), reg.dimension());
        Triplets t;
        for (int i = 0; i < reg.dimension(); ++i) t.emplace_back(i, i, 0.5 * delta * (2 * n_pairs - reg.basis()[i][0]));
        diag.setFromTriplets(t.begin(), t.end());
        h += diag;
    }
    h.prune(0.0);
    return {"H_I", h};
}

double full_tensor_check(int n_pairs, double omega1, double g) {
    require_pairs(n_pairs, 6, "full_tensor_check");
    const int n = 2 * n_pairs;
    int dim = 1;
    for (int i = 0; i < n; ++i) dim *= 3;

    // Site levels: 0 = a, 1 = down, 2 = up.
    auto digit = [](int s, int site) {
        for (int i = 0; i < site; ++i) s /= 3;
        return s % 3;
    };
    int stride = 1;
    Triplets tj, ts;
    for (int site = 0; site < n; ++site, stride *= 3) {
        for (int s = 0; s < dim; ++s) {
            switch (digit(s, site)) {
            case 0: tj.emplace_back(s + stride, s, 1.0); break;
            case 1:
                tj.emplace_back(s - stride, s, 1.0);
                ts.emplace_back(s + stride, s, 1.0);
                break;
            case 2: ts.emplace_back(s - stride, s, 1.0); break;
            }
        }
    }
    Eigen::SparseMatrix<double> jx(dim, dim), sx(dim, dim);
    jx.setFromTriplets(tj.begin(), tj.end());
    sx.setFromTriplets(ts.begin(), ts.end());
    const Eigen::MatrixXd h = Eigen::MatrixXd(0.5 * omega1 * sx + g * (jx * jx));

    const SymmetricRegister reg(n);
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(dim, reg.dimension());
    for (int s = 0; s < dim; ++s) {
        SymmetricRegister::Occupation occ{0, 0, 0};
        for (int site = 0; site < n; ++site) ++occ[digit(s, site)];
        const double log_count = log_factorial(n) - log_factorial(occ[0]) - log_factorial(occ[1]) - log_factorial(occ[2]);
        proj(s, reg.index(occ)) = std::exp(-0.5 * log_count);
    }
    const Eigen::MatrixXd reduced = proj.transpose() * h * proj;
    const Eigen::MatrixXd direct = Eigen::MatrixXd(build_symmetric_hamiltonian(n_pairs, omega1, g).matrix);
    return (reduced - direct).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd ladder_vectors(const SymmetricRegister& reg) {
    if (reg.n_ions() % 2 != 0) throw DomainError("ladder_vectors: ion count must be even");
    const int n_pairs = reg.n_ions() / 2;
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(reg.dimension(), n_pairs + 1);
    for (int p = 0; p <= n_pairs; ++p) {
        const std::vector<double> c = p_coefficients(p);
        for (int m = -p; m <= p; ++m) {
            v(reg.index({2 * n_pairs - 2 * p, p - m, p + m}), p) = c[static_cast<std::size_t>(m + p)];
        }
    }
    return v;
}

LadderEquivalence ladder_equivalence_check(int n_pairs, double g) {
    require_pairs(n_pairs, 24, "ladder_equivalence_check");
    const SymmetricRegister reg(2 * n_pairs);
    const Eigen::MatrixXd v = ladder_vectors(reg);
    const Eigen::SparseMatrix<double> jx = collective_jx(reg).matrix;
    const Eigen::MatrixXd image = jx * (jx * v);
    const Eigen::MatrixXd block = g * (v.transpose() * image);

    EffectiveParams params;
    params.n_pairs = n_pairs;
    params.g = g;
    LadderEquivalence out;
    out.deviation = (block - build_via_projection(params).elements).cwiseAbs().maxCoeff();
    out.gram_deviation =
        (v.transpose() * v - Eigen::MatrixXd::Identity(n_pairs + 1, n_pairs + 1)).cwiseAbs().maxCoeff();
    out.s_x_residual = Eigen::MatrixXd(collective_sx(reg).matrix * v).cwiseAbs().maxCoeff();
    return out;
}

LeakageResult leakage_study(int n_pairs, const std::vector<double>& ratios, const PulseSchedule& schedule, int steps) {
    require_pairs(n_pairs, 12, "leakage_study");
    schedule.validate();
    if (ratios.empty()) throw DomainError("leakage_study: no ratios");
    if (steps < 1) throw DomainError("leakage_study: steps must be >= 1");
    const double chi_ref = peak_chi(schedule);
    if (!(chi_ref > 0.0)) throw DomainError("leakage_study: schedule has no Ising coupling");

    const FullModel model(n_pairs);
    const Eigen::MatrixXd v = ladder_vectors(model.reg);
    LeakageResult out;
    out.ratios = ratios;
    for (double ratio : ratios) {
        if (!(ratio > 0.0)) throw DomainError("leakage_study: ratios must be positive");
        const double omega1 = chi_ref / ratio;
        auto h = [&](double t) { return model.at(omega1, schedule.chi_at(t), schedule.delta_at(t)); };
        const auto states = piecewise_propagate(h, model.initial(), schedule.duration, steps, 1);
        const Eigen::VectorXcd inside = v.transpose().cast<std::complex<double>>() * states.back();
        out.leakage.push_back(std::max(0.0, 1.0 - inside.squaredNorm()));
    }
    if (ratios.size() >= 2) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            if (out.leakage[i] > 0.0) pts.emplace_back(ratios[i], out.leakage[i]);
        }
        if (pts.size() >= 2) out.slope = fit_power_law(pts).exponent;
    }
    return out;
}

double ladder_vs_full_deviation(int n_pairs, double omega1, const PulseSchedule& schedule, int samples, int steps) {
    require_pairs(n_pairs, 24, "ladder_vs_full_deviation");
    schedule.validate();
    const FullModel model(n_pairs);
    const Eigen::VectorXd target = ladder_vectors(model.reg).col(n_pairs);
    auto h = [&](double t) { return model.at(omega1, schedule.chi_at(t), schedule.delta_at(t)); };
    const auto full = piecewise_propagate(h, model.initial(), schedule.duration, steps, samples);

    EffectiveParams params;
    params.n_pairs = n_pairs;
    PropagationOptions opts;
    opts.output_samples = samples;
    opts.converge = false;
    const SimulationTrace ladder = propagate(initial_state(n_pairs), schedule, params, steps, opts);

    double worst = 0.0;
    for (int j = 0; j <= samples; ++j) {
        const double full_pop = std::norm(target.cast<std::complex<double>>().dot(full[j]));
        worst = std::max(worst, std::abs(full_pop - ladder.fidelity[j]));
    }
    return worst;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

ValidationReport run_validation(int max_ions) {
    if (max_ions < 2 || max_ions % 2 != 0) throw DomainError("run_validation: max_ions must be even and >= 2");
    ValidationReport report;
    report.max_ions = max_ions;
    auto add = [&](std::string name, double deviation, double threshold) {
        report.checks.push_back({std::move(name), deviation, threshold, deviation < threshold});
    };

    constexpr double omega1 = 37.0;  // arbitrary, non-degenerate with g
    constexpr double g = 1.3;
    for (int n = 2; n <= std::min(max_ions, 6); n += 2) {
        add("full_tensor_vs_symmetric_2N=" + std::to_string(n), full_tensor_check(n / 2, omega1, g), 1e-12);
    }
    for (int n = 2; n <= std::min(max_ions, 24); n += 2) {
        const LadderEquivalence eq = ladder_equivalence_check(n / 2, g);
        add("ladder_block_vs_projection_2N=" + std::to_string(n), eq.deviation, 1e-9);
        add("ladder_states_orthonormal_2N=" + std::to_string(n), eq.gram_deviation, 1e-10);
    }
    for (int n = 2; n <= max_ions; n += 2) {
        EffectiveParams p;
        p.n_pairs = n / 2;
        p.g = g;
        p.delta = 0.7;
        const double dev =
            (build_via_closed_form(p).elements - build_via_projection(p).elements).cwiseAbs().maxCoeff();
        add("closed_form_vs_projection_2N=" + std::to_string(n), dev, 1e-9);
    }
    {
        EffectiveParams p;
        p.n_pairs = 1;
        p.g = g;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(build_via_projection(p).elements);
        const double dev = std::max(std::abs(s.eigenvalues()(0)), std::abs(s.eigenvalues()(1) - 3.0 * g));
        add("two_ion_spectrum_0_3g", dev, 1e-12);
    }
    {
        double dev = 0.0;
        for (int n = 0; n <= 20; ++n) {
            for (int m = -n; m <= n; ++m) dev = std::max(dev, std::abs(std::abs(p_coeff(n, m)) - wigner_d_half_pi(n, m)));
        }
        add("p_coeff_vs_wigner_d_n<=20", dev, 1e-10);
    }
    if (max_ions >= 4) {
        const double chi = 1.0;
        const auto pulse = PulseSchedule::square(std::numbers::pi / chi, 0.0, chi);
        const LeakageResult leak = leakage_study(2, {1.0 / 64, 1.0 / 32, 1.0 / 16}, pulse);
        add("leakage_slope_minus_2_2N=4", std::abs(leak.slope - 2.0), 0.3);
    }
    return report;
}

} // namespace dicke
