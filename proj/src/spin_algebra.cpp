#include "dicke/spin_algebra.hpp"

#include "dicke/errors.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

namespace dicke {

namespace {

using Float = boost::multiprecision::cpp_bin_float_50;

std::vector<BigInt> binomial_row(int n) {
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    for (int k = 0; k < n; ++k) {
        row[k + 1] = row[k] * (n - k) / (k + 1);
    }
    return row;
}

// C(n, k) read from a precomputed row, zero outside 0..n.
const BigInt& row_at(const std::vector<BigInt>& row, int k) {
    static const BigInt zero = 0;
    if (k < 0 || k >= static_cast<int>(row.size())) return zero;
    return row[static_cast<std::size_t>(k)];
}

BigInt alternating_sum(const std::vector<BigInt>& row_n, int n, int m) {
    BigInt sum = 0;
    const int top = n - m;
    for (int i = 0; i <= top; ++i) {
        const BigInt term = row_at(row_n, top - i) * row_at(row_n, i);
        if (term == 0) continue;
        if ((top - i) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

double scale_amplitude(const BigInt& sum, const std::vector<BigInt>& row_2n, int n, int m) {
    if (sum == 0) return 0.0;
    const Float ratio = Float(row_2n[static_cast<std::size_t>(n)]) /
                        Float(row_2n[static_cast<std::size_t>(n - m)]);
    const Float value = Float(sum) * boost::multiprecision::sqrt(ratio) /
                        boost::multiprecision::pow(Float(2), n);
    return value.convert_to<double>();
}

} // namespace

void SpinLabel::validate() const {
    if (n < 0) throw DomainError("spin label: n must be non-negative, got " + std::to_string(n));
    if (std::abs(m) > n) {
        throw DomainError("spin label: |m| must not exceed n (n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
    }
}

BigInt binomial(int n, int k) {
    if (n < 0 || k < 0) throw DomainError("binomial: negative argument");
    if (k > n) {
        throw DomainError("binomial: k > n (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    if (k > n - k) k = n - k;
    BigInt value = 1;
    for (int i = 0; i < k; ++i) {
        value = value * (n - i) / (i + 1);
    }
    return value;
}

BigInt p_coeff_sum(int n, int m) {
    SpinLabel{n, m}.validate();
    return alternating_sum(binomial_row(n), n, m);
}

double p_coeff(int n, int m) {
    SpinLabel{n, m}.validate();
    const auto row_n = binomial_row(n);
    const auto row_2n = binomial_row(2 * n);
    return scale_amplitude(alternating_sum(row_n, n, m), row_2n, n, m);
}

std::vector<double> p_coefficients(int n) {
    SpinLabel{n, 0}.validate();
    const auto row_n = binomial_row(n);
    const auto row_2n = binomial_row(2 * n);
    std::vector<double> out(static_cast<std::size_t>(2 * n + 1));
    for (int m = -n; m <= n; ++m) {
        out[static_cast<std::size_t>(m + n)] = scale_amplitude(alternating_sum(row_n, n, m), row_2n, n, m);
    }
    return out;
}

double wigner_d_half_pi(int n, int m) {
    SpinLabel{n, m}.validate();
    const int dim = 2 * n + 1;
    // Basis index i <-> projection mz = i - n. Spin units: J_x = (J+ + J-)/2.
    Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(dim, dim);
    const double j = n;
    for (int i = 0; i + 1 < dim; ++i) {
        const double mz = i - n;
        const double raise = 0.5 * std::sqrt(j * (j + 1) - mz * (mz + 1));
        jx(i + 1, i) = raise;
        jx(i, i + 1) = raise;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jx);
    if (solver.info() != Eigen::Success) throw NumericalError("wigner_d_half_pi: eigensolver failed");
    // Eigenvalues are -n..n in ascending order, so m_x = 0 sits in the middle.
    Eigen::Index zero_col = 0;
    solver.eigenvalues().cwiseAbs().minCoeff(&zero_col);
    return std::abs(solver.eigenvectors()(m + n, zero_col));
}

} // namespace dicke
