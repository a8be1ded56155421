#pragma once

// Exact combinatorics for collective spins and the expansion of the
// x-quantized m_x = 0 state of a spin-n register over z-basis Dicke states.

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace dicke {

using BigInt = boost::multiprecision::cpp_int;

/// Total spin n and projection m of a qubit sub-register.
struct SpinLabel {
    int n = 0;
    int m = 0;

    /// Throws DomainError unless n >= 0 and |m| <= n.
    void validate() const;
};

/// Exact binomial coefficient C(n, k). Throws DomainError for k > n or negative arguments.
BigInt binomial(int n, int k);

/// The signed integer sum  sum_i (-1)^(n-m-i) C(n, n-m-i) C(n, i)  appearing in p(n, m).
BigInt p_coeff_sum(int n, int m);

/// Amplitude <n, m_z = m | n, m_x = 0> in the sign convention fixed by the closed form
///   p(n, m) = 2^-n sqrt(C(2n, n) / C(2n, n-m)) * p_coeff_sum(n, m).
/// The sum is exact; only the final scaling is done in floating point.
double p_coeff(int n, int m);

/// p_coeff(n, m) for m = -n..n, stored at index m + n. Shares the binomial rows across m.
std::vector<double> p_coefficients(int n);

/// |<n, m_z = m | n, m_x = 0>| from a direct diagonalization of the (2n+1)-dimensional
/// spin-x matrix. Independent check on p_coeff.
double wigner_d_half_pi(int n, int m);

} // namespace dicke
