#pragma once

// Reference values computed without touching the library's own numerics.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// J_n(x) for integer n and x >= 0 by Miller's backward recurrence,
/// normalised with J_0 + 2 Σ J_{2k} = 1.
inline double bessel_j(int n, double x)
{
    const int an = std::abs(n);
    const double sign = (n < 0 && an % 2) ? -1.0 : 1.0;
    if (x == 0.0) return an == 0 ? 1.0 : 0.0;
    const int start = 2 * ((std::max(an, static_cast<int>(x)) + 30 + static_cast<int>(std::sqrt(60.0 * std::max(an, static_cast<int>(x) + 1)))) / 2);
    double jp1 = 0.0, j = 1e-300, result = 0.0, norm = 0.0;
    for (int k = start; k > 0; --k) {
        const double jm1 = 2.0 * k / x * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
        if (k - 1 == an) result = j;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    }
    norm += j; // J_0
    return sign * result / norm;
}

/// K_t(j) = e^{−2it} i^j J_j(2t).
inline std::complex<double> free_kernel(int j, double t)
{
    const std::complex<double> phase = std::polar(1.0, -2.0 * t);
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const double jt = t >= 0 ? bessel_j(j, 2.0 * t) : (std::abs(j) % 2 ? -1.0 : 1.0) * bessel_j(j, -2.0 * t);
    return phase * ipow[((j % 4) + 4) % 4] * jt;
}

/// Eigenvalues −4 sin²(kπ / (2(n + 1))), k = 1..n, of the unit Dirichlet Laplacian on n sites.
inline std::vector<double> dirichlet_laplacian_eigenvalues(int n)
{
    std::vector<double> v;
    for (int k = 1; k <= n; ++k) {
        const double s = std::sin(k * M_PI / (2.0 * (n + 1)));
        v.push_back(-4.0 * s * s);
    }
    return v;
}

/// Dense LU solve of (M − λ) x = b.
inline Eigen::VectorXcd dense_shifted_solve(const Eigen::MatrixXd& m, std::complex<double> lambda,
                                            const Eigen::VectorXcd& b)
{
    Eigen::MatrixXcd a = m.cast<std::complex<double>>();
    a.diagonal().array() -= lambda;
    return a.partialPivLu().solve(b);
}

/// Dense e^{itM} x via Eigen's self-adjoint solver.
inline Eigen::VectorXcd dense_propagate(const Eigen::MatrixXd& m, double t, const Eigen::VectorXcd& x)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd c = q.transpose().cast<std::complex<double>>() * x;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, t * es.eigenvalues()(i));
    return q.cast<std::complex<double>>() * c;
}

} // namespace oracle
