#pragma once

// Propagation of iu_t + Au = 0, i.e. u(t) = e^{itA} φ, by three routes:
// the eigendecomposition of the truncated operator, the free kernel
// K_t(j) = (1/2π)∫ e^{it(2cos ξ − 2)} e^{ijξ} dξ (with image sums for equal
// coefficients), and, in resolvent.hpp, the spectral contour integral.

#include <span>
#include <vector>

#include "latdisp/lattice_core.hpp"

namespace latdisp {

/// K_t(j) by oscillation-aware quadrature, absolute error <= tol.
cplx kernel_Kt(int j, double t, double tol);

/// K_t(j) for j = −jmax..jmax (index j + jmax) from one periodic trapezoid
/// rule evaluated by FFT.  The grid is sized so that aliasing stays below
/// round-off.
std::vector<cplx> kernel_row(double t, int jmax);

/// sup_j |K_t(j)| over the whole lattice.
double kernel_sup(double t);

/// Holds the eigendecomposition so that many times share one eigensolve.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const TruncatedOperator& op);

    const TruncatedOperator& op() const { return op_; }
    const Eigensystem& eigen() const { return eig_; }

    LatticeState evolve(const LatticeState& phi, double t) const;
    /// Batched: one GEMM for all times.
    std::vector<LatticeState> evolve(const LatticeState& phi, std::span<const double> times) const;

private:
    TruncatedOperator op_;
    Eigensystem eig_;
};

std::vector<LatticeState> evolve_spectral(const TruncatedOperator& op, const LatticeState& phi,
                                          std::span<const double> times);

/// Dirichlet/Neumann image-sum route for b1 = b2 on Z*; the result lives on
/// phi's index set and carries no truncation error (the infinite-lattice
/// solution restricted to |j| <= N).  tol bounds the kernel error.
LatticeState evolve_equal_coeffs(const JunctionParams& params, const LatticeState& phi, double t,
                                 double tol);

struct DecayFit {
    double exponent = 0.0;
    double log_constant = 0.0;
    double residual = 0.0; // RMS in log space
    double t_min = 0.0;
    double t_max = 0.0;
    int sample_count = 0;

    double constant() const;
};

struct DecaySample {
    double t = 0.0;
    double sup_norm = 0.0;
    double l2_norm = 0.0;
};

/// Least squares of log sup_norm against log t over samples with t >= t_min.
DecayFit fit_decay(std::span<const DecaySample> curve, double t_min);

/// Geometric grid from a to b with `per_decade` points per decade (both ends included).
std::vector<double> geometric_grid(double a, double b, int per_decade);

/// Sup-norm curve of e^{itA}φ for φ = δ_site on a lattice wide enough that
/// nothing reaches the Dirichlet ends before max(times).
std::vector<DecaySample> decay_curve(const JunctionParams& params, Variant variant, int site,
                                     std::span<const double> times);

/// sup_j |K_t(j)| on each time.
std::vector<DecaySample> kernel_decay_curve(std::span<const double> times);

} // namespace latdisp
