#pragma once

// Junction operators on the truncated lattice.
//
// Two half-lattices with hopping coefficients b1^-2 (sites j <= -1) and
// b2^-2 (sites j >= 1) are coupled at j = 0.  Model1 eliminates the artificial
// value u(0) through continuity and flux balance, so states live on Z* = Z \ {0}.
// Model2 keeps the origin as a regular site with the conservative stencil
// (b1^-2, -(b1^-2 + b2^-2), b2^-2).  All truncations use Dirichlet boundaries
// beyond |j| = N.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace latdisp {

using cplx = std::complex<double>;

enum class Variant { Model1, Model2, FreeLaplacian };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// True for the variants whose lattice contains the site j = 0.
constexpr bool includes_origin(Variant v) { return v != Variant::Model1; }

class JunctionParams {
public:
    JunctionParams(double b1, double b2);

    double b1() const { return b1_; }
    double b2() const { return b2_; }
    /// Hopping coefficient b_s^-2 on side s ∈ {1, 2}.
    double coeff(int side) const { return side == 1 ? c1_ : c2_; }
    double b(int side) const { return side == 1 ? b1_ : b2_; }
    double max_coeff() const { return c1_ > c2_ ? c1_ : c2_; }

    double spectral_min() const { return -4.0 * max_coeff(); }
    double spectral_max() const { return 0.0; }

private:
    double b1_;
    double b2_;
    double c1_;
    double c2_;
};

/// Complex amplitudes on {-N..N} (includes_origin) or {-N..N} \ {0}.
class LatticeState {
public:
    LatticeState(int half_width, bool includes_origin, double time = 0.0);
    LatticeState(int half_width, bool includes_origin, std::vector<cplx> amplitudes,
                 double time = 0.0);

    static LatticeState delta(int half_width, bool includes_origin, int site);

    int half_width() const { return half_width_; }
    bool includes_origin() const { return includes_origin_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }
    std::size_t size() const { return amplitudes_.size(); }

    bool contains(int site) const;
    std::size_t offset(int site) const;
    int site(std::size_t offset) const;

    cplx& operator[](int site) { return amplitudes_[offset(site)]; }
    cplx operator[](int site) const { return amplitudes_[offset(site)]; }

    std::span<cplx> amplitudes() { return amplitudes_; }
    std::span<const cplx> amplitudes() const { return amplitudes_; }

    double norm1() const;
    double norm2() const;
    double norm_inf() const;
    /// l^r norm for r >= 1; pass +inf for the sup norm.
    double norm(double r) const;

    LatticeState conj() const;
    /// Same index set with a different half-width; sites outside the new range are dropped.
    LatticeState resized(int new_half_width) const;

private:
    int half_width_;
    bool includes_origin_;
    double time_;
    std::vector<cplx> amplitudes_;
};

/// Real symmetric tridiagonal realisation of the junction operator.
struct TruncatedOperator {
    Variant variant;
    JunctionParams params;
    int half_width;
    std::vector<double> diag;
    std::vector<double> offdiag; // offdiag[i] couples offsets i and i + 1

    std::size_t dim() const { return diag.size(); }
    bool includes_origin() const { return latdisp::includes_origin(variant); }
    int site(std::size_t offset) const;

    /// y = A x on the truncated lattice.
    void apply(std::span<const cplx> x, std::span<cplx> y) const;
    LatticeState apply(const LatticeState& x) const;

    Eigen::MatrixXd dense() const;
};

/// FreeLaplacian ignores params and uses the unit-coefficient Δ_d on Z.
TruncatedOperator build_operator(const JunctionParams& params, Variant variant, int half_width);

/// (Au, u) for real u via the matrix.
double quadratic_form(const TruncatedOperator& op, std::span<const double> u);
double quadratic_form(const TruncatedOperator& op, const LatticeState& u);

/// The same quantity assembled as minus a sum of weighted squared differences
/// (Model1 / Model2 / FreeLaplacian each have their own difference structure).
double quadratic_form_difference_sum(const TruncatedOperator& op, std::span<const double> u);

struct SpectrumReport {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double interval_min = 0.0;
    double interval_max = 0.0;
    /// Distance by which eigenvalues fall outside [interval_min, interval_max]; 0 when inside.
    double excess_below = 0.0;
    double excess_above = 0.0;
    /// Largest gap between consecutive eigenvalues or interval ends, relative to the interval length.
    double max_relative_gap = 0.0;
    /// Fraction of 64 equal bins of the interval that contain at least one eigenvalue.
    double bin_fill_fraction = 0.0;
    std::vector<double> eigenvalues;
};

SpectrumReport spectrum_check(const TruncatedOperator& op);

/// Eigen-decomposition A = Q Λ Qᵀ of the truncated operator (LAPACK dstevr).
struct Eigensystem {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns are orthonormal eigenvectors
};

Eigensystem eigensystem(const TruncatedOperator& op, bool with_vectors = true);

/// Smallest N such that a wave launched inside |j| <= j_obs with maximal group
/// speed 2c stays clear of the Dirichlet ends up to time t_max.
int reflection_safe_half_width(int j_obs, double max_coeff, double t_max);

} // namespace latdisp
