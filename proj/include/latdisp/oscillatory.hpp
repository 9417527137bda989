#pragma once

// Oscillatory integrals  I(x, t) = ∫_Ω exp(i(tφ(ξ) − xξ)) w(ξ) dξ  and empirical
// certification of their t^{-1/k} decay.
//
// Quadrature is panel based: the domain is cut at classified stationary points,
// then into panels carrying at most 2π of phase |tφ′ − x|, and each panel is
// refined adaptively with G10/K21.  No asymptotic expansions are used, so
// degenerate stationary points need no special treatment.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace latdisp {

struct PhaseDerivs {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

/// A₂: φ″ vanishes at finitely many points with power behaviour;
/// A₃: the same for φ‴.
enum class PhaseClass { None, A2, A3 };

struct StationaryPoint {
    double location = 0.0;
    double alpha = 0.0; // |φ^{(k)}| ~ |ξ − ξ0|^{α−k}, k = 2 (A₂) or 3 (A₃)
    double c1 = 0.0;
    double c2 = 0.0;
    double eps = 0.0;
};

struct PhaseFunction {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> value;
    std::function<PhaseDerivs(double)> derivs;
    PhaseClass cls = PhaseClass::None;
    std::vector<StationaryPoint> stationary;

    double length() const { return hi - lo; }
};

/// φ(ξ) = ξ^power on [lo, hi].  ξ² is classified A₂ (φ″ never vanishes);
/// ξ^p for p >= 4 is classified A₃ with the single point ξ0 = 0, α = p.
PhaseFunction power_phase(int power, double lo, double hi);

/// φ(ξ) = −4 sin²(ξ/2) on [−π, π], the free lattice dispersion relation.
PhaseFunction lattice_dispersion_phase();

/// Largest relative mismatch between the supplied derivatives and central
/// finite differences of the next-lower order, over `samples` interior points.
double derivative_consistency(const PhaseFunction& phase, int samples = 64);

struct ClassificationCheck {
    bool ok = true;
    double worst_lower_ratio = 0.0; // min |φ^{(k)}| / (c1|ξ−ξ0|^{α−k}); ok needs >= 1
    double worst_upper_ratio = 0.0; // max |φ^{(k)}| / (c2|ξ−ξ0|^{α−k}); ok needs <= 1
};

/// Samples the two-sided power bounds on each classified ε-neighbourhood.
ClassificationCheck check_classification(const PhaseFunction& phase, int samples = 200);

struct OscResult {
    std::complex<double> value;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

using Weight = std::function<std::complex<double>(double)>;

/// ∫_Ω exp(i(tφ(ξ) − xξ)) w(ξ) dξ with absolute error <= tol.
OscResult osc_integral(const PhaseFunction& phase, const Weight& weight, double t, double x,
                       double tol);

/// Same, restricted to [lo, hi] ⊂ Ω with extra breakpoints.
OscResult osc_integral_on(const PhaseFunction& phase, const Weight& weight, double t, double x,
                          double lo, double hi, std::span<const double> extra_breaks, double tol);

enum class WeightKind { One, HalfPowerSecond, ThirdPowerThird, Sine };

std::string to_string(WeightKind k);
WeightKind parse_weight_kind(const std::string& name);
Weight make_weight(WeightKind kind, const PhaseFunction& phase);

/// Decay order k with I = O(t^{-1/k}) implied by the weight and phase class.
int decay_order(WeightKind kind, const PhaseFunction& phase);

struct BoundednessVerdict {
    double slope = 0.0;           // of log(M·t^{1/k}) against log t
    double max_over_median = 0.0; // of M·t^{1/k}
    bool bounded = false;
};

/// Trend slope within ±slope_tol and max/median <= ratio_limit.
BoundednessVerdict assess_boundedness(std::span<const double> t, std::span<const double> scaled,
                                      double slope_tol = 0.05, double ratio_limit = 10.0);

struct ScanSample {
    double t = 0.0;
    double x = 0.0;
    double abs_value = 0.0;
    double scaled = 0.0; // abs_value · t^{1/k}
};

struct DecayCertificate {
    int k = 1;
    std::vector<ScanSample> samples;   // every (t, x) evaluated
    std::vector<ScanSample> sup_rows;  // per t: the x attaining the sup
    BoundednessVerdict verdict;
    double empirical_constant = 0.0;   // max_t M(t)·t^{1/k}
    bool certified = false;
};

struct CertifyOptions {
    double tol = 1e-9;
    double slope_tol = 0.05;
    double ratio_limit = 10.0;
    int stationary_samples = 16; // extra x per t: x = tφ′(ξ) at evenly spread ξ
};

/// M(t) = sup_x |I(x, t)| over x_grid (plus x = tφ′(ξ0) for each classified
/// point and for evenly spread ξ) and the boundedness of M(t)·t^{1/k}.
/// Rejects weights that vanish identically for the given phase.
DecayCertificate certify_decay(const PhaseFunction& phase, WeightKind weight_kind,
                               std::span<const double> t_grid, std::span<const double> x_grid,
                               const CertifyOptions& opt = {});

/// Finite-difference weights for the m-th derivative on the symmetric stencil
/// {−p..p}·h (Fornberg), scaled by h^{-m}.
std::vector<double> central_difference_weights(int derivative, int half_points, double h);

} // namespace latdisp
