#pragma once

// The junction phase p(θ) = 2cos θ + 2z·arcsin(a sin(θ/2)) on [0, π], its
// split p = q + b·r around the critical z* = 4√(1−a²)/a, and the numerical
// checks of the associated decay and Taylor claims.

#include <optional>
#include <span>
#include <vector>

#include "latdisp/oscillatory.hpp"

namespace latdisp {

struct Derivs5 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

class JunctionPhase {
public:
    /// a ∈ (0, 1]; at a = 1 the arcsin branch reduces to θ/2.
    JunctionPhase(double a, double z);

    double a() const { return a_; }
    double z() const { return z_; }
    /// 4√(1−a²)/a
    double z_star() const { return z_star_; }
    /// b in z = z* + b
    double b_offset() const { return z_ - z_star_; }

    /// g(θ) = arcsin(a sin(θ/2)) and derivatives.
    Derivs5 g(double theta) const;
    Derivs5 p(double theta) const;
    Derivs5 q(double theta) const;
    Derivs5 r(double theta) const;

    PhaseFunction as_phase(double lo = 0.0, double hi = 3.141592653589793) const;

    /// Points of [0, π] where |p″| has a zero or a local minimum, plus π.
    std::vector<double> critical_points(int scan = 4000) const;

private:
    double a_;
    double z_;
    double z_star_;
};

struct JunctionRow {
    double z = 0.0;
    int integral = 1; // 1: sine weight on [δ, π]; 2: unit weight on [0, π−δ]
    std::vector<ScanSample> sup_rows;
    BoundednessVerdict verdict;
    double empirical_constant = 0.0;
    bool certified = false;
};

struct JunctionReport {
    double a = 0.0;
    double z_star = 0.0;
    double delta = 0.0;
    bool quartic_case = false; // a = 1/√2, where q″ vanishes to fourth order at π
    std::vector<JunctionRow> rows;
    double t0_worst_ratio = 0.0; // max |I(y, 0)| / |Ω|
    bool t0_ok = true;
    bool certified = false;
};

struct JunctionOptions {
    double tol = 1e-9;
    double slope_tol = 0.05;  // one-sided: slope of log(M·t^{1/3}) <= slope_tol
    double ratio_limit = 10.0;
    int stationary_samples = 16; // extra y per t putting a stationary point at spread θ
};

/// Both integrals ∫ e^{i(t p(θ) + yθ)} ψ(θ) dθ over the (t, y) grids, with the
/// y values −t·p′(θc) of every critical point θc (and of evenly spread θ) added
/// per t.  Rows with t < 1 only feed the t = 0 bound check.
JunctionReport junction_phase_report(double a, std::span<const double> z_grid, double delta,
                                     std::span<const double> t_grid, std::span<const double> y_grid,
                                     const JunctionOptions& opt = {});

struct BoundViolation {
    double z = 0.0;
    double theta = 0.0;
    double value = 0.0; // min over θ of (p″)² + (p‴)²
    double bound = 0.0;
};

struct PhaseAlgebraReport {
    double a = 0.0;
    double z_star = 0.0;

    // (i) lower bound on a 200×200 (θ, z) grid over z ∈ [0, 2z*]
    int grid_points = 0;
    int violations = 0;         // first term read as z²a²(a²−1)²/16
    int violations_grouped = 0; // first term read as (z²a²(a²−1))²/16
    std::vector<BoundViolation> worst; // per violating z: the smallest value
    double global_min_value = 0.0;
    double global_min_theta = 0.0;
    double global_min_z = 0.0;

    // q″(π), q‴(π) by finite differences
    double q2_at_pi = 0.0;
    double q3_at_pi = 0.0;

    // (ii)/(iii) Taylor coefficients at π: fitted vs printed
    double c4_fit = 0.0, c4_printed = 0.0;
    double c6_fit = 0.0, c6_printed = 0.0;
    double r2_fit = 0.0, r2_printed = 0.0;
    double r4_fit = 0.0, r4_printed = 0.0;
    double r_second_at_pi = 0.0, r_second_printed = 0.0;

    // (iv) min over [0, π−δ] of |q″| + |q‴|
    std::vector<std::pair<double, double>> q_separation; // (δ, min)
};

/// a ∈ (0, 1).
PhaseAlgebraReport verify_phase_algebra(double a, int grid = 200);

/// The printed lower bound min{4 + z²a²(a²−1)²/16, a²(z − z*)²/(4(1−a²))};
/// Grouped squares the whole product z²a²(a²−1) instead.
enum class BoundReading { Spec, Grouped };
double printed_lower_bound(double a, double z, BoundReading reading = BoundReading::Spec);

/// Relative mismatch |fit − printed| / |printed|, or the absolute value when printed = 0.
double coefficient_mismatch(double fit, double printed);

} // namespace latdisp
