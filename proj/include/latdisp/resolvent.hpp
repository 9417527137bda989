#pragma once

// Closed-form resolvent (A − λ)^{-1} of the junction operators on the infinite
// lattice, its boundary values R^±(ω) on the spectrum, and the propagator
// e^{itA} = (1/2πi) ∫_I e^{itω} [R⁺(ω) − R⁻(ω)] dω.
//
// On side s the homogeneous solutions are r_s^{|j|} with
// r² − (2 + λ b_s²) r + 1 = 0; the root with |r| < 1 is always taken.

#include <span>
#include <vector>

#include "latdisp/lattice_core.hpp"

namespace latdisp {

enum class RootSide { Interior, PlusBoundary, MinusBoundary };

struct ResolventRoot {
    cplx lambda;
    double b = 1.0;
    cplx r;
    RootSide side = RootSide::Interior;
};

/// Interior: λ off [−4b⁻², 0], returns the root with |r| < 1.  Boundary: λ
/// real; the limit from ω + i0 (Plus, Im r ≤ 0) or ω − i0 (Minus, its
/// conjugate).
ResolventRoot root_in_disc(cplx lambda, double b, RootSide side = RootSide::Interior);

/// The other root 1/r.
cplx companion_root(const ResolventRoot& root);

struct ResolventKernel {
    JunctionParams params;
    Variant variant; // Model1 or Model2 (FreeLaplacian maps to Model2 with b = 1)
    cplx lambda;
    RootSide side;
    ResolventRoot r1;
    ResolventRoot r2;
    /// Model1: c1(1 − r1) + c2(1 − r2).  Model2: c1(1/r1 − r1) + c2(1/r2 − r2).
    cplx denominator;
};

/// Interior mode rejects λ on the closed spectral interval; boundary mode
/// rejects ω outside I and the excluded points −4b1⁻², −4b2⁻², 0.
ResolventKernel make_resolvent(const JunctionParams& params, Variant variant, cplx lambda,
                               RootSide side = RootSide::Interior);

/// f(0): the eliminated interface value for Model1, the origin amplitude for Model2.
cplx resolvent_origin_value(const ResolventKernel& k, const LatticeState& g);

/// f = (A − λ)^{-1} g on the infinite lattice, reported on g's index set.
LatticeState resolvent_apply(const ResolventKernel& k, const LatticeState& g);

/// (R⁺(ω)g, R⁻(ω)g); the second is assembled as conj(R⁺(ω) conj g).
std::pair<LatticeState, LatticeState> boundary_resolvent_pair(const JunctionParams& params, double omega,
                                                              const LatticeState& g,
                                                              Variant variant = Variant::Model1);

/// C(ω) = |ω|^{-1/2} + |ωb1² + 4|^{-1/2} + |ωb2² + 4|^{-1/2}.
double resolvent_bound_C(const JunctionParams& params, double omega);

/// 2 / (b|λ|^{1/2} + (b²|λ| + 4)^{1/2}).
/// Only valid while |λb² + 4| <= 1 or λ lies on the side's own band; see the
/// exact form below.
double root_modulus_lower_bound(cplx lambda, double b);

/// 2 / (s + (s² + 4)^{1/2}) with s = |μ(μ + 4)|^{1/2}, μ = λb²; holds for every λ.
double root_modulus_lower_bound_exact(cplx lambda, double b);

/// |h(ω)| with boundary (plus) roots, Model1 denominator.
double boundary_denominator_abs(const JunctionParams& params, double omega);

struct LapResult {
    LatticeState state;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

/// e^{itA}φ by the spectral-interval integral.  Only Model1 and Model2.
LapResult lap_propagate(const JunctionParams& params, const LatticeState& phi, double t, double quad_tol,
                        Variant variant = Variant::Model1);

} // namespace latdisp
