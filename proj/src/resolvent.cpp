#include "latdisp/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latdisp/error.hpp"
#include "latdisp/quadrature.hpp"

namespace latdisp {

namespace {

constexpr double pi = std::numbers::pi;

std::vector<cplx> powers(cplx r, int n)
{
    std::vector<cplx> p(static_cast<std::size_t>(n + 1));
    p[0] = 1.0;
    for (int k = 1; k <= n; ++k) p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k - 1)] * r;
    return p;
}

bool near(double x, double y, double scale) { return std::abs(x - y) <= 1e-12 * std::max(1.0, scale); }

} // namespace

ResolventRoot root_in_disc(cplx lambda, double b, RootSide side)
{
    if (!(b > 0.0)) throw InvalidArgument("root_in_disc needs b > 0");
    const cplx mu = lambda * b * b;
    ResolventRoot out{lambda, b, {}, side};

    if (side == RootSide::Interior) {
        if (lambda.imag() == 0.0 && mu.real() >= -4.0 && mu.real() <= 0.0)
            throw SpectralPointError("lambda = " + std::to_string(lambda.real()) +
                                     " lies on the spectral band [-4b^-2, 0]; no root with |r| < 1");
        // r = 1 + δ, δ = (μ ± √μ √(μ+4)) / 2; take the larger root, invert it
        const cplx s = std::sqrt(mu) * std::sqrt(mu + 4.0);
        const cplx ra = 1.0 + 0.5 * (mu + s);
        const cplx rb = 1.0 + 0.5 * (mu - s);
        const cplx big = std::abs(ra) >= std::abs(rb) ? ra : rb;
        out.r = 1.0 / big;
        return out;
    }

    if (lambda.imag() != 0.0) throw InvalidArgument("boundary roots need a real omega");
    const double m = mu.real();
    if (m >= -4.0 && m <= 0.0) {
        // unimodular pair e^{∓iθ}, 2cos θ − 2 = μ
        const double c = 1.0 + 0.5 * m;
        const double s = 0.5 * std::sqrt(-m) * std::sqrt(4.0 + m);
        out.r = cplx(c, -s);
    } else {
        // real pair: the ε ↓ 0 limit keeps |r| < 1 on both sides
        const double s = std::sqrt(m * (m + 4.0));
        const double ra = 1.0 + 0.5 * (m + s);
        const double rb = 1.0 + 0.5 * (m - s);
        out.r = 1.0 / (std::abs(ra) >= std::abs(rb) ? ra : rb);
    }
    if (side == RootSide::MinusBoundary) out.r = std::conj(out.r);
    return out;
}

cplx companion_root(const ResolventRoot& root) { return 1.0 / root.r; }

namespace {

// No checks on λ: quadrature nodes may come arbitrarily close to excluded points.
ResolventKernel assemble_kernel(const JunctionParams& p, Variant v, cplx lambda, RootSide side)
{
    ResolventKernel k{p, v, lambda, side, root_in_disc(lambda, p.b1(), side), root_in_disc(lambda, p.b2(), side), {}};
    const double c1 = p.coeff(1), c2 = p.coeff(2);
    const cplx r1 = k.r1.r, r2 = k.r2.r;
    if (v == Variant::Model1)
        k.denominator = c1 * (1.0 - r1) + c2 * (1.0 - r2);
    else
        k.denominator = c1 * (1.0 / r1 - r1) + c2 * (1.0 / r2 - r2);
    if (k.denominator == cplx{}) throw NumericalError("resolvent denominator vanishes");
    return k;
}

} // namespace

ResolventKernel make_resolvent(const JunctionParams& params, Variant variant, cplx lambda, RootSide side)
{
    const JunctionParams p = variant == Variant::FreeLaplacian ? JunctionParams(1.0, 1.0) : params;
    const Variant v = variant == Variant::FreeLaplacian ? Variant::Model2 : variant;
    const double lo = p.spectral_min();

    if (side == RootSide::Interior) {
        if (lambda.imag() == 0.0 && lambda.real() >= lo && lambda.real() <= 0.0)
            throw SpectralPointError("lambda lies on the spectral interval [" + std::to_string(lo) + ", 0]");
    } else {
        const double w = lambda.real();
        if (lambda.imag() != 0.0) throw InvalidArgument("boundary mode needs a real omega");
        if (w < lo || w > 0.0)
            throw InvalidArgument("omega = " + std::to_string(w) + " lies outside the spectral interval");
        if (near(w, -4.0 * p.coeff(1), std::abs(lo)) || near(w, -4.0 * p.coeff(2), std::abs(lo)) ||
            near(w, 0.0, std::abs(lo)))
            throw InvalidArgument("omega = " + std::to_string(w) +
                                  " is an excluded point (-4 b1^-2, -4 b2^-2 or 0)");
    }
    return assemble_kernel(p, v, lambda, side);
}

namespace {

struct SideSums {
    cplx s1, s2, g0;
};

SideSums side_sums(const LatticeState& g, const std::vector<cplx>& p1,
                   const std::vector<cplx>& p2)
{
    SideSums s{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx v = g.amplitudes()[i];
        if (v == cplx{}) continue;
        const int j = g.site(i);
        if (j < 0)
            s.s1 += p1[static_cast<std::size_t>(-j)] * v;
        else if (j > 0)
            s.s2 += p2[static_cast<std::size_t>(j)] * v;
        else
            s.g0 += v;
    }
    return s;
}

cplx origin_from_sums(const ResolventKernel& k, const SideSums& s)
{
    if (k.variant == Variant::Model1) return -(s.s1 + s.s2) / k.denominator;
    // the origin row gives f(0)·(c1(r1 − 1/r1) + c2(r2 − 1/r2))/2 = g(0) + S1 + S2
    return -2.0 * (s.g0 + s.s1 + s.s2) / k.denominator;
}

} // namespace

cplx resolvent_origin_value(const ResolventKernel& k, const LatticeState& g)
{
    if (g.includes_origin() != (k.variant != Variant::Model1))
        throw InvalidArgument("state index set does not match the resolvent variant");
    const int n = g.half_width();
    const auto p1 = powers(k.r1.r, 2 * n);
    const auto p2 = powers(k.r2.r, 2 * n);
    return origin_from_sums(k, side_sums(g, p1, p2));
}

LatticeState resolvent_apply(const ResolventKernel& k, const LatticeState& g)
{
    if (g.includes_origin() != (k.variant != Variant::Model1))
        throw InvalidArgument("state index set does not match the resolvent variant");
    const int n = g.half_width();
    const auto p1 = powers(k.r1.r, 2 * n);
    const auto p2 = powers(k.r2.r, 2 * n);
    const cplx f0 = origin_from_sums(k, side_sums(g, p1, p2));

    std::vector<std::pair<int, cplx>> left, right;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx v = g.amplitudes()[i];
        if (v == cplx{}) continue;
        const int j = g.site(i);
        if (j < 0) left.emplace_back(-j, v);
        if (j > 0) right.emplace_back(j, v);
    }
    const double b1sq = k.params.b1() * k.params.b1();
    const double b2sq = k.params.b2() * k.params.b2();
    const cplx pref1 = b1sq / (k.r1.r - 1.0 / k.r1.r);
    const cplx pref2 = b2sq / (k.r2.r - 1.0 / k.r2.r);

    LatticeState f(n, g.includes_origin(), g.time());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const int j = f.site(i);
        if (j == 0) {
            f.amplitudes()[i] = f0;
            continue;
        }
        const int m = std::abs(j);
        const auto& pw = j < 0 ? p1 : p2;
        const auto& src = j < 0 ? left : right;
        cplx acc = 0.0;
        for (const auto& [kk, v] : src)
            acc += (pw[static_cast<std::size_t>(std::abs(m - kk))] - pw[static_cast<std::size_t>(m + kk)]) * v;
        f.amplitudes()[i] = f0 * pw[static_cast<std::size_t>(m)] + (j < 0 ? pref1 : pref2) * acc;
    }
    return f;
}

std::pair<LatticeState, LatticeState> boundary_resolvent_pair(const JunctionParams& params, double omega,
                                                              const LatticeState& g, Variant variant)
{
    const auto k = make_resolvent(params, variant, omega, RootSide::PlusBoundary);
    LatticeState plus = resolvent_apply(k, g);
    LatticeState minus = resolvent_apply(k, g.conj()).conj();
    return {std::move(plus), std::move(minus)};
}

double resolvent_bound_C(const JunctionParams& params, double omega)
{
    const double b1sq = params.b1() * params.b1();
    const double b2sq = params.b2() * params.b2();
    return 1.0 / std::sqrt(std::abs(omega)) + 1.0 / std::sqrt(std::abs(omega * b1sq + 4.0)) +
           1.0 / std::sqrt(std::abs(omega * b2sq + 4.0));
}

double root_modulus_lower_bound(cplx lambda, double b)
{
    const double m = std::abs(lambda);
    return 2.0 / (b * std::sqrt(m) + std::sqrt(b * b * m + 4.0));
}

double root_modulus_lower_bound_exact(cplx lambda, double b)
{
    // |r − 1/r| = |μ(μ + 4)|^{1/2} and 1/|r| − |r| <= |r − 1/r|
    const cplx mu = lambda * b * b;
    const double s = std::sqrt(std::abs(mu * (mu + 4.0)));
    return 2.0 / (s + std::sqrt(s * s + 4.0));
}

double boundary_denominator_abs(const JunctionParams& params, double omega)
{
    return std::abs(make_resolvent(params, Variant::Model1, omega, RootSide::PlusBoundary).denominator);
}

LapResult lap_propagate(const JunctionParams& params, const LatticeState& phi, double t, double quad_tol,
                        Variant variant)
{
    if (!(quad_tol > 0.0)) throw InvalidArgument("lap_propagate needs quad_tol > 0");
    if (variant == Variant::FreeLaplacian) throw InvalidArgument("lap_propagate supports model1 and model2");
    if (phi.includes_origin() != includes_origin(variant))
        throw InvalidArgument("state index set does not match the variant");

    const double c_lo = std::min(params.coeff(1), params.coeff(2));
    const double c_hi = std::max(params.coeff(1), params.coeff(2));
    const std::size_t dim = phi.size();
    const LatticeState phi_conj = phi.conj();
    const int n = phi.half_width();

    // integrand at ω with Jacobian jac: e^{itω}(R⁺ − R⁻)φ · jac / (2πi)
    auto eval = [&](double omega, double jac, std::span<cplx> out) {
        const auto k = assemble_kernel(params, variant, omega, RootSide::PlusBoundary);
        const LatticeState fp = resolvent_apply(k, phi);
        const LatticeState fm = resolvent_apply(k, phi_conj);
        const cplx factor = cplx(std::cos(t * omega), std::sin(t * omega)) * jac / cplx(0.0, 2.0 * pi);
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = factor * (fp.amplitudes()[i] - std::conj(fm.amplitudes()[i]));
    };

    QuadratureOptions opt;
    opt.abs_tol = 0.5 * quad_tol;
    LapResult res{LatticeState(n, phi.includes_origin(), t), 0.0, 0};
    auto panels_for = [&](double phase_span) {
        const int m = static_cast<int>(std::ceil(phase_span / pi)) + 4;
        std::vector<double> b(static_cast<std::size_t>(m + 1));
        for (int i = 0; i <= m; ++i) b[static_cast<std::size_t>(i)] = static_cast<double>(i) / m;
        return b;
    };
    auto accumulate = [&](const QuadratureResult<std::vector<cplx>>& r) {
        for (std::size_t i = 0; i < dim; ++i) res.state.amplitudes()[i] += r.value[i];
        res.error_estimate += r.error_estimate;
        res.panels += r.panels;
    };

    // piece B: ω = c_lo(2cos θ − 2) over [−4c_lo, 0], θ = πu
    {
        const auto breaks = panels_for(4.0 * c_lo * std::abs(t) + 2.0 * pi * n);
        auto f = [&](double u, std::span<cplx> out) {
            const double th = pi * u;
            const double s = std::sin(0.5 * th);
            eval(-4.0 * c_lo * s * s, 2.0 * c_lo * std::sin(th) * pi, out);
        };
        accumulate(integrate_vector(f, dim, breaks, opt));
    }
    // piece A: ω = c_hi(2cos θ − 2) over [−4c_hi, −4c_lo], θ = θ_A + (π − θ_A)u²
    if (c_hi > c_lo * (1.0 + 1e-14)) {
        const double theta_a = std::acos(1.0 - 2.0 * c_lo / c_hi);
        const auto breaks = panels_for(4.0 * (c_hi - c_lo) * std::abs(t) + 2.0 * pi * n);
        auto f = [&](double u, std::span<cplx> out) {
            const double th = theta_a + (pi - theta_a) * u * u;
            const double s = std::sin(0.5 * th);
            const double jac = 2.0 * c_hi * std::sin(th) * 2.0 * (pi - theta_a) * u;
            eval(-4.0 * c_hi * s * s, jac, out);
        };
        accumulate(integrate_vector(f, dim, breaks, opt));
    }
    return res;
}

} // namespace latdisp
