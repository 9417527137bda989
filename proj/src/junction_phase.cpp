#include "latdisp/junction_phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "latdisp/error.hpp"
#include "latdisp/quadrature.hpp"

namespace latdisp {

namespace {

constexpr double pi = std::numbers::pi;

// q(π − h) − q(π) and r(π − h) − r(π) without cancellation; even in h.
double delta_r(double a, double h)
{
    const double c = std::cos(0.5 * h);
    const double s = std::sin(0.5 * h);
    const double root = std::sqrt(1.0 - a * a);
    const double den = a * c * root + a * std::sqrt(1.0 - a * a * c * c);
    return 2.0 * std::asin(-a * a * s * s / den);
}

double delta_q(double a, double h)
{
    const double s = std::sin(0.5 * h);
    return 4.0 * s * s + (4.0 * std::sqrt(1.0 - a * a) / a) * delta_r(a, h);
}

// Least-squares fit of y(h)/h^lead = Σ_k c_k h^{2k}; returns (c_0, c_1).
std::pair<double, double> even_fit(const std::function<double(double)>& f, int lead, double hmax)
{
    constexpr int samples = 80;
    constexpr int terms = 7;
    Eigen::MatrixXd m(samples, terms);
    Eigen::VectorXd rhs(samples);
    const double umax = hmax * hmax;
    for (int i = 0; i < samples; ++i) {
        const double h = hmax * (0.05 + 0.95 * i / (samples - 1.0));
        const double u = h * h / umax;
        double pw = 1.0;
        for (int k = 0; k < terms; ++k) {
            m(i, k) = pw;
            pw *= u;
        }
        rhs(i) = f(h) / std::pow(h, lead);
    }
    const Eigen::VectorXd c = m.colPivHouseholderQr().solve(rhs);
    return {c(0), c(1) / umax};
}

double fd_derivative(const std::function<double(double)>& f, double x0, int order, double h)
{
    const int half = 4;
    const auto w = central_difference_weights(order, half, h);
    double s = 0.0;
    for (int i = -half; i <= half; ++i) s += w[static_cast<std::size_t>(i + half)] * f(x0 + i * h);
    return s;
}

} // namespace

JunctionPhase::JunctionPhase(double a, double z) : a_(a), z_(z)
{
    if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("junction phase needs a in (0, 1]");
    if (!std::isfinite(z)) throw InvalidArgument("junction phase needs finite z");
    z_star_ = 4.0 * std::sqrt(1.0 - a * a) / a;
}

Derivs5 JunctionPhase::g(double theta) const
{
    if (a_ == 1.0) return {0.5 * theta, 0.5, 0.0, 0.0, 0.0};
    const double s = a_ * std::sin(0.5 * theta);
    const double s1 = 0.5 * a_ * std::cos(0.5 * theta);
    const double s2 = -0.25 * s;
    const double s3 = -0.25 * s1;
    const double s4 = s / 16.0;
    const double u = 1.0 - s * s;
    const double A1 = 1.0 / std::sqrt(u);
    const double A2 = s * A1 / u;
    const double A3 = (1.0 + 2.0 * s * s) * A1 / (u * u);
    const double A4 = s * (9.0 + 6.0 * s * s) * A1 / (u * u * u);
    Derivs5 d;
    d.v = std::asin(s);
    d.d1 = A1 * s1;
    d.d2 = A2 * s1 * s1 + A1 * s2;
    d.d3 = A3 * s1 * s1 * s1 + 3.0 * A2 * s1 * s2 + A1 * s3;
    d.d4 = A4 * s1 * s1 * s1 * s1 + 6.0 * A3 * s1 * s1 * s2 + A2 * (3.0 * s2 * s2 + 4.0 * s1 * s3) + A1 * s4;
    return d;
}

namespace {
Derivs5 cos_plus(double theta, double z, const Derivs5& g)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {2.0 * c + 2.0 * z * g.v, -2.0 * s + 2.0 * z * g.d1, -2.0 * c + 2.0 * z * g.d2,
            2.0 * s + 2.0 * z * g.d3, 2.0 * c + 2.0 * z * g.d4};
}
} // namespace

Derivs5 JunctionPhase::p(double theta) const { return cos_plus(theta, z_, g(theta)); }
Derivs5 JunctionPhase::q(double theta) const { return cos_plus(theta, z_star_, g(theta)); }

Derivs5 JunctionPhase::r(double theta) const
{
    const Derivs5 d = g(theta);
    return {2.0 * d.v, 2.0 * d.d1, 2.0 * d.d2, 2.0 * d.d3, 2.0 * d.d4};
}

PhaseFunction JunctionPhase::as_phase(double lo, double hi) const
{
    PhaseFunction ph;
    ph.name = "junction(a=" + std::to_string(a_) + ",z=" + std::to_string(z_) + ")";
    ph.lo = lo;
    ph.hi = hi;
    const JunctionPhase self = *this;
    ph.value = [self](double th) { return self.p(th).v; };
    ph.derivs = [self](double th) {
        const Derivs5 d = self.p(th);
        return PhaseDerivs{d.d1, d.d2, d.d3, d.d4};
    };
    ph.cls = PhaseClass::A3;
    return ph;
}

std::vector<double> JunctionPhase::critical_points(int scan) const
{
    std::vector<double> th(static_cast<std::size_t>(scan + 1)), v(th.size());
    for (int i = 0; i <= scan; ++i) {
        th[static_cast<std::size_t>(i)] = pi * i / scan;
        v[static_cast<std::size_t>(i)] = p(th[static_cast<std::size_t>(i)]).d2;
    }
    std::vector<double> out{pi};
    auto f2 = [&](double x) { return p(x).d2; };
    for (std::size_t i = 0; i + 1 < th.size(); ++i) {
        if (v[i] == 0.0) {
            out.push_back(th[i]);
        } else if (v[i] * v[i + 1] < 0.0) {
            double lo = th[i], hi = th[i + 1], flo = v[i];
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f2(mid);
                if (fm * flo > 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
        }
        // interior local minima of |p″| that do not cross zero
        if (i > 0 && std::abs(v[i]) < std::abs(v[i - 1]) && std::abs(v[i]) <= std::abs(v[i + 1]) &&
            v[i - 1] * v[i + 1] > 0.0) {
            double lo = th[i - 1], hi = th[i + 1];
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            for (int it = 0; it < 100; ++it) {
                const double x1 = hi - gr * (hi - lo);
                const double x2 = lo + gr * (hi - lo);
                if (std::abs(f2(x1)) < std::abs(f2(x2)))
                    hi = x2;
                else
                    lo = x1;
            }
            out.push_back(0.5 * (lo + hi));
        }
    }
    return merge_breakpoints(std::move(out));
}

JunctionReport junction_phase_report(double a, std::span<const double> z_grid, double delta,
                                     std::span<const double> t_grid, std::span<const double> y_grid,
                                     const JunctionOptions& opt)
{
    if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("junction_phase_report needs a in (0, 1]");
    if (!(delta >= 0.0 && delta < pi)) throw InvalidArgument("junction_phase_report needs delta in [0, pi)");
    if (z_grid.empty() || t_grid.empty() || y_grid.empty())
        throw InvalidArgument("junction_phase_report needs nonempty z, t and y grids");

    JunctionReport rep;
    rep.a = a;
    rep.z_star = JunctionPhase(a, 0.0).z_star();
    rep.delta = delta;
    rep.quartic_case = std::abs(a - 1.0 / std::numbers::sqrt2) < 1e-12;

    std::vector<double> ts;
    for (double t : t_grid)
        if (t >= 1.0) ts.push_back(t);

    const Weight sine = [](double th) { return std::complex<double>(std::sin(th)); };
    const Weight one = [](double) { return std::complex<double>(1.0); };

    for (double z : z_grid) {
        const JunctionPhase jp(a, z);
        const PhaseFunction ph = jp.as_phase();
        const auto crit = jp.critical_points();
        std::vector<double> crit_slopes;
        for (double c : crit) crit_slopes.push_back(jp.p(c).d1);

        for (int which : {1, 2}) {
            const double lo = which == 1 ? delta : 0.0;
            const double hi = which == 1 ? pi : pi - delta;
            const Weight& w = which == 1 ? sine : one;

            // t = 0: unimodular integrand, |I| <= |Ω| |ψ|_∞
            for (double y : y_grid) {
                const auto r = osc_integral_on(ph, w, 0.0, -y, lo, hi, crit, opt.tol);
                const double ratio = std::abs(r.value) / (hi - lo);
                rep.t0_worst_ratio = std::max(rep.t0_worst_ratio, ratio);
            }
            if (ts.empty()) continue;

            struct Job {
                double t, x;
            };
            // the bound is a sup over all real y: also place a stationary
            // point at evenly spread θ, not only where the y grid happens to
            std::vector<double> slopes = crit_slopes;
            for (int k = 0; k < opt.stationary_samples; ++k)
                slopes.push_back(jp.p(lo + (hi - lo) * (k + 0.5) / opt.stationary_samples).d1);
            std::vector<Job> jobs;
            for (double t : ts) {
                for (double y : y_grid) jobs.push_back({t, -y});
                // stationary where t p′(θc) + y = 0, i.e. x = −y = t p′(θc)
                for (double s : slopes) jobs.push_back({t, t * s});
            }
            std::vector<ScanSample> samples(jobs.size());
            std::string failure;
#pragma omp parallel for schedule(dynamic)
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                try {
                    const auto r = osc_integral_on(ph, w, jobs[i].t, jobs[i].x, lo, hi, crit, opt.tol);
                    const double v = std::abs(r.value);
                    samples[i] = {jobs[i].t, -jobs[i].x, v, v * std::cbrt(jobs[i].t)};
                } catch (const std::exception& e) {
#pragma omp critical
                    failure = e.what();
                }
            }
            if (!failure.empty()) throw NumericalError(failure);

            JunctionRow row;
            row.z = z;
            row.integral = which;
            std::vector<double> scaled;
            for (double t : ts) {
                ScanSample best{t, 0.0, -1.0, 0.0};
                for (const auto& s : samples)
                    if (s.t == t && s.abs_value > best.abs_value) best = s;
                row.sup_rows.push_back(best);
                scaled.push_back(best.scaled);
                row.empirical_constant = std::max(row.empirical_constant, best.scaled);
            }
            if (ts.size() >= 2) {
                row.verdict = assess_boundedness(ts, scaled, opt.slope_tol, opt.ratio_limit);
                // an upper bound: only growth counts against it
                row.verdict.bounded = row.verdict.slope <= opt.slope_tol && row.verdict.max_over_median <= opt.ratio_limit;
                row.certified = row.verdict.bounded;
            }
            rep.rows.push_back(std::move(row));
        }
    }
    rep.t0_ok = rep.t0_worst_ratio <= 1.0 + 1e-12;
    rep.certified = rep.t0_ok && !rep.rows.empty() &&
                    std::all_of(rep.rows.begin(), rep.rows.end(), [](const JunctionRow& r) { return r.certified; });
    return rep;
}

double printed_lower_bound(double a, double z, BoundReading reading)
{
    const double zs = 4.0 * std::sqrt(1.0 - a * a) / a;
    const double e = a * a - 1.0;
    const double m = z * z * a * a * e;
    const double first = 4.0 + (reading == BoundReading::Spec ? z * z * a * a * e * e : m * m) / 16.0;
    const double second = a * a / (4.0 * (1.0 - a * a)) * (z - zs) * (z - zs);
    return std::min(first, second);
}

double coefficient_mismatch(double fit, double printed)
{
    if (printed == 0.0) return std::abs(fit);
    return std::abs(fit - printed) / std::abs(printed);
}

PhaseAlgebraReport verify_phase_algebra(double a, int grid)
{
    if (!(a > 0.0 && a < 1.0)) throw InvalidArgument("verify_phase_algebra needs a in (0, 1)");
    if (grid < 2) throw InvalidArgument("verify_phase_algebra needs grid >= 2");
    PhaseAlgebraReport rep;
    rep.a = a;
    const JunctionPhase base(a, 0.0);
    rep.z_star = base.z_star();

    // (i) printed lower bound on the (θ, z) grid
    rep.global_min_value = std::numeric_limits<double>::infinity();
    for (int iz = 0; iz < grid; ++iz) {
        const double z = 2.0 * rep.z_star * iz / (grid - 1);
        const JunctionPhase jp(a, z);
        const double bound = printed_lower_bound(a, z);
        const double grouped = printed_lower_bound(a, z, BoundReading::Grouped);
        BoundViolation worst{z, 0.0, std::numeric_limits<double>::infinity(), bound};
        bool violated = false;
        for (int it = 0; it < grid; ++it) {
            const double th = pi * it / (grid - 1);
            const Derivs5 d = jp.p(th);
            const double v = d.d2 * d.d2 + d.d3 * d.d3;
            ++rep.grid_points;
            if (v < rep.global_min_value) {
                rep.global_min_value = v;
                rep.global_min_theta = th;
                rep.global_min_z = z;
            }
            // the bound is attained at θ = π, z ≠ z*: compare with a rounding allowance
            if (v < grouped * (1.0 - 1e-10)) ++rep.violations_grouped;
            if (v < bound * (1.0 - 1e-10)) {
                ++rep.violations;
                violated = true;
            }
            if (v < worst.value) {
                worst.value = v;
                worst.theta = th;
            }
        }
        if (violated) rep.worst.push_back(worst);
    }

    // q″(π), q‴(π) by finite differences of the cancellation-free q(θ) − q(π)
    auto dq = [a](double th) { return delta_q(a, pi - th); };
    const double hfd = 1e-2;
    rep.q2_at_pi = fd_derivative(dq, pi, 2, hfd);
    rep.q3_at_pi = fd_derivative(dq, pi, 3, hfd);

    // (ii)/(iii) Taylor fits
    const double hmax = std::min(0.5, 0.25 * 2.0 * std::acosh(1.0 / a));
    const double ra = std::sqrt(1.0 - a * a);
    rep.c4_printed = -(2.0 * a * a - 1.0) / (16.0 * (a * a - 1.0));
    rep.c6_printed = -(4.0 * a * a - 1.0) / (384.0 * (a * a - 1.0) * (a * a - 1.0));
    rep.r2_printed = -a / (4.0 * ra);
    rep.r4_printed = a * (2.0 * a * a + 1.0) / (192.0 * ra * ra * ra);
    rep.r_second_printed = -a / (2.0 * ra);
    std::tie(rep.c4_fit, rep.c6_fit) = even_fit([a](double h) { return delta_q(a, h); }, 4, hmax);
    std::tie(rep.r2_fit, rep.r4_fit) = even_fit([a](double h) { return delta_r(a, h); }, 2, hmax);
    auto dr = [a](double th) { return delta_r(a, pi - th); };
    rep.r_second_at_pi = fd_derivative(dr, pi, 2, hfd);

    // (iv) separation of (q″, q‴) from (0, 0) away from π
    for (double delta : {0.1, 0.01}) {
        constexpr int n = 20000;
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i) {
            const double th = (pi - delta) * i / n;
            const Derivs5 d = base.q(th);
            m = std::min(m, std::abs(d.d2) + std::abs(d.d3));
        }
        rep.q_separation.emplace_back(delta, m);
    }
    return rep;
}

} // namespace latdisp
