#include "latdisp/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "latdisp/error.hpp"
#include "latdisp/quadrature.hpp"

namespace latdisp {

namespace {
constexpr double pi = std::numbers::pi;
}

PhaseFunction power_phase(int power, double lo, double hi)
{
    if (power < 2) throw InvalidArgument("power_phase needs power >= 2");
    if (!(hi > lo)) throw InvalidArgument("power_phase needs lo < hi");
    const double p = power;
    PhaseFunction ph;
    ph.name = "xi^" + std::to_string(power);
    ph.lo = lo;
    ph.hi = hi;
    ph.value = [p](double x) { return std::pow(x, p); };
    ph.derivs = [power, p](double x) {
        auto term = [&](int k) {
            if (power < k) return 0.0;
            double c = 1.0;
            for (int i = 0; i < k; ++i) c *= (p - i);
            return c * std::pow(x, p - k);
        };
        return PhaseDerivs{term(1), term(2), term(3), term(4)};
    };
    const double reach = std::max(std::abs(lo), std::abs(hi));
    if (power == 2) {
        ph.cls = PhaseClass::A2;
    } else if (power == 3) {
        ph.cls = PhaseClass::A2;
        if (lo <= 0.0 && 0.0 <= hi) ph.stationary.push_back({0.0, 3.0, 6.0, 6.0, reach});
    } else {
        ph.cls = PhaseClass::A3;
        const double c = p * (p - 1) * (p - 2);
        if (lo <= 0.0 && 0.0 <= hi) ph.stationary.push_back({0.0, p, c, c, reach});
    }
    return ph;
}

PhaseFunction lattice_dispersion_phase()
{
    PhaseFunction ph;
    ph.name = "-4sin^2(xi/2)";
    ph.lo = -pi;
    ph.hi = pi;
    ph.value = [](double x) {
        const double s = std::sin(0.5 * x);
        return -4.0 * s * s;
    };
    ph.derivs = [](double x) {
        return PhaseDerivs{-2.0 * std::sin(x), -2.0 * std::cos(x), 2.0 * std::sin(x), 2.0 * std::cos(x)};
    };
    // φ″ = −2cos ξ vanishes linearly at ±π/2; 2|cos ξ| / |ξ − ξ0| ∈ [2 sin(0.5)/0.5, 2] within 0.5
    ph.cls = PhaseClass::A2;
    ph.stationary.push_back({-0.5 * pi, 3.0, 1.9, 2.0, 0.5});
    ph.stationary.push_back({0.5 * pi, 3.0, 1.9, 2.0, 0.5});
    return ph;
}

std::vector<double> central_difference_weights(int derivative, int half_points, double h)
{
    // Fornberg's recursion for weights at 0 on nodes −p..p.
    const int n = 2 * half_points + 1;
    if (derivative < 0 || derivative >= n) throw InvalidArgument("stencil too small for derivative");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = i - half_points;
    const int m = derivative;
    std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                        c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                              c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) / c2;
                c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                    (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
                     k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) / c3;
            c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<std::size_t>(n));
    const double scale = std::pow(h, -m);
    for (int i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] * scale;
    return w;
}

double derivative_consistency(const PhaseFunction& phase, int samples)
{
    const double h = 1e-4 * std::max(1.0, phase.length());
    const auto w = central_difference_weights(1, 3, h);
    auto fd = [&](auto&& f, double x) {
        double s = 0.0;
        for (int i = -3; i <= 3; ++i) s += w[static_cast<std::size_t>(i + 3)] * f(x + i * h);
        return s;
    };
    double worst = 0.0;
    for (int s = 1; s <= samples; ++s) {
        const double x = phase.lo + (phase.hi - phase.lo) * s / (samples + 1.0);
        const PhaseDerivs d = phase.derivs(x);
        const double pairs[4][2] = {
            {d.d1, fd(phase.value, x)},
            {d.d2, fd([&](double y) { return phase.derivs(y).d1; }, x)},
            {d.d3, fd([&](double y) { return phase.derivs(y).d2; }, x)},
            {d.d4, fd([&](double y) { return phase.derivs(y).d3; }, x)},
        };
        for (const auto& pr : pairs) {
            const double scale = std::max(1.0, std::abs(pr[0]));
            worst = std::max(worst, std::abs(pr[0] - pr[1]) / scale);
        }
    }
    return worst;
}

ClassificationCheck check_classification(const PhaseFunction& phase, int samples)
{
    ClassificationCheck out;
    out.worst_lower_ratio = std::numeric_limits<double>::infinity();
    out.worst_upper_ratio = 0.0;
    if (phase.cls == PhaseClass::None || phase.stationary.empty()) {
        out.worst_lower_ratio = 1.0;
        return out;
    }
    const int k = phase.cls == PhaseClass::A2 ? 2 : 3;
    for (const auto& sp : phase.stationary) {
        for (int s = 1; s <= samples; ++s) {
            const double off = sp.eps * s / samples;
            for (double sign : {-1.0, 1.0}) {
                const double x = sp.location + sign * off;
                if (x < phase.lo || x > phase.hi) continue;
                const PhaseDerivs d = phase.derivs(x);
                const double v = std::abs(k == 2 ? d.d2 : d.d3);
                const double base = std::pow(off, sp.alpha - k);
                out.worst_lower_ratio = std::min(out.worst_lower_ratio, v / (sp.c1 * base));
                out.worst_upper_ratio = std::max(out.worst_upper_ratio, v / (sp.c2 * base));
            }
        }
    }
    out.ok = out.worst_lower_ratio >= 1.0 - 1e-12 && out.worst_upper_ratio <= 1.0 + 1e-12;
    return out;
}

OscResult osc_integral_on(const PhaseFunction& phase, const Weight& weight, double t, double x,
                          double lo, double hi, std::span<const double> extra_breaks, double tol)
{
    if (!(tol > 0.0)) throw InvalidArgument("osc_integral needs tol > 0");
    if (lo < phase.lo - 1e-14 || hi > phase.hi + 1e-14 || !(hi >= lo))
        throw InvalidArgument("integration range lies outside the phase domain");
    if (hi == lo) return {};

    std::vector<double> breaks{lo, hi};
    for (const auto& sp : phase.stationary)
        if (sp.location > lo && sp.location < hi) breaks.push_back(sp.location);
    for (double b : extra_breaks)
        if (b > lo && b < hi) breaks.push_back(b);
    breaks = merge_breakpoints(std::move(breaks));

    auto freq = [&](double xi) { return std::abs(t * phase.derivs(xi).d1 - x); };
    std::vector<double> panels{breaks.front()};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto part = oscillation_partition(freq, breaks[i], breaks[i + 1], 2.0 * pi);
        panels.insert(panels.end(), part.begin() + 1, part.end());
    }

    auto integrand = [&](double xi) {
        const double arg = t * phase.value(xi) - x * xi;
        return std::complex<double>(std::cos(arg), std::sin(arg)) * weight(xi);
    };
    QuadratureOptions opt;
    opt.abs_tol = tol;
    const auto r = integrate(integrand, panels, opt);
    return {r.value, r.error_estimate, r.panels};
}

OscResult osc_integral(const PhaseFunction& phase, const Weight& weight, double t, double x, double tol)
{
    return osc_integral_on(phase, weight, t, x, phase.lo, phase.hi, {}, tol);
}

std::string to_string(WeightKind k)
{
    switch (k) {
    case WeightKind::One: return "one";
    case WeightKind::HalfPowerSecond: return "half_power_second";
    case WeightKind::ThirdPowerThird: return "third_power_third";
    case WeightKind::Sine: return "sine";
    }
    return "?";
}

WeightKind parse_weight_kind(const std::string& name)
{
    if (name == "one") return WeightKind::One;
    if (name == "half_power_second") return WeightKind::HalfPowerSecond;
    if (name == "third_power_third") return WeightKind::ThirdPowerThird;
    if (name == "sine") return WeightKind::Sine;
    throw InvalidArgument("unknown weight kind '" + name + "'");
}

Weight make_weight(WeightKind kind, const PhaseFunction& phase)
{
    switch (kind) {
    case WeightKind::One: return [](double) { return std::complex<double>(1.0); };
    case WeightKind::Sine: return [](double x) { return std::complex<double>(std::sin(x)); };
    case WeightKind::HalfPowerSecond:
        return [d = phase.derivs](double x) { return std::complex<double>(std::sqrt(std::abs(d(x).d2))); };
    case WeightKind::ThirdPowerThird:
        return [d = phase.derivs](double x) { return std::complex<double>(std::cbrt(std::abs(d(x).d3))); };
    }
    throw InvalidArgument("unknown weight kind");
}

int decay_order(WeightKind kind, const PhaseFunction& phase)
{
    switch (kind) {
    case WeightKind::HalfPowerSecond: return 2;
    case WeightKind::ThirdPowerThird: return 3;
    default: break;
    }
    switch (phase.cls) {
    case PhaseClass::A2: return 2;
    case PhaseClass::A3: return 3;
    default: return 1;
    }
}

BoundednessVerdict assess_boundedness(std::span<const double> t, std::span<const double> scaled,
                                      double slope_tol, double ratio_limit)
{
    if (t.size() != scaled.size() || t.size() < 2)
        throw InvalidArgument("boundedness assessment needs at least two matching samples");
    const std::size_t n = t.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(t[i]);
        const double ly = std::log(std::max(scaled[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    BoundednessVerdict v;
    v.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    std::vector<double> sorted(scaled.begin(), scaled.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    v.max_over_median = sorted.back() / median;
    v.bounded = std::abs(v.slope) <= slope_tol && v.max_over_median <= ratio_limit;
    return v;
}

DecayCertificate certify_decay(const PhaseFunction& phase, WeightKind weight_kind,
                               std::span<const double> t_grid, std::span<const double> x_grid,
                               const CertifyOptions& opt)
{
    if (t_grid.empty() || x_grid.empty()) throw InvalidArgument("certify_decay needs nonempty grids");
    for (double t : t_grid)
        if (!(t >= 1.0)) throw InvalidArgument("certify_decay needs t >= 1 on the t grid");

    const Weight w = make_weight(weight_kind, phase);
    double wmax = 0.0;
    for (int i = 0; i <= 2000; ++i) wmax = std::max(wmax, std::abs(w(phase.lo + phase.length() * i / 2000.0)));
    if (wmax < 1e-14)
        throw InvalidArgument("weight " + to_string(weight_kind) + " vanishes identically for phase " +
                              phase.name + "; the phase is not a usable member of the required class");

    DecayCertificate cert;
    cert.k = decay_order(weight_kind, phase);

    struct Job {
        double t, x;
    };
    std::vector<Job> jobs;
    for (double t : t_grid) {
        std::vector<double> xs(x_grid.begin(), x_grid.end());
        for (const auto& sp : phase.stationary) xs.push_back(t * phase.derivs(sp.location).d1);
        // sup over all real x: a stationary point at evenly spread ξ as well
        for (int k = 0; k < opt.stationary_samples; ++k)
            xs.push_back(t * phase.derivs(phase.lo + phase.length() * (k + 0.5) / opt.stationary_samples).d1);
        for (double x : xs) jobs.push_back({t, x});
    }
    std::vector<ScanSample> samples(jobs.size());
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        try {
            const auto r = osc_integral(phase, w, jobs[i].t, jobs[i].x, opt.tol);
            const double a = std::abs(r.value);
            samples[i] = {jobs[i].t, jobs[i].x, a, a * std::pow(jobs[i].t, 1.0 / cert.k)};
        } catch (const std::exception& e) {
#pragma omp critical
            failure = e.what();
        }
    }
    if (!failure.empty()) throw NumericalError(failure);

    cert.samples = samples;
    std::vector<double> ts, scaled;
    for (double t : t_grid) {
        ScanSample best{t, 0.0, -1.0, 0.0};
        for (const auto& s : samples)
            if (s.t == t && s.abs_value > best.abs_value) best = s;
        cert.sup_rows.push_back(best);
        ts.push_back(t);
        scaled.push_back(best.scaled);
        cert.empirical_constant = std::max(cert.empirical_constant, best.scaled);
    }
    if (ts.size() >= 2) {
        cert.verdict = assess_boundedness(ts, scaled, opt.slope_tol, opt.ratio_limit);
        cert.certified = cert.verdict.bounded;
    }
    return cert;
}

} // namespace latdisp
