#pragma once

// Adaptive Gauss–Kronrod (G10/K21) quadrature for complex scalar and
// complex vector integrands.  Panels are accepted on a local criterion
// err <= tol * width / total_width, so nothing but the running sum is stored;
// vector integrands with thousands of components stay cheap.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "latdisp/error.hpp"

namespace latdisp {

namespace gk21 {
extern const std::array<double, 11> nodes;         // Kronrod abscissae, descending, last is 0
extern const std::array<double, 11> kronrod_weights;
extern const std::array<double, 5> gauss_weights;  // for nodes[1], nodes[3], ..., nodes[9]
} // namespace gk21

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    std::size_t max_panels = 400000;
    /// Panels narrower than this fraction of the whole range are accepted as they are.
    double min_relative_width = 1e-13;
};

template <class T>
struct QuadratureResult {
    T value{};
    double error_estimate = 0.0;
    std::size_t panels = 0;
    std::size_t unresolved_panels = 0;
};

/// Split [a, b] into panels whose accumulated phase ∫|freq| stays below
/// max_phase.  freq_bound(x) is a local bound on |d(phase)/dx|; it is sampled
/// on each candidate panel.
std::vector<double> oscillation_partition(const std::function<double(double)>& freq_bound,
                                          double a, double b, double max_phase);

/// Sorted union of the points with duplicates (within 1e-15 relative) removed.
std::vector<double> merge_breakpoints(std::vector<double> pts);

namespace detail {

struct Panel {
    double a;
    double b;
};

template <class F>
void gk21_scalar(F& f, double a, double b, std::complex<double>& k_out, double& err_out)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const std::complex<double> fc = f(c);
    std::complex<double> res_k = fc * gk21::kronrod_weights[10];
    std::complex<double> res_g = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double dx = h * gk21::nodes[static_cast<std::size_t>(i)];
        const std::complex<double> s = f(c - dx) + f(c + dx);
        res_k += gk21::kronrod_weights[static_cast<std::size_t>(i)] * s;
        if (i % 2 == 1) res_g += gk21::gauss_weights[static_cast<std::size_t>(i / 2)] * s;
    }
    k_out = res_k * h;
    err_out = std::abs((res_k - res_g) * h);
}

} // namespace detail

/// ∫ f over the union of consecutive breakpoint intervals.
template <class F>
QuadratureResult<std::complex<double>> integrate(F&& f, std::span<const double> breakpoints,
                                                 const QuadratureOptions& opt = {})
{
    QuadratureResult<std::complex<double>> out;
    if (breakpoints.size() < 2) return out;
    const double total = breakpoints.back() - breakpoints.front();
    if (total == 0.0) return out;

    // First pass: coarse estimate of |∫| for the relative criterion.
    std::vector<detail::Panel> stack;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (breakpoints[i + 1] > breakpoints[i]) stack.push_back({breakpoints[i], breakpoints[i + 1]});
    std::reverse(stack.begin(), stack.end());

    double scale = 0.0;
    if (opt.rel_tol > 0.0) {
        std::complex<double> s = 0.0;
        for (const auto& p : stack) {
            std::complex<double> k;
            double e;
            detail::gk21_scalar(f, p.a, p.b, k, e);
            s += k;
        }
        scale = std::abs(s);
    }
    const double tol = std::max(opt.abs_tol, opt.rel_tol * scale);

    while (!stack.empty()) {
        const detail::Panel p = stack.back();
        stack.pop_back();
        std::complex<double> k;
        double e;
        detail::gk21_scalar(f, p.a, p.b, k, e);
        const double w = p.b - p.a;
        const bool tiny = w <= opt.min_relative_width * std::abs(total);
        if (e <= tol * w / std::abs(total) || tiny) {
            out.value += k;
            out.error_estimate += e;
            ++out.panels;
            if (tiny && e > tol * w / std::abs(total)) ++out.unresolved_panels;
            continue;
        }
        if (out.panels + stack.size() >= opt.max_panels)
            throw NumericalError("adaptive quadrature exceeded its subdivision budget of " +
                                 std::to_string(opt.max_panels) + " panels");
        const double m = 0.5 * (p.a + p.b);
        stack.push_back({m, p.b});
        stack.push_back({p.a, m});
    }
    return out;
}

/// Vector-valued version; f(x, out) fills out (size dim).  The error test uses
/// the max-abs component.
template <class F>
QuadratureResult<std::vector<std::complex<double>>>
integrate_vector(F&& f, std::size_t dim, std::span<const double> breakpoints,
                 const QuadratureOptions& opt = {})
{
    using cplx = std::complex<double>;
    QuadratureResult<std::vector<cplx>> out;
    out.value.assign(dim, cplx{});
    if (breakpoints.size() < 2) return out;
    const double total = std::abs(breakpoints.back() - breakpoints.front());
    if (total == 0.0) return out;

    std::vector<detail::Panel> stack;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (breakpoints[i + 1] > breakpoints[i]) stack.push_back({breakpoints[i], breakpoints[i + 1]});
    std::reverse(stack.begin(), stack.end());

    std::vector<cplx> fv(dim), res_k(dim), res_g(dim), tmp(dim);
    auto eval_panel = [&](double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        f(c, std::span<cplx>(fv));
        for (std::size_t k = 0; k < dim; ++k) {
            res_k[k] = fv[k] * gk21::kronrod_weights[10];
            res_g[k] = 0.0;
        }
        for (int i = 0; i < 10; ++i) {
            const double dx = h * gk21::nodes[static_cast<std::size_t>(i)];
            f(c - dx, std::span<cplx>(fv));
            f(c + dx, std::span<cplx>(tmp));
            const double wk = gk21::kronrod_weights[static_cast<std::size_t>(i)];
            const double wg = (i % 2 == 1) ? gk21::gauss_weights[static_cast<std::size_t>(i / 2)] : 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const cplx s = fv[k] + tmp[k];
                res_k[k] += wk * s;
                res_g[k] += wg * s;
            }
        }
        double err = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            res_k[k] *= h;
            err = std::max(err, std::abs(res_k[k] - res_g[k] * h));
        }
        return err;
    };

    const double tol = opt.abs_tol;
    while (!stack.empty()) {
        const detail::Panel p = stack.back();
        stack.pop_back();
        const double e = eval_panel(p.a, p.b);
        const double w = p.b - p.a;
        const bool tiny = w <= opt.min_relative_width * total;
        if (e <= tol * w / total || tiny) {
            for (std::size_t k = 0; k < dim; ++k) out.value[k] += res_k[k];
            out.error_estimate += e;
            ++out.panels;
            if (tiny && e > tol * w / total) ++out.unresolved_panels;
            continue;
        }
        if (out.panels + stack.size() >= opt.max_panels)
            throw NumericalError("adaptive vector quadrature exceeded its subdivision budget of " +
                                 std::to_string(opt.max_panels) + " panels");
        const double m = 0.5 * (p.a + p.b);
        stack.push_back({m, p.b});
        stack.push_back({p.a, m});
    }
    return out;
}

} // namespace latdisp
