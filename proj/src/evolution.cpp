#include "latdisp/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "latdisp/error.hpp"
#include "latdisp/oscillatory.hpp"

namespace latdisp {

namespace {

constexpr double pi = std::numbers::pi;

std::mutex fftw_plan_mutex; // FFTW planning is not thread-safe

// Smallest 2^a 3^b >= n.
int smooth_size(int n)
{
    int best = 1;
    while (best < n) best *= 2;
    for (int p3 = 1; p3 < best; p3 *= 3)
        for (int m = p3; m < best; m *= 2)
            if (m >= n) best = std::min(best, m);
    return best;
}

} // namespace

cplx kernel_Kt(int j, double t, double tol)
{
    if (!(tol > 0.0)) throw InvalidArgument("kernel_Kt needs tol > 0");
    static const PhaseFunction phase = lattice_dispersion_phase();
    const Weight w = [](double) { return cplx(0.5 / pi); };
    return osc_integral(phase, w, t, -static_cast<double>(j), tol).value;
}

std::vector<cplx> kernel_row(double t, int jmax)
{
    if (jmax < 0) throw InvalidArgument("kernel_row needs jmax >= 0");
    // |K_t(j)| is below 1e-20 once |j| exceeds 2|t| + 12|t|^{1/3} + 30.
    const double reach = 2.0 * std::abs(t) + 12.0 * std::cbrt(std::abs(t)) + 30.0;
    const int m = smooth_size(static_cast<int>(std::ceil(jmax + reach)) + jmax + 2);

    std::vector<cplx> data(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double s = std::sin(pi * k / m);
        const double arg = -4.0 * t * s * s;
        data[static_cast<std::size_t>(k)] = cplx(std::cos(arg), std::sin(arg)) / static_cast<double>(m);
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    // backward DFT: Σ_k e^{+2πi jk/m} f_k, i.e. the e^{ijξ} factor
    std::vector<cplx> row(static_cast<std::size_t>(2 * jmax + 1));
    for (int j = -jmax; j <= jmax; ++j)
        row[static_cast<std::size_t>(j + jmax)] = data[static_cast<std::size_t>(((j % m) + m) % m)];
    return row;
}

double kernel_sup(double t)
{
    const int jmax = static_cast<int>(std::ceil(2.0 * std::abs(t) + 12.0 * std::cbrt(std::abs(t)) + 30.0));
    const auto row = kernel_row(t, jmax);
    double s = 0.0;
    for (const auto& v : row) s = std::max(s, std::abs(v));
    return s;
}

SpectralPropagator::SpectralPropagator(const TruncatedOperator& op) : op_(op), eig_(eigensystem(op, true)) {}

LatticeState SpectralPropagator::evolve(const LatticeState& phi, double t) const
{
    const double ts[1] = {t};
    return evolve(phi, std::span<const double>(ts)).front();
}

std::vector<LatticeState> SpectralPropagator::evolve(const LatticeState& phi, std::span<const double> times) const
{
    if (phi.half_width() != op_.half_width || phi.includes_origin() != op_.includes_origin())
        throw InvalidArgument("initial state does not match the operator's index set");
    const auto n = static_cast<Eigen::Index>(op_.dim());
    const auto nt = static_cast<Eigen::Index>(times.size());
    const Eigen::MatrixXd& q = eig_.vectors;

    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re(i) = phi.amplitudes()[static_cast<std::size_t>(i)].real();
        im(i) = phi.amplitudes()[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::VectorXd cre = q.transpose() * re;
    const Eigen::VectorXd cim = q.transpose() * im;

    Eigen::MatrixXd bre(n, nt), bim(n, nt);
    for (Eigen::Index k = 0; k < nt; ++k) {
        const double t = times[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = t * eig_.values(i);
            const double c = std::cos(a), s = std::sin(a);
            bre(i, k) = c * cre(i) - s * cim(i);
            bim(i, k) = s * cre(i) + c * cim(i);
        }
    }
    const Eigen::MatrixXd ure = q * bre;
    const Eigen::MatrixXd uim = q * bim;

    std::vector<LatticeState> out;
    out.reserve(times.size());
    for (Eigen::Index k = 0; k < nt; ++k) {
        LatticeState u(op_.half_width, op_.includes_origin(), times[static_cast<std::size_t>(k)]);
        for (Eigen::Index i = 0; i < n; ++i) u.amplitudes()[static_cast<std::size_t>(i)] = cplx(ure(i, k), uim(i, k));
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<LatticeState> evolve_spectral(const TruncatedOperator& op, const LatticeState& phi,
                                          std::span<const double> times)
{
    return SpectralPropagator(op).evolve(phi, times);
}

LatticeState evolve_equal_coeffs(const JunctionParams& params, const LatticeState& phi, double t, double tol)
{
    if (!(tol > 0.0)) throw InvalidArgument("evolve_equal_coeffs needs tol > 0");
    if (std::abs(params.b1() - params.b2()) > 1e-14 * params.b1())
        throw InvalidArgument("the Dirichlet/Neumann route needs b1 == b2");
    if (phi.includes_origin())
        throw InvalidArgument("the Dirichlet/Neumann route works on Z* (no origin site)");
    const int n = phi.half_width();

    // odd and even parts, indexed by k = 1..N
    std::vector<cplx> d0(static_cast<std::size_t>(n + 1)), s0(static_cast<std::size_t>(n + 1));
    std::vector<int> support;
    for (int k = 1; k <= n; ++k) {
        d0[static_cast<std::size_t>(k)] = 0.5 * (phi[k] - phi[-k]);
        s0[static_cast<std::size_t>(k)] = 0.5 * (phi[k] + phi[-k]);
        if (phi[k] != cplx{} || phi[-k] != cplx{}) support.push_back(k);
    }

    // the equations carry b^-2 Δ_d: rescale time
    const double tau = t * params.coeff(1);
    const auto row = kernel_row(tau, 2 * n + 1);
    auto K = [&](int j) { return row[static_cast<std::size_t>(j + 2 * n + 1)]; };

    LatticeState out(n, false, t);
    for (int j = 1; j <= n; ++j) {
        cplx d = 0.0, s = 0.0;
        for (int k : support) {
            d += (K(j - k) - K(j + k)) * d0[static_cast<std::size_t>(k)];
            s += (K(k - j) + K(k + j - 1)) * s0[static_cast<std::size_t>(k)];
        }
        out[j] = s + d;
        out[-j] = s - d;
    }
    return out;
}

double DecayFit::constant() const { return std::exp(log_constant); }

DecayFit fit_decay(std::span<const DecaySample> curve, double t_min)
{
    if (!(t_min > 0.0)) throw InvalidArgument("fit_decay needs t_min > 0");
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : curve)
        if (s.t >= t_min && s.sup_norm > 0.0) pts.emplace_back(std::log(s.t), std::log(s.sup_norm));
    if (pts.size() < 10)
        throw InvalidArgument("fit_decay needs at least 10 samples with t >= t_min, got " +
                              std::to_string(pts.size()));
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    DecayFit f;
    f.exponent = sxy / sxx;
    f.log_constant = my - f.exponent * mx;
    double rss = 0;
    for (auto [x, y] : pts) {
        const double e = y - (f.log_constant + f.exponent * x);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / n);
    f.t_min = std::exp(pts.front().first);
    f.t_max = std::exp(pts.front().first);
    for (auto [x, y] : pts) {
        f.t_min = std::min(f.t_min, std::exp(x));
        f.t_max = std::max(f.t_max, std::exp(x));
    }
    f.sample_count = static_cast<int>(pts.size());
    return f;
}

std::vector<double> geometric_grid(double a, double b, int per_decade)
{
    if (!(a > 0.0 && b > a) || per_decade < 1) throw InvalidArgument("geometric grid needs 0 < a < b, per_decade >= 1");
    const int n = std::max(2, static_cast<int>(std::lround(std::log10(b / a) * per_decade)) + 1);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    g.back() = b;
    return g;
}

std::vector<DecaySample> decay_curve(const JunctionParams& params, Variant variant, int site,
                                     std::span<const double> times)
{
    if (times.empty()) return {};
    double tmax = 0.0;
    for (double t : times) tmax = std::max(tmax, std::abs(t));
    const double cmax = variant == Variant::FreeLaplacian ? 1.0 : params.max_coeff();
    const int n = reflection_safe_half_width(std::abs(site), cmax, tmax);
    const auto op = build_operator(params, variant, n);
    const auto phi = LatticeState::delta(n, op.includes_origin(), site);
    const auto states = evolve_spectral(op, phi, times);
    std::vector<DecaySample> out;
    for (const auto& u : states) out.push_back({u.time(), u.norm_inf(), u.norm2()});
    return out;
}

std::vector<DecaySample> kernel_decay_curve(std::span<const double> times)
{
    std::vector<DecaySample> out(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < times.size(); ++i) out[i] = {times[i], kernel_sup(times[i]), 1.0};
    return out;
}

} // namespace latdisp
