#include "latdisp/lattice_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <lapacke.h>

#include "latdisp/error.hpp"

namespace latdisp {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::Model1: return "model1";
    case Variant::Model2: return "model2";
    case Variant::FreeLaplacian: return "free";
    }
    return "?";
}

Variant parse_variant(std::string_view name)
{
    if (name == "model1") return Variant::Model1;
    if (name == "model2") return Variant::Model2;
    if (name == "free") return Variant::FreeLaplacian;
    throw InvalidArgument("unknown operator variant '" + std::string(name) +
                          "' (expected model1, model2 or free)");
}

JunctionParams::JunctionParams(double b1, double b2)
    : b1_(b1), b2_(b2)
{
    if (!(b1 > 0.0) || !(b2 > 0.0) || !std::isfinite(b1) || !std::isfinite(b2))
        throw InvalidArgument("coupling coefficients b1, b2 must be positive and finite");
    c1_ = 1.0 / (b1 * b1);
    c2_ = 1.0 / (b2 * b2);
}

// ---------------------------------------------------------------------------
// LatticeState

namespace {
std::size_t state_size(int half_width, bool origin)
{
    return static_cast<std::size_t>(2 * half_width + (origin ? 1 : 0));
}
} // namespace

LatticeState::LatticeState(int half_width, bool includes_origin, double time)
    : half_width_(half_width), includes_origin_(includes_origin), time_(time)
{
    if (half_width < 1)
        throw InvalidArgument("lattice half-width must be at least 1");
    amplitudes_.assign(state_size(half_width, includes_origin), cplx{});
}

LatticeState::LatticeState(int half_width, bool includes_origin, std::vector<cplx> amplitudes,
                           double time)
    : half_width_(half_width), includes_origin_(includes_origin), time_(time),
      amplitudes_(std::move(amplitudes))
{
    if (half_width < 1)
        throw InvalidArgument("lattice half-width must be at least 1");
    if (amplitudes_.size() != state_size(half_width, includes_origin))
        throw InvalidArgument("amplitude vector length does not match the index set");
}

LatticeState LatticeState::delta(int half_width, bool includes_origin, int site)
{
    LatticeState s(half_width, includes_origin);
    if (!s.contains(site))
        throw InvalidArgument("delta site " + std::to_string(site) + " is outside the lattice");
    s[site] = 1.0;
    return s;
}

bool LatticeState::contains(int site) const
{
    if (site == 0) return includes_origin_;
    return site >= -half_width_ && site <= half_width_;
}

std::size_t LatticeState::offset(int site) const
{
    if (includes_origin_ || site < 0)
        return static_cast<std::size_t>(site + half_width_);
    return static_cast<std::size_t>(site + half_width_ - 1);
}

int LatticeState::site(std::size_t offset) const
{
    const int o = static_cast<int>(offset);
    if (includes_origin_ || o < half_width_) return o - half_width_;
    return o - half_width_ + 1;
}

double LatticeState::norm1() const
{
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::abs(a);
    return s;
}

double LatticeState::norm2() const
{
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return std::sqrt(s);
}

double LatticeState::norm_inf() const
{
    double m = 0.0;
    for (const auto& a : amplitudes_) m = std::max(m, std::abs(a));
    return m;
}

double LatticeState::norm(double r) const
{
    if (std::isinf(r)) return norm_inf();
    if (r == 2.0) return norm2();
    if (r == 1.0) return norm1();
    if (!(r >= 1.0)) throw InvalidArgument("l^r norm needs r >= 1");
    // scale by the sup norm so large r does not underflow
    const double m = norm_inf();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::pow(std::abs(a) / m, r);
    return m * std::pow(s, 1.0 / r);
}

LatticeState LatticeState::conj() const
{
    LatticeState out = *this;
    for (auto& a : out.amplitudes_) a = std::conj(a);
    return out;
}

LatticeState LatticeState::resized(int new_half_width) const
{
    LatticeState out(new_half_width, includes_origin_, time_);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const int j = out.site(k);
        if (contains(j)) out.amplitudes_[k] = (*this)[j];
    }
    return out;
}

// ---------------------------------------------------------------------------
// TruncatedOperator

int TruncatedOperator::site(std::size_t offset) const
{
    const int o = static_cast<int>(offset);
    if (includes_origin() || o < half_width) return o - half_width;
    return o - half_width + 1;
}

void TruncatedOperator::apply(std::span<const cplx> x, std::span<cplx> y) const
{
    const std::size_t n = dim();
    if (x.size() != n || y.size() != n)
        throw InvalidArgument("operator/state dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        cplx acc = diag[i] * x[i];
        if (i > 0) acc += offdiag[i - 1] * x[i - 1];
        if (i + 1 < n) acc += offdiag[i] * x[i + 1];
        y[i] = acc;
    }
}

LatticeState TruncatedOperator::apply(const LatticeState& x) const
{
    if (x.half_width() != half_width || x.includes_origin() != includes_origin())
        throw InvalidArgument("operator/state index sets differ");
    LatticeState y(half_width, includes_origin(), x.time());
    apply(x.amplitudes(), y.amplitudes());
    return y;
}

Eigen::MatrixXd TruncatedOperator::dense() const
{
    const auto n = static_cast<Eigen::Index>(dim());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            m(i, i + 1) = offdiag[static_cast<std::size_t>(i)];
            m(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
        }
    }
    return m;
}

TruncatedOperator build_operator(const JunctionParams& params, Variant variant, int half_width)
{
    if (half_width < 2) throw InvalidArgument("operator half-width N must be >= 2");

    const JunctionParams p = variant == Variant::FreeLaplacian ? JunctionParams(1.0, 1.0) : params;
    const double c1 = p.coeff(1);
    const double c2 = p.coeff(2);
    const std::size_t N = static_cast<std::size_t>(half_width);

    TruncatedOperator op{variant, p, half_width, {}, {}};
    if (variant == Variant::Model1) {
        const std::size_t n = 2 * N;
        op.diag.assign(n, 0.0);
        op.offdiag.assign(n - 1, 0.0);
        for (std::size_t i = 0; i < N; ++i) op.diag[i] = -2.0 * c1;
        for (std::size_t i = N; i < n; ++i) op.diag[i] = -2.0 * c2;
        for (std::size_t i = 0; i + 1 < N; ++i) op.offdiag[i] = c1;
        for (std::size_t i = N; i + 1 < n; ++i) op.offdiag[i] = c2;
        const double w = 1.0 / (p.b1() * p.b1() + p.b2() * p.b2());
        op.diag[N - 1] = -c1 - w; // j = -1
        op.diag[N] = -w - c2;     // j = +1
        op.offdiag[N - 1] = w;
    } else {
        const std::size_t n = 2 * N + 1;
        op.diag.assign(n, 0.0);
        op.offdiag.assign(n - 1, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            op.diag[i] = -2.0 * c1;
            op.offdiag[i] = c1;
        }
        op.diag[N] = -(c1 + c2);
        for (std::size_t i = N + 1; i < n; ++i) op.diag[i] = -2.0 * c2;
        for (std::size_t i = N; i + 1 < n; ++i) op.offdiag[i] = c2;
    }
    return op;
}

double quadratic_form(const TruncatedOperator& op, std::span<const double> u)
{
    const std::size_t n = op.dim();
    if (u.size() != n) throw InvalidArgument("quadratic_form: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double au = op.diag[i] * u[i];
        if (i > 0) au += op.offdiag[i - 1] * u[i - 1];
        if (i + 1 < n) au += op.offdiag[i] * u[i + 1];
        s += au * u[i];
    }
    return s;
}

double quadratic_form(const TruncatedOperator& op, const LatticeState& u)
{
    if (u.size() != op.dim()) throw InvalidArgument("quadratic_form: dimension mismatch");
    std::vector<double> re(u.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        if (u.amplitudes()[i].imag() != 0.0)
            throw InvalidArgument("quadratic_form expects a real state");
        re[i] = u.amplitudes()[i].real();
    }
    return quadratic_form(op, re);
}

double quadratic_form_difference_sum(const TruncatedOperator& op, std::span<const double> u)
{
    const std::size_t n = op.dim();
    if (u.size() != n) throw InvalidArgument("quadratic_form: dimension mismatch");
    const std::size_t N = static_cast<std::size_t>(op.half_width);
    const double c1 = op.params.coeff(1);
    const double c2 = op.params.coeff(2);
    auto at = [&](std::ptrdiff_t i) { return (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) ? 0.0 : u[static_cast<std::size_t>(i)]; };
    auto sq = [](double x) { return x * x; };

    double s = 0.0;
    if (op.variant == Variant::Model1) {
        // left half: sites -N..-1 at offsets 0..N-1, u(-N-1) = 0
        for (std::size_t i = 0; i < N; ++i)
            s -= c1 * sq(at(static_cast<std::ptrdiff_t>(i)) - at(static_cast<std::ptrdiff_t>(i) - 1));
        const double w = 1.0 / (op.params.b1() * op.params.b1() + op.params.b2() * op.params.b2());
        s -= w * sq(u[N - 1] - u[N]);
        // right half: sites 1..N at offsets N..2N-1, u(N+1) = 0
        for (std::size_t i = N; i < n; ++i)
            s -= c2 * sq(at(static_cast<std::ptrdiff_t>(i) + 1) - at(static_cast<std::ptrdiff_t>(i)));
    } else {
        for (std::size_t i = 0; i <= N; ++i)
            s -= c1 * sq(at(static_cast<std::ptrdiff_t>(i)) - at(static_cast<std::ptrdiff_t>(i) - 1));
        for (std::size_t i = N; i < n; ++i)
            s -= c2 * sq(at(static_cast<std::ptrdiff_t>(i) + 1) - at(static_cast<std::ptrdiff_t>(i)));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Spectrum

Eigensystem eigensystem(const TruncatedOperator& op, bool with_vectors)
{
    const auto n = static_cast<lapack_int>(op.dim());
    Eigensystem es;
    std::vector<double> d = op.diag;
    std::vector<double> e = op.offdiag;
    e.push_back(0.0);
    // MRRR: the divide-and-conquer drivers in the system LAPACK lose orthogonality for n >= 500
    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    if (with_vectors) es.vectors.resize(n, n);
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'A', n, d.data(), e.data(),
                                           0.0, 0.0, 0, 0, 0.0, &found, w.data(),
                                           with_vectors ? es.vectors.data() : nullptr, with_vectors ? n : 1,
                                           support.data());
    if (info != 0 || found != n)
        throw NumericalError("tridiagonal eigensolver (dstevr) failed with info = " + std::to_string(info));
    d = std::move(w);
    es.values = Eigen::Map<Eigen::VectorXd>(d.data(), n);
    return es;
}

SpectrumReport spectrum_check(const TruncatedOperator& op)
{
    if (op.half_width > 4096)
        throw InvalidArgument("spectrum_check supports N <= 4096");
    const Eigensystem es = eigensystem(op, false);

    SpectrumReport rep;
    rep.eigenvalues.assign(es.values.data(), es.values.data() + es.values.size());
    rep.min_eigenvalue = rep.eigenvalues.front();
    rep.max_eigenvalue = rep.eigenvalues.back();
    rep.interval_min = op.params.spectral_min();
    rep.interval_max = op.params.spectral_max();
    rep.excess_below = std::max(0.0, rep.interval_min - rep.min_eigenvalue);
    rep.excess_above = std::max(0.0, rep.max_eigenvalue - rep.interval_max);

    const double len = rep.interval_max - rep.interval_min;
    double gap = rep.min_eigenvalue - rep.interval_min;
    for (std::size_t k = 1; k < rep.eigenvalues.size(); ++k)
        gap = std::max(gap, rep.eigenvalues[k] - rep.eigenvalues[k - 1]);
    gap = std::max(gap, rep.interval_max - rep.max_eigenvalue);
    rep.max_relative_gap = gap / len;

    constexpr int bins = 64;
    std::vector<bool> hit(bins, false);
    for (double ev : rep.eigenvalues) {
        const int b = static_cast<int>(std::floor((ev - rep.interval_min) / len * bins));
        if (b >= 0 && b < bins) hit[static_cast<std::size_t>(b)] = true;
    }
    rep.bin_fill_fraction =
        static_cast<double>(std::count(hit.begin(), hit.end(), true)) / static_cast<double>(bins);
    return rep;
}

int reflection_safe_half_width(int j_obs, double max_coeff, double t_max)
{
    const double reach = 2.0 * max_coeff * std::abs(t_max);
    const double tail = 12.0 * std::cbrt(max_coeff * std::abs(t_max));
    return j_obs + static_cast<int>(std::ceil(reach + tail)) + 16;
}

} // namespace latdisp
