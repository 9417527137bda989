#include "latdisp/strichartz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "latdisp/error.hpp"
#include "latdisp/evolution.hpp"

namespace latdisp {

Exponent Exponent::infinity()
{
    Exponent e;
    e.inf_ = true;
    e.num_ = 1;
    e.den_ = 0;
    e.approx_ = std::numeric_limits<double>::infinity();
    return e;
}

Exponent Exponent::rational(std::int64_t num, std::int64_t den)
{
    if (den <= 0 || num <= 0) throw InvalidArgument("exponent must be a positive rational");
    const std::int64_t g = std::gcd(num, den);
    Exponent e;
    e.num_ = num / g;
    e.den_ = den / g;
    e.approx_ = static_cast<double>(e.num_) / static_cast<double>(e.den_);
    return e;
}

Exponent Exponent::from_double(double x)
{
    if (std::isinf(x) && x > 0) return infinity();
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("exponent must be positive");
    // continued fraction convergents
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double rem = x;
    for (int it = 0; it < 40; ++it) {
        const double a = std::floor(rem);
        if (a > 1e12) break;
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > 1000000) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (static_cast<double>(h1) / static_cast<double>(k1) == x) return rational(h1, k1);
        const double frac = rem - a;
        if (frac <= 0.0) break;
        rem = 1.0 / frac;
    }
    Exponent e;
    e.exact_ = false;
    e.approx_ = x;
    e.num_ = 0;
    e.den_ = 0;
    return e;
}

Exponent Exponent::parse(const std::string& text)
{
    if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos)
            return rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw InvalidArgument("trailing characters");
        return from_double(v);
    } catch (const InvalidArgument&) {
        throw InvalidArgument("cannot parse exponent '" + text + "'");
    } catch (const std::exception&) {
        throw InvalidArgument("cannot parse exponent '" + text + "'");
    }
}

double Exponent::value() const { return approx_; }

std::string Exponent::str() const
{
    if (inf_) return "inf";
    if (!exact_) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", approx_);
        return buf;
    }
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string to_string(Regime r) { return r == Regime::Continuous ? "continuous" : "discrete"; }

bool is_admissible(const Exponent& q, const Exponent& r, Regime regime)
{
    for (const Exponent* e : {&q, &r})
        if (!e->is_infinite() && e->value() < 2.0)
            throw InvalidArgument("exponent " + e->str() + " lies outside [2, inf]");

    const bool discrete = regime == Regime::Discrete;
    if (q.is_exact() && r.is_exact()) {
        using i128 = __int128;
        // 1/q and 1/r as b/a and d/c; ∞ means 0
        if (q.is_infinite()) {
            if (r.is_infinite()) return discrete;
            const i128 c = r.num(), d = r.den();
            return discrete ? c - 2 * d >= 0 : c - 2 * d == 0;
        }
        const i128 a = q.num(), b = q.den();
        if (r.is_infinite()) return discrete ? 6 * b <= a : 4 * b == a;
        const i128 c = r.num(), d = r.den();
        return discrete ? 6 * c * b <= a * (c - 2 * d) : 4 * c * b == a * (c - 2 * d);
    }
    const double iq = q.is_infinite() ? 0.0 : 1.0 / q.value();
    const double ir = r.is_infinite() ? 0.0 : 1.0 / r.value();
    return discrete ? iq <= (0.5 - ir) / 3.0 : iq == 0.5 * (0.5 - ir);
}

double spacetime_norm(std::span<const LatticeState> evolution, const Exponent& q, const Exponent& r)
{
    if (evolution.empty()) throw InvalidArgument("spacetime_norm needs at least one snapshot");
    for (std::size_t i = 1; i < evolution.size(); ++i)
        if (!(evolution[i].time() > evolution[i - 1].time()))
            throw InvalidArgument("snapshot times must be strictly increasing");
    const double rv = r.is_infinite() ? std::numeric_limits<double>::infinity() : r.value();

    std::vector<double> n(evolution.size());
    for (std::size_t i = 0; i < evolution.size(); ++i) n[i] = evolution[i].norm(rv);
    if (q.is_infinite()) return *std::max_element(n.begin(), n.end());
    if (evolution.size() < 2) throw InvalidArgument("a finite time exponent needs at least two snapshots");

    const double qv = q.value();
    // scale out the max so n^q neither overflows nor underflows
    const double m = *std::max_element(n.begin(), n.end());
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        const double dt = evolution[i + 1].time() - evolution[i].time();
        acc += 0.5 * dt * (std::pow(n[i] / m, qv) + std::pow(n[i + 1] / m, qv));
    }
    return m * std::pow(acc, 1.0 / qv);
}

StrichartzReport strichartz_sweep(const JunctionParams& params, std::span<const LatticeState> data,
                                  std::span<const AdmissiblePair> pairs, double T, const StrichartzOptions& opt)
{
    if (!(T > 0.0)) throw InvalidArgument("strichartz_sweep needs T > 0");
    if (!(opt.dt > 0.0)) throw InvalidArgument("strichartz_sweep needs dt > 0");
    if (data.empty() || pairs.empty()) throw InvalidArgument("strichartz_sweep needs data and pairs");
    for (const auto& p : pairs)
        if (!is_admissible(p.q, p.r, Regime::Discrete))
            throw InvalidArgument("inadmissible pair (q, r) = (" + p.q.str() + ", " + p.r.str() +
                                  "): needs 1/q <= (1/2 - 1/r)/3");

    const bool origin = includes_origin(opt.variant);
    int support = 1;
    for (const auto& d : data) {
        if (d.includes_origin() != origin) throw InvalidArgument("datum index set does not match the variant");
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.amplitudes()[i] != cplx{}) support = std::max(support, std::abs(d.site(i)));
    }
    const double cmax = opt.variant == Variant::FreeLaplacian ? 1.0 : params.max_coeff();
    const int n = reflection_safe_half_width(support, cmax, T);

    // grid on [−T, T] that contains ±T/4 and ±T/2
    const int m = std::max(1, static_cast<int>(std::ceil(T / (4.0 * opt.dt))));
    const double h = T / (4.0 * m);
    std::vector<double> times(static_cast<std::size_t>(8 * m + 1));
    for (int i = 0; i <= 8 * m; ++i) times[static_cast<std::size_t>(i)] = -T + h * i;
    times[static_cast<std::size_t>(4 * m)] = 0.0;

    StrichartzReport rep;
    rep.windows = {T / 4.0, T / 2.0, T};
    rep.dt = h;
    rep.half_width = n;

    const SpectralPropagator prop(build_operator(params, opt.variant, n));
    std::vector<std::vector<std::array<double, 3>>> ratio(pairs.size(), std::vector<std::array<double, 3>>(data.size()));
    for (std::size_t d = 0; d < data.size(); ++d) {
        const LatticeState phi = data[d].resized(n);
        const double norm0 = phi.norm2();
        if (norm0 == 0.0) throw InvalidArgument("datum " + std::to_string(d) + " is zero");
        const auto evo = prop.evolve(phi, times);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            for (int w = 0; w < 3; ++w) {
                const int half = (w == 0 ? 1 : w == 1 ? 2 : 4) * m;
                const std::span<const LatticeState> window(evo.data() + 4 * m - half, static_cast<std::size_t>(2 * half + 1));
                const double v = spacetime_norm(window, pairs[p].q, pairs[p].r) / norm0;
                ratio[p][d][static_cast<std::size_t>(w)] = v;
                rep.rows.push_back({p, d, rep.windows[static_cast<std::size_t>(w)], v});
            }
        }
    }
    rep.stable = true;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        PairSummary s{pairs[p], 0.0, 0.0, true};
        for (std::size_t d = 0; d < data.size(); ++d) {
            const auto& r = ratio[p][d];
            s.max_ratio = std::max(s.max_ratio, r[2]);
            s.max_growth = std::max({s.max_growth, r[1] / r[0] - 1.0, r[2] / r[1] - 1.0});
        }
        s.stable = s.max_growth <= opt.growth_limit;
        rep.stable = rep.stable && s.stable;
        rep.pairs.push_back(s);
    }
    return rep;
}

std::vector<LatticeState> random_data(int count, int support, bool includes_origin, std::uint64_t seed)
{
    if (count < 1 || support < 1) throw InvalidArgument("random_data needs count >= 1 and support >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<LatticeState> out;
    for (int c = 0; c < count; ++c) {
        LatticeState s(support, includes_origin);
        for (auto& a : s.amplitudes()) a = cplx(normal(rng), normal(rng));
        const double nrm = s.norm2();
        for (auto& a : s.amplitudes()) a /= nrm;
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace latdisp
