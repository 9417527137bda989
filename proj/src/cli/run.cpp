#include <chrono>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "latdisp/cli.hpp"
#include "latdisp/error.hpp"
#include "latdisp/evolution.hpp"
#include "latdisp/io.hpp"
#include "latdisp/junction_phase.hpp"
#include "latdisp/oscillatory.hpp"
#include "latdisp/resolvent.hpp"
#include "latdisp/strichartz.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace latdisp::cli {

namespace {

struct Outcome {
    json summary;
    json tolerances = json::object();
    std::vector<std::string> artifacts;
    bool certified = true;
    std::string line;
};

template <class F>
auto parse_field(std::vector<std::string>& problems, const std::string& key, F&& f) -> std::optional<decltype(f())>
{
    try {
        return f();
    } catch (const std::exception& e) {
        problems.push_back("'" + key + "': " + e.what());
        return std::nullopt;
    }
}

// for the one-line summaries; artifacts keep full precision
std::string short_num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void check(const std::vector<std::string>& problems)
{
    if (!problems.empty()) throw ValidationError(problems);
}

struct Common {
    double b1 = 1.0, b2 = 1.0;
    Variant variant = Variant::Model1;
    std::uint64_t seed = 1;
};

Common read_common(ConfigReader& rd, std::vector<std::string>& problems, bool allow_free = true)
{
    Common c;
    c.b1 = rd.number("b1", 1.0);
    c.b2 = rd.number("b2", 1.0);
    rd.require(c.b1 > 0.0 && std::isfinite(c.b1), "'b1' must be positive");
    rd.require(c.b2 > 0.0 && std::isfinite(c.b2), "'b2' must be positive");
    const std::string v = rd.text("variant", "model1");
    if (auto p = parse_field(problems, "variant", [&] { return parse_variant(v); })) {
        c.variant = *p;
        rd.require(allow_free || c.variant != Variant::FreeLaplacian, "'variant' free is not supported here");
    }
    const double s = rd.number("seed", 1.0);
    rd.require(s >= 0.0 && s == std::floor(s), "'seed' must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(std::max(0.0, s));
    return c;
}

JunctionParams params_of(const Common& c) { return JunctionParams(c.b1 > 0 ? c.b1 : 1.0, c.b2 > 0 ? c.b2 : 1.0); }

// --------------------------------------------------------------------------

Outcome run_spectrum(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const Common c = read_common(rd, problems);
    const int n = rd.integer("N", 512);
    rd.require(n >= 2 && n <= 4096, "'N' must lie in [2, 4096]");
    const double tol = rd.number("tol", 1e-10);
    rd.require(tol > 0.0, "'tol' must be positive");
    check(problems);

    const auto op = build_operator(params_of(c), c.variant, n);
    const auto rep = spectrum_check(op);
    {
        io::CsvWriter csv(out / "eigenvalues.csv", {"index", "eigenvalue"});
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
            csv.row({std::to_string(i), io::fmt17(rep.eigenvalues[i])});
    }
    Outcome o;
    o.artifacts = {"eigenvalues.csv", "spectrum.json"};
    o.tolerances = {{"interval_slack", tol}};
    o.certified = rep.excess_below <= tol && rep.excess_above <= tol;
    o.summary = {{"variant", std::string(to_string(c.variant))},
                 {"N", n},
                 {"min_eigenvalue", rep.min_eigenvalue},
                 {"max_eigenvalue", rep.max_eigenvalue},
                 {"interval", {rep.interval_min, rep.interval_max}},
                 {"excess_below", rep.excess_below},
                 {"excess_above", rep.excess_above},
                 {"max_relative_gap", rep.max_relative_gap},
                 {"bin_fill_fraction", rep.bin_fill_fraction},
                 {"inside_interval", o.certified}};
    io::write_json(out / "spectrum.json", json{{"schema_version", io::schema_version}, {"spectrum", o.summary}});
    o.line = "spectrum: eigenvalues in [" + short_num(rep.min_eigenvalue) + ", " + short_num(rep.max_eigenvalue) +
             "], interval [" + short_num(rep.interval_min) + ", 0]";
    return o;
}

Outcome run_evolve(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const Common c = read_common(rd, problems);
    const auto datum = parse_field(problems, "datum", [&] { return parse_datum(rd.text("datum", "delta:1")); });
    const auto times = parse_field(problems, "t", [&] { return parse_grid(rd.text("t", "1,5,20")); });
    const std::string route = rd.text("route", "spectral");
    rd.require(route == "spectral" || route == "kernel" || route == "lap", "'route' must be spectral, kernel or lap");
    const double tol = rd.number("tol", 1e-10);
    rd.require(tol > 0.0, "'tol' must be positive");
    int n = rd.integer("N", 0);
    rd.require(n == 0 || n >= 2, "'N' must be >= 2 (or 0 for automatic)");
    if (route == "kernel") {
        rd.require(c.variant == Variant::Model1, "route kernel needs variant model1");
        rd.require(c.b1 == c.b2, "route kernel needs b1 == b2");
    }
    if (route == "lap") rd.require(c.variant != Variant::FreeLaplacian, "route lap needs model1 or model2");
    check(problems);

    double tmax = 0.0;
    for (double t : *times) tmax = std::max(tmax, std::abs(t));
    const auto params = params_of(c);
    const int reach = datum->value;
    if (n == 0) n = reflection_safe_half_width(std::abs(reach), c.variant == Variant::FreeLaplacian ? 1.0 : params.max_coeff(), tmax);
    const bool origin = includes_origin(c.variant);
    const LatticeState phi = make_datum(*datum, n, origin, c.seed);

    std::vector<LatticeState> states;
    if (route == "spectral") {
        states = evolve_spectral(build_operator(params, c.variant, n), phi, *times);
    } else if (route == "kernel") {
        for (double t : *times) states.push_back(evolve_equal_coeffs(params, phi, t, tol));
    } else {
        for (double t : *times) states.push_back(lap_propagate(params, phi, t, tol, c.variant).state);
    }

    Outcome o;
    o.artifacts = {"states.csv", "evolve.json"};
    o.tolerances = {{"quadrature_tol", tol}};
    json norms = json::array();
    {
        io::CsvWriter csv(out / "states.csv", {"t", "j", "re", "im"});
        for (const auto& s : states) {
            for (std::size_t i = 0; i < s.size(); ++i)
                csv.row({io::fmt17(s.time()), std::to_string(s.site(i)), io::fmt17(s.amplitudes()[i].real()),
                         io::fmt17(s.amplitudes()[i].imag())});
            norms.push_back({{"t", s.time()}, {"l2", s.norm2()}, {"sup", s.norm_inf()}});
        }
    }
    o.summary = {{"route", route}, {"N", n}, {"phi_l2", phi.norm2()}, {"norms", norms}};
    io::write_json(out / "evolve.json", json{{"schema_version", io::schema_version}, {"evolve", o.summary}});
    o.line = "evolve: " + std::to_string(states.size()) + " snapshots via " + route + " route, N = " + std::to_string(n);
    return o;
}

Outcome run_decay(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const Common c = read_common(rd, problems);
    const auto datum = parse_field(problems, "datum", [&] { return parse_datum(rd.text("datum", "delta:1")); });
    const auto times = parse_field(problems, "t", [&] { return parse_grid(rd.text("t", "10:500:geom25")); });
    const double t_min = rd.number("t_min", 10.0);
    rd.require(t_min > 0.0, "'t_min' must be positive");
    const double target = rd.number("expected_exponent", -1.0 / 3.0);
    const double etol = rd.number("exponent_tol", 0.05);
    rd.require(etol > 0.0, "'exponent_tol' must be positive");
    if (datum) rd.require(datum->kind == DatumSpec::Kind::Delta, "'datum' must be delta:j for decay curves");
    if (times) {
        int usable = 0;
        for (double t : *times) usable += t >= t_min;
        rd.require(usable >= 10, "'t' needs at least 10 times >= t_min");
    }
    check(problems);

    std::vector<DecaySample> curve;
    if (c.variant == Variant::FreeLaplacian && datum->value == 0)
        curve = kernel_decay_curve(*times);
    else
        curve = decay_curve(params_of(c), c.variant, datum->value, *times);
    const DecayFit fit = fit_decay(curve, t_min);

    {
        io::CsvWriter csv(out / "decay.csv", {"t", "sup_norm", "l2_norm"});
        for (const auto& s : curve) csv.row(std::vector<double>{s.t, s.sup_norm, s.l2_norm});
    }
    Outcome o;
    o.artifacts = {"decay.csv", "fit.json"};
    o.tolerances = {{"exponent_tol", etol}};
    o.certified = std::abs(fit.exponent - target) <= etol;
    o.summary = {{"exponent", fit.exponent},
                 {"constant", fit.constant()},
                 {"residual", fit.residual},
                 {"t_range", {fit.t_min, fit.t_max}},
                 {"sample_count", fit.sample_count},
                 {"expected_exponent", target},
                 {"within_tolerance", o.certified}};
    io::write_json(out / "fit.json", json{{"schema_version", io::schema_version}, {"fit", o.summary}});
    o.line = "decay: exponent " + short_num(fit.exponent) + " (expected " + short_num(target) + " +- " + short_num(etol) + ")";
    return o;
}

Outcome run_resolvent_check(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const Common c = read_common(rd, problems, false);
    const auto lambda = parse_field(problems, "lambda", [&] { return parse_complex(rd.text("lambda", "1+0.5i")); });
    const auto g = parse_field(problems, "g", [&] { return parse_datum(rd.text("g", "delta:1")); });
    const int n = rd.integer("N", 200);
    rd.require(n >= 4, "'N' must be >= 4");
    const double rtol = rd.number("residual_tol", 1e-9);
    if (g) rd.require(std::abs(g->value) <= n / 2, "'g' support must lie within N/2");
    check(problems);

    const auto params = params_of(c);
    const auto k = make_resolvent(params, c.variant, *lambda);
    const auto op = build_operator(params, c.variant, n);
    const LatticeState gs = make_datum(*g, n, op.includes_origin(), c.seed);
    const LatticeState f = resolvent_apply(k, gs);
    LatticeState res = op.apply(f);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        const int j = res.site(i);
        if (std::abs(j) > n / 2) continue;
        const cplx r = res.amplitudes()[i] - *lambda * f.amplitudes()[i] - gs.amplitudes()[i];
        num += std::norm(r);
        den += std::norm(gs.amplitudes()[i]);
    }
    const double rel = std::sqrt(num / den);

    Outcome o;
    o.artifacts = {"resolvent.json"};
    o.tolerances = {{"residual_tol", rtol}};
    o.certified = rel <= rtol;
    o.summary = {{"variant", std::string(to_string(c.variant))},
                 {"lambda", {lambda->real(), lambda->imag()}},
                 {"r1", {k.r1.r.real(), k.r1.r.imag()}},
                 {"r2", {k.r2.r.real(), k.r2.r.imag()}},
                 {"denominator", {k.denominator.real(), k.denominator.imag()}},
                 {"relative_residual", rel},
                 {"window", n / 2}};
    io::write_json(out / "resolvent.json", json{{"schema_version", io::schema_version}, {"resolvent", o.summary}});
    o.line = "resolvent-check: relative residual " + short_num(rel);
    return o;
}

Outcome run_lap(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    Common c = read_common(rd, problems, false);
    if (!rd.has("b2")) c.b2 = 2.0;
    const auto datum = parse_field(problems, "datum", [&] { return parse_datum(rd.text("datum", "delta:1")); });
    const auto times = parse_field(problems, "t", [&] { return parse_grid(rd.text("t", "1,5,20")); });
    const int n = rd.integer("N", 40);
    rd.require(n >= 2, "'N' must be >= 2");
    const double tol = rd.number("tol", 1e-8);
    rd.require(tol > 0.0, "'tol' must be positive");
    const double agree = rd.number("agree_tol", 1e-6);
    if (datum) rd.require(std::abs(datum->value) <= n, "'datum' must lie inside the lattice");
    check(problems);

    const auto params = params_of(c);
    const bool origin = includes_origin(c.variant);
    const LatticeState phi = make_datum(*datum, n, origin, c.seed);
    double tmax = 0.0;
    for (double t : *times) tmax = std::max(tmax, std::abs(t));
    const int big = reflection_safe_half_width(n, params.max_coeff(), tmax);
    const auto ref = evolve_spectral(build_operator(params, c.variant, big), phi.resized(big), *times);

    Outcome o;
    o.artifacts = {"lap.csv", "lap.json"};
    o.tolerances = {{"quadrature_tol", tol}, {"agree_tol", agree}};
    json rows = json::array();
    double worst = 0.0;
    io::CsvWriter csv(out / "lap.csv", {"t", "max_abs_difference", "error_estimate", "panels"});
    for (std::size_t i = 0; i < times->size(); ++i) {
        const auto r = lap_propagate(params, phi, (*times)[i], tol, c.variant);
        double d = 0.0;
        for (std::size_t k = 0; k < r.state.size(); ++k)
            d = std::max(d, std::abs(r.state.amplitudes()[k] - ref[i][r.state.site(k)]));
        worst = std::max(worst, d);
        csv.row({io::fmt17((*times)[i]), io::fmt17(d), io::fmt17(r.error_estimate), std::to_string(r.panels)});
        rows.push_back({{"t", (*times)[i]}, {"max_abs_difference", d}, {"panels", r.panels}});
    }
    o.certified = worst <= std::max(agree, tol);
    o.summary = {{"N", n}, {"reference_N", big}, {"rows", rows}, {"max_abs_difference", worst}};
    io::write_json(out / "lap.json", json{{"schema_version", io::schema_version}, {"lap", o.summary}});
    o.line = "lap: max |LAP - spectral| = " + short_num(worst);
    return o;
}

std::optional<PhaseFunction> phase_by_name(const std::string& name, double lo, double hi)
{
    if (name == "lattice") return lattice_dispersion_phase();
    if (name == "xi2") return power_phase(2, lo, hi);
    if (name == "xi3") return power_phase(3, lo, hi);
    if (name == "xi4") return power_phase(4, lo, hi);
    if (name.rfind("power:", 0) == 0) return power_phase(std::stoi(name.substr(6)), lo, hi);
    return std::nullopt;
}

Outcome run_osc_certify(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const std::string pname = rd.text("phase", "xi2");
    const double lo = rd.number("lo", -1.0);
    const double hi = rd.number("hi", 1.0);
    rd.require(hi > lo, "'hi' must exceed 'lo'");
    std::optional<PhaseFunction> phase;
    if (hi > lo) {
        phase = parse_field(problems, "phase", [&] { return phase_by_name(pname, lo, hi); }).value_or(std::nullopt);
        rd.require(phase.has_value(), "'phase' must be one of lattice, xi2, xi3, xi4, power:p");
    }
    const auto kind = parse_field(problems, "weight", [&] { return parse_weight_kind(rd.text("weight", "half_power_second")); });
    const auto ts = parse_field(problems, "t", [&] { return parse_grid(rd.text("t", "10:10000:geom5")); });
    const auto xs = parse_field(problems, "x", [&] { return parse_grid(rd.text("x", "-2:2:lin41")); });
    const double tol = rd.number("tol", 1e-9);
    rd.require(tol > 0.0, "'tol' must be positive");
    if (ts)
        for (double t : *ts) rd.require(t >= 1.0, "'t' values must be >= 1");
    check(problems);

    CertifyOptions opt;
    opt.tol = tol;
    const auto cert = certify_decay(*phase, *kind, *ts, *xs, opt);
    {
        io::CsvWriter csv(out / "osc.csv", {"t", "x", "abs_I", "t_power_scaled"});
        for (const auto& s : cert.samples) csv.row(std::vector<double>{s.t, s.x, s.abs_value, s.scaled});
    }
    Outcome o;
    o.artifacts = {"osc.csv", "osc.json"};
    o.tolerances = {{"quadrature_tol", tol}, {"slope_tol", opt.slope_tol}, {"ratio_limit", opt.ratio_limit}};
    o.certified = cert.certified;
    o.summary = {{"phase", phase->name},
                 {"weight", to_string(*kind)},
                 {"k", cert.k},
                 {"slope", cert.verdict.slope},
                 {"max_over_median", cert.verdict.max_over_median},
                 {"empirical_constant", cert.empirical_constant},
                 {"certified", cert.certified}};
    io::write_json(out / "osc.json", json{{"schema_version", io::schema_version}, {"certificate", o.summary}});
    o.line = "osc-certify: k = " + std::to_string(cert.k) + ", slope " + short_num(cert.verdict.slope) +
             (cert.certified ? ", bounded" : ", NOT bounded");
    return o;
}

Outcome run_junction_phase(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    const double a = rd.number("a", 0.5);
    rd.require(a > 0.0 && a <= 1.0, "'a' must lie in (0, 1]");
    const double delta = rd.number("delta", 0.1);
    rd.require(delta >= 0.0 && delta < std::numbers::pi, "'delta' must lie in [0, pi)");
    const std::string zspec = rd.text("z", "auto");
    std::optional<std::vector<double>> zs;
    if (zspec != "auto") zs = parse_field(problems, "z", [&] { return parse_grid(zspec); });
    const auto ts = parse_field(problems, "t", [&] { return parse_grid(rd.text("t", "10:3000:geom4")); });
    const auto ys = parse_field(problems, "y", [&] { return parse_grid(rd.text("y", "-3:3:lin13")); });
    const double tol = rd.number("tol", 1e-9);
    rd.require(tol > 0.0, "'tol' must be positive");
    check(problems);

    const double zstar = JunctionPhase(a, 0.0).z_star();
    if (!zs) zs = std::vector<double>{0.0, std::max(0.0, zstar - 0.1), zstar, zstar + 0.1, 2.0 * zstar};
    JunctionOptions opt;
    opt.tol = tol;
    const auto rep = junction_phase_report(a, *zs, delta, *ts, *ys, opt);

    json rows = json::array();
    {
        io::CsvWriter csv(out / "junction.csv", {"z", "integral", "t", "y", "abs_I", "t_power_scaled"});
        for (const auto& r : rep.rows) {
            for (const auto& s : r.sup_rows)
                csv.row(std::vector<double>{r.z, static_cast<double>(r.integral), s.t, s.x, s.abs_value, s.scaled});
            rows.push_back({{"z", r.z},
                            {"integral", r.integral},
                            {"slope", r.verdict.slope},
                            {"max_over_median", r.verdict.max_over_median},
                            {"empirical_constant", r.empirical_constant},
                            {"certified", r.certified}});
        }
    }
    Outcome o;
    o.artifacts = {"junction.csv", "junction.json"};
    o.tolerances = {{"quadrature_tol", tol}, {"slope_tol", opt.slope_tol}, {"ratio_limit", opt.ratio_limit}};
    o.certified = rep.certified;
    o.summary = {{"a", a},
                 {"z_star", rep.z_star},
                 {"delta", delta},
                 {"quartic_case", rep.quartic_case},
                 {"t0_worst_ratio", rep.t0_worst_ratio},
                 {"rows", rows},
                 {"certified", rep.certified}};
    if (a < 1.0) {
        const auto alg = verify_phase_algebra(a);
        o.summary["phase_algebra"] = {{"grid_points", alg.grid_points},
                                      {"bound_violations", alg.violations},
                                      {"bound_violations_grouped_reading", alg.violations_grouped},
                                      {"min_p2sq_plus_p3sq", alg.global_min_value},
                                      {"min_location", {alg.global_min_theta, alg.global_min_z}},
                                      {"q2_at_pi", alg.q2_at_pi},
                                      {"q3_at_pi", alg.q3_at_pi},
                                      {"c4", {alg.c4_fit, alg.c4_printed}},
                                      {"c6", {alg.c6_fit, alg.c6_printed}},
                                      {"r2", {alg.r2_fit, alg.r2_printed}},
                                      {"r4", {alg.r4_fit, alg.r4_printed}},
                                      {"r_second_at_pi", {alg.r_second_at_pi, alg.r_second_printed}}};
    }
    io::write_json(out / "junction.json", json{{"schema_version", io::schema_version}, {"junction", o.summary}});
    int ok = 0;
    for (const auto& r : rep.rows) ok += r.certified;
    o.line = "junction-phase: a = " + short_num(a) + ", " + std::to_string(ok) + "/" + std::to_string(rep.rows.size()) +
             " (z, integral) rows bounded";
    return o;
}

std::vector<AdmissiblePair> parse_pairs(const std::string& text)
{
    std::vector<AdmissiblePair> out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto semi = text.find(';', start);
        const std::string item = text.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw InvalidArgument("pair '" + item + "' must read q,r");
        out.push_back({Exponent::parse(item.substr(0, comma)), Exponent::parse(item.substr(comma + 1)), Regime::Discrete});
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (out.empty()) throw InvalidArgument("no pairs given");
    return out;
}

Outcome run_strichartz(ConfigReader& rd, std::vector<std::string>& problems, const fs::path& out)
{
    Common c = read_common(rd, problems);
    if (!rd.has("b2")) c.b2 = 2.0;
    const auto pairs = parse_field(problems, "pairs", [&] { return parse_pairs(rd.text("pairs", "inf,2;9,6;12,4")); });
    if (pairs)
        for (const auto& p : *pairs) {
            const auto ok = parse_field(problems, "pairs", [&] { return is_admissible(p.q, p.r, Regime::Discrete); });
            if (ok && !*ok)
                problems.push_back("'pairs': (" + p.q.str() + ", " + p.r.str() + ") is not admissible (needs 1/q <= (1/2 - 1/r)/3)");
        }
    const int count = rd.integer("data", 20);
    const int support = rd.integer("support", 5);
    rd.require(count >= 1, "'data' must be >= 1");
    rd.require(support >= 1, "'support' must be >= 1");
    const double T = rd.number("T", 200.0);
    rd.require(T > 0.0, "'T' must be positive");
    const double dt = rd.number("dt", 0.1);
    rd.require(dt > 0.0, "'dt' must be positive");
    const double growth = rd.number("growth_limit", 0.05);
    check(problems);

    const auto data = random_data(count, support, includes_origin(c.variant), c.seed);
    StrichartzOptions opt;
    opt.variant = c.variant;
    opt.dt = dt;
    opt.growth_limit = growth;
    const auto rep = strichartz_sweep(params_of(c), data, *pairs, T, opt);
    {
        io::CsvWriter csv(out / "strichartz.csv", {"q", "r", "datum_id", "T", "norm_ratio"});
        for (const auto& r : rep.rows)
            csv.row({(*pairs)[r.pair_index].q.str(), (*pairs)[r.pair_index].r.str(), std::to_string(r.datum),
                     io::fmt17(r.T), io::fmt17(r.ratio)});
    }
    json ps = json::array();
    for (const auto& s : rep.pairs)
        ps.push_back({{"q", s.pair.q.str()}, {"r", s.pair.r.str()}, {"max_ratio", s.max_ratio},
                      {"max_growth", s.max_growth}, {"stable", s.stable}});
    Outcome o;
    o.artifacts = {"strichartz.csv", "strichartz.json"};
    o.tolerances = {{"growth_limit", growth}, {"dt", rep.dt}};
    o.certified = rep.stable;
    o.summary = {{"T", T}, {"windows", rep.windows}, {"N", rep.half_width}, {"pairs", ps}, {"stable", rep.stable}};
    io::write_json(out / "strichartz.json", json{{"schema_version", io::schema_version}, {"strichartz", o.summary}});
    o.line = std::string("strichartz: ") + (rep.stable ? "all pairs stable" : "growth above limit") + " under T-doubling";
    return o;
}

using Runner = Outcome (*)(ConfigReader&, std::vector<std::string>&, const fs::path&);

Runner runner_for(const std::string& name)
{
    if (name == "spectrum") return run_spectrum;
    if (name == "evolve") return run_evolve;
    if (name == "decay") return run_decay;
    if (name == "resolvent-check") return run_resolvent_check;
    if (name == "lap") return run_lap;
    if (name == "osc-certify") return run_osc_certify;
    if (name == "junction-phase") return run_junction_phase;
    if (name == "strichartz") return run_strichartz;
    return nullptr;
}

void apply_thread_cap()
{
#ifdef _OPENMP
    if (const char* env = std::getenv("LATTICE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) omp_set_num_threads(n);
    }
#endif
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"spectrum",   "evolve",        "decay",          "resolvent-check",
                                                "lap",        "osc-certify",   "junction-phase", "strichartz"};
    return names;
}

int run(const std::string& command, const json& config, const fs::path& out_dir, std::ostream& log)
{
    const auto start = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> problems;
        if (!config.is_object()) problems.push_back("configuration must be a JSON object");
        const Runner runner = runner_for(command);
        if (!runner) problems.push_back("unknown command '" + command + "'");
        if (config.is_object() && config.contains("schema_version") && config["schema_version"] != io::schema_version)
            problems.push_back("'schema_version' must be " + std::to_string(io::schema_version));
        check(problems);

        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw ValidationError({"cannot create output directory " + out_dir.string() + ": " + ec.message()});

        ConfigReader rd(config, problems);
        Outcome o = runner(rd, problems, out_dir);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const std::string canonical = config.dump();
        json manifest = {{"schema_version", io::schema_version},
                         {"command", command},
                         {"config", config},
                         {"config_hash", io::hex64(io::fnv1a(canonical))},
                         {"seed", config.value("seed", json(1))},
                         {"tolerances", o.tolerances},
                         {"artifacts", o.artifacts},
                         {"certified", o.certified},
                         {"wall_time_s", wall}};
        io::write_json(out_dir / "manifest.json", manifest);
        log << o.line << '\n';
        return o.certified ? Ok : Certification;
    } catch (const ValidationError& e) {
        log << "configuration errors:\n";
        for (const auto& p : e.problems()) log << "  - " << p << '\n';
        return Validation;
    } catch (const InvalidArgument& e) {
        log << "invalid input: " << e.what() << '\n';
        return Validation;
    } catch (const NumericalError& e) {
        log << "numerical failure: " << e.what() << '\n';
        return Numerical;
    } catch (const std::exception& e) {
        log << "numerical failure: " << e.what() << '\n';
        return Numerical;
    }
}

int main(int argc, char** argv)
{
    apply_thread_cap();
    CLI::App app{"Dispersive lattice junction experiments"};
    app.require_subcommand(0, 1);
    std::string config_path;
    std::string out_dir = "out";
    app.add_option("--config", config_path, "JSON configuration file (flags override its entries)");
    app.add_option("--out", out_dir, "output directory")->capture_default_str();

    // Every flag is stored as text and merged over the file config.
    struct Flag {
        const char* name;
        const char* help;
    };
    static const Flag flags[] = {
        {"b1", "coupling b1 > 0"},
        {"b2", "coupling b2 > 0"},
        {"variant", "model1 | model2 | free"},
        {"seed", "random seed"},
        {"N", "lattice half-width"},
        {"tol", "quadrature / check tolerance"},
        {"datum", "delta:j or random:K"},
        {"g", "right-hand side: delta:j or random:K"},
        {"t", "times: a:b:geomN, a:b:linN or a comma list"},
        {"t_min", "smallest time used in fits"},
        {"route", "spectral | kernel | lap"},
        {"lambda", "spectral parameter, e.g. 1+0.5i"},
        {"residual_tol", "resolvent residual tolerance"},
        {"agree_tol", "route agreement tolerance"},
        {"exponent_tol", "allowed deviation of the decay exponent"},
        {"expected_exponent", "expected decay exponent"},
        {"phase", "lattice | xi2 | xi3 | xi4 | power:p"},
        {"weight", "one | half_power_second | third_power_third | sine"},
        {"lo", "phase domain start"},
        {"hi", "phase domain end"},
        {"x", "x grid"},
        {"a", "junction parameter a in (0, 1]"},
        {"z", "z grid or auto"},
        {"delta", "cut-off delta in [0, pi)"},
        {"y", "y grid"},
        {"pairs", "admissible pairs q,r;q,r (inf allowed)"},
        {"data", "number of random data"},
        {"support", "support radius of random data"},
        {"T", "largest time window"},
        {"dt", "time step of the space-time norm"},
        {"growth_limit", "allowed growth per T-doubling"},
    };
    std::map<std::string, std::string> values;
    std::vector<CLI::App*> subs;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
        for (const auto& f : flags) sub->add_option(std::string("--") + f.name, values[f.name], f.help);
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Ok : Validation;
    }

    std::vector<std::string> problems;
    json config = json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            problems.push_back("cannot read config file " + config_path);
        } else {
            const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
                problems.push_back("config file " + config_path + " is empty");
            } else {
                try {
                    config = json::parse(body);
                    if (!config.is_object()) problems.push_back("config file must hold a JSON object");
                } catch (const json::parse_error& e) {
                    problems.push_back(std::string("config file is not valid JSON: ") + e.what());
                }
            }
        }
    }
    std::string command;
    for (auto* sub : subs)
        if (sub->parsed()) command = sub->get_name();
    if (command.empty()) {
        if (config.is_object() && config.contains("command") && config["command"].is_string())
            command = config["command"].get<std::string>();
        else
            problems.push_back("no command given (use a subcommand or a 'command' entry in the config)");
    }
    if (!problems.empty()) {
        std::cerr << "configuration errors:\n";
        for (const auto& p : problems) std::cerr << "  - " << p << '\n';
        return Validation;
    }
    for (const auto& [k, v] : values)
        if (!v.empty()) config[k] = v;
    if (config.is_object()) config.erase("command");
    const int rc = run(command, config, out_dir, std::cout);
    return rc;
}

} // namespace latdisp::cli
