#include <doctest.h>

#include <algorithm>
#include <random>

#include "../oracles/oracles.hpp"
#include "latdisp/error.hpp"
#include "latdisp/lattice_core.hpp"

using namespace latdisp;

TEST_CASE("params derive the spectral interval")
{
    JunctionParams p(1.0, 0.5);
    CHECK(p.coeff(1) == 1.0);
    CHECK(p.coeff(2) == 4.0);
    CHECK(p.spectral_min() == -16.0);
    CHECK(p.spectral_max() == 0.0);
    CHECK_THROWS_AS(JunctionParams(0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(JunctionParams(1.0, -2.0), InvalidArgument);
}

TEST_CASE("state index map skips the origin on Z*")
{
    LatticeState s(3, false);
    CHECK(s.size() == 6);
    CHECK_FALSE(s.contains(0));
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(s.offset(s.site(k)) == k);
    CHECK(s.site(2) == -1);
    CHECK(s.site(3) == 1);
    LatticeState o(3, true);
    CHECK(o.size() == 7);
    CHECK(o.site(3) == 0);
    CHECK_THROWS_AS(LatticeState::delta(3, false, 0), InvalidArgument);
}

TEST_CASE("norms")
{
    LatticeState s(2, false);
    s[-2] = {3.0, 4.0};
    s[1] = -1.0;
    CHECK(s.norm1() == doctest::Approx(6.0));
    CHECK(s.norm2() == doctest::Approx(std::sqrt(26.0)));
    CHECK(s.norm_inf() == doctest::Approx(5.0));
    CHECK(s.norm(std::numeric_limits<double>::infinity()) == doctest::Approx(5.0));
    CHECK(s.norm(3.0) == doctest::Approx(std::cbrt(126.0)));
}

TEST_CASE("equal coefficients: Model1 is Δ_d plus the interface block")
{
    const auto op = build_operator(JunctionParams(1.0, 1.0), Variant::Model1, 4);
    const Eigen::MatrixXd a = op.dense();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
        lap(i, i) = -2.0;
        if (i + 1 < 8) lap(i, i + 1) = lap(i + 1, i) = 1.0;
    }
    Eigen::MatrixXd b = a - lap;
    // B has the only nonzero block [[1/2, −1/2], [−1/2, 1/2]] at offsets 3, 4 (sites −1, 1)
    CHECK(b(3, 3) == doctest::Approx(0.5));
    CHECK(b(4, 4) == doctest::Approx(0.5));
    CHECK(b(3, 4) == doctest::Approx(-0.5));
    CHECK(b(4, 3) == doctest::Approx(-0.5));
    b(3, 3) = b(4, 4) = b(3, 4) = b(4, 3) = 0.0;
    CHECK(b.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("equal coefficients b: Model1 scales as b^-2")
{
    const double b = 1.7;
    const auto op = build_operator(JunctionParams(b, b), Variant::Model1, 5);
    const auto unit = build_operator(JunctionParams(1.0, 1.0), Variant::Model1, 5);
    CHECK((op.dense() - unit.dense() / (b * b)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Model1 interface rows")
{
    const double b1 = 1.0, b2 = 2.0;
    const auto op = build_operator(JunctionParams(b1, b2), Variant::Model1, 4);
    const Eigen::MatrixXd a = op.dense();
    const double w = 1.0 / (b1 * b1 + b2 * b2);
    CHECK(a(3, 3) == doctest::Approx(-1.0 - w));
    CHECK(a(4, 4) == doctest::Approx(-w - 0.25));
    CHECK(a(3, 4) == doctest::Approx(w));
    CHECK(a(0, 0) == doctest::Approx(-2.0));
    CHECK(a(7, 7) == doctest::Approx(-0.5));
    CHECK(a(6, 7) == doctest::Approx(0.25));
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Model2 origin row, and with unit coefficients it is the free Laplacian")
{
    const auto op = build_operator(JunctionParams(1.0, 3.0), Variant::Model2, 4);
    const Eigen::MatrixXd a = op.dense();
    CHECK(a(4, 3) == doctest::Approx(1.0));
    CHECK(a(4, 4) == doctest::Approx(-(1.0 + 1.0 / 9.0)));
    CHECK(a(4, 5) == doctest::Approx(1.0 / 9.0));
    const auto m2 = build_operator(JunctionParams(1.0, 1.0), Variant::Model2, 4).dense();
    const auto fl = build_operator(JunctionParams(3.0, 5.0), Variant::FreeLaplacian, 4).dense();
    CHECK((m2 - fl).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("operator rejects bad sizes")
{
    CHECK_THROWS_AS(build_operator(JunctionParams(1, 1), Variant::Model1, 1), InvalidArgument);
}

TEST_CASE("quadratic form: matrix, difference sums and the spectral bounds")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ub(0.3, 3.0), uu(-1.0, 1.0);
    for (Variant v : {Variant::Model1, Variant::Model2, Variant::FreeLaplacian}) {
        for (int trial = 0; trial < 40; ++trial) {
            const JunctionParams p(ub(rng), ub(rng));
            const auto op = build_operator(p, v, 20);
            std::vector<double> u(op.dim(), 0.0);
            // supported away from the truncation ends
            for (std::size_t i = 2; i + 2 < u.size(); ++i) u[i] = uu(rng);
            const double qf = quadratic_form(op, u);
            const double ds = quadratic_form_difference_sum(op, u);
            double nrm = 0;
            for (double x : u) nrm += x * x;
            CHECK(std::abs(qf - ds) <= 1e-12 * std::abs(qf));
            CHECK(qf <= 0.0);
            CHECK(qf >= op.params.spectral_min() * nrm * (1 + 1e-14));
        }
    }
}

TEST_CASE("constant interior vector: form vanishes up to the truncation rows")
{
    const auto op = build_operator(JunctionParams(1.0, 1.0), Variant::Model1, 10);
    std::vector<double> u(op.dim(), 1.0);
    // only the two Dirichlet-end terms survive: −(1² + 1²)
    CHECK(quadratic_form(op, u) == doctest::Approx(-2.0));
}

TEST_CASE("spectrum inside the interval")
{
    for (auto [b1, b2] : {std::pair{1.0, 1.0}, std::pair{1.0, 0.5}, std::pair{2.0, 0.7}}) {
        const auto rep = spectrum_check(build_operator(JunctionParams(b1, b2), Variant::Model1, 512));
        CHECK(rep.excess_below <= 1e-10);
        CHECK(rep.excess_above <= 1e-10);
        CHECK(rep.bin_fill_fraction == doctest::Approx(1.0));
    }
    const auto rep = spectrum_check(build_operator(JunctionParams(1.0, 0.5), Variant::Model1, 512));
    CHECK(rep.min_eigenvalue > -16.0);
    CHECK(rep.min_eigenvalue < -15.99);
}

TEST_CASE("free Laplacian eigenvalues match the Dirichlet closed form")
{
    const int n = 512;
    const auto rep = spectrum_check(build_operator(JunctionParams(1, 1), Variant::FreeLaplacian, n));
    auto ref = oracle::dirichlet_laplacian_eigenvalues(2 * n + 1);
    std::sort(ref.begin(), ref.end());
    REQUIRE(ref.size() == rep.eigenvalues.size());
    double worst = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(ref[i] - rep.eigenvalues[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("spectrum check refuses oversized eigensolves")
{
    CHECK_THROWS_AS(spectrum_check(build_operator(JunctionParams(1, 1), Variant::Model1, 4097)), InvalidArgument);
}

TEST_CASE("reflection-safe half-width grows with the light cone")
{
    CHECK(reflection_safe_half_width(5, 1.0, 0.0) >= 5 + 16);
    CHECK(reflection_safe_half_width(0, 1.0, 100.0) >= 200);
    CHECK(reflection_safe_half_width(0, 0.25, 100.0) < reflection_safe_half_width(0, 1.0, 100.0));
}
