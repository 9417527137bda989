#include <doctest.h>

#include <cmath>

#include "latdisp/error.hpp"
#include "latdisp/evolution.hpp"
#include "latdisp/oscillatory.hpp"

using namespace latdisp;

namespace {
constexpr double pi = 3.141592653589793;
}

TEST_CASE("Fresnel asymptotics of the quadratic phase")
{
    const auto ph = power_phase(2, -1.0, 1.0);
    const auto one = make_weight(WeightKind::One, ph);
    const double t = 1e4;
    const auto r = osc_integral(ph, one, t, 0.0, 1e-12);
    const std::complex<double> lead = std::sqrt(pi / t) * std::polar(1.0, pi / 4.0);
    CHECK(std::abs(r.value - lead) / std::abs(lead) < 0.02);
    // without oscillation the integral is the length
    CHECK(std::abs(osc_integral(ph, one, 0.0, 0.0, 1e-13).value - 2.0) < 1e-12);
}

TEST_CASE("oscillatory integral with a linear term")
{
    // ∫_{-1}^{1} e^{-ixξ} dξ = 2 sin x / x for the t = 0 slice
    const auto ph = power_phase(2, -1.0, 1.0);
    const auto one = make_weight(WeightKind::One, ph);
    for (double x : {0.5, 7.0, 300.0}) {
        const auto r = osc_integral(ph, one, 0.0, x, 1e-13);
        CHECK(std::abs(r.value - 2.0 * std::sin(x) / x) < 1e-12);
    }
}

TEST_CASE("lattice dispersion phase reproduces the kernel")
{
    const auto ph = lattice_dispersion_phase();
    const Weight w = [](double) { return std::complex<double>(1.0 / (2.0 * pi)); };
    for (int j : {0, 3, -11})
        for (double t : {2.0, 50.0}) {
            // (1/2π)∫ e^{it(2cos ξ − 2) + ijξ} dξ with φ(ξ) = −4 sin²(ξ/2) = 2cos ξ − 2
            const auto r = osc_integral(ph, w, t, -static_cast<double>(j), 1e-13);
            CHECK(std::abs(r.value - kernel_Kt(j, t, 1e-13)) < 1e-12);
        }
}

TEST_CASE("supplied derivatives agree with finite differences")
{
    CHECK(derivative_consistency(power_phase(2, -1.0, 1.0)) < 1e-6);
    CHECK(derivative_consistency(power_phase(3, -1.0, 1.0)) < 1e-6);
    CHECK(derivative_consistency(power_phase(4, -1.0, 1.0)) < 1e-6);
    CHECK(derivative_consistency(lattice_dispersion_phase()) < 1e-6);
}

TEST_CASE("classification bounds hold")
{
    for (const auto& ph : {power_phase(3, -1.0, 1.0), power_phase(4, -1.0, 1.0), lattice_dispersion_phase()}) {
        const auto c = check_classification(ph);
        CHECK(c.ok);
        CHECK(c.worst_lower_ratio >= 1.0);
        CHECK(c.worst_upper_ratio <= 1.0);
    }
    CHECK(power_phase(2, -1.0, 1.0).cls == PhaseClass::A2);
    CHECK(power_phase(2, -1.0, 1.0).stationary.empty());
    CHECK(power_phase(4, -1.0, 1.0).cls == PhaseClass::A3);
}

TEST_CASE("Fornberg weights")
{
    const auto w1 = central_difference_weights(1, 1, 1.0);
    REQUIRE(w1.size() == 3);
    CHECK(w1[0] == doctest::Approx(-0.5));
    CHECK(w1[1] == doctest::Approx(0.0));
    CHECK(w1[2] == doctest::Approx(0.5));
    const auto w2 = central_difference_weights(2, 2, 0.1);
    const double expect[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    for (int i = 0; i < 5; ++i) CHECK(w2[static_cast<std::size_t>(i)] == doctest::Approx(expect[i] / 0.01));
}

TEST_CASE("decay orders")
{
    CHECK(decay_order(WeightKind::HalfPowerSecond, power_phase(2, -1.0, 1.0)) == 2);
    CHECK(decay_order(WeightKind::ThirdPowerThird, power_phase(4, -1.0, 1.0)) == 3);
}

TEST_CASE("boundedness verdict")
{
    std::vector<double> t, flat, growing;
    for (double s : geometric_grid(10.0, 1e4, 5)) {
        t.push_back(s);
        flat.push_back(1.0 + 0.1 * std::sin(s));
        growing.push_back(std::pow(s, 0.2));
    }
    CHECK(assess_boundedness(t, flat).bounded);
    const auto g = assess_boundedness(t, growing);
    CHECK_FALSE(g.bounded);
    CHECK(g.slope == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("decay certificates on the model phases")
{
    const auto ts = geometric_grid(10.0, 1000.0, 3);
    std::vector<double> xs;
    for (int i = 0; i <= 8; ++i) xs.push_back(-2.0 + 0.5 * i);

    const auto c2 = certify_decay(power_phase(2, -1.0, 1.0), WeightKind::HalfPowerSecond, ts, xs);
    CHECK(c2.k == 2);
    CHECK(c2.certified);
    CHECK(c2.sup_rows.size() == ts.size());

    const auto c4 = certify_decay(power_phase(4, -1.0, 1.0), WeightKind::ThirdPowerThird, ts, xs);
    CHECK(c4.k == 3);
    CHECK(c4.certified);

    // φ‴ ≡ 0 for ξ², so the third-power weight is identically zero
    CHECK_THROWS_AS(certify_decay(power_phase(2, -1.0, 1.0), WeightKind::ThirdPowerThird, ts, xs), InvalidArgument);
    CHECK_THROWS_AS(certify_decay(power_phase(2, -1.0, 1.0), WeightKind::One, std::vector<double>{0.5}, xs),
                    InvalidArgument);
}

TEST_CASE("weight names round trip")
{
    for (auto k : {WeightKind::One, WeightKind::HalfPowerSecond, WeightKind::ThirdPowerThird, WeightKind::Sine})
        CHECK(parse_weight_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_weight_kind("cosine"), InvalidArgument);
}
