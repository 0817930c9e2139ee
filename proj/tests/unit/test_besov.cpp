#include <cmath>

#include <doctest.h>

#include "boltz/collision.hpp"
#include "boltz/measure.hpp"
#include "boltz/rng.hpp"

using namespace boltz;

namespace
{
EmpiricalMeasure gaussian_cloud(std::size_t n, std::uint64_t seed)
{
    CounterStream rng(seed, 0xb5);
    std::vector<Vec3> pts(n);
    for (Vec3& p : pts)
    {
        double const x = rng.normal();
        double const y = rng.normal();
        double const z = rng.normal();
        p = {x, y, z};
    }
    return EmpiricalMeasure(std::move(pts));
}

}  // namespace

TEST_CASE("gaussian: linear in the shift with the analytic constant")
{
    std::vector<double> const r{0.4, 0.5, 0.6};
    std::vector<double> const h{0.1, 0.2, 0.3, 0.4};
    BesovEstimate const est = besov_estimate(gaussian_cloud(100000, 1), r, h, 0.1);
    MESSAGE("a = " << est.a_exp << ", kappa = " << est.kappa << ", rho = " << est.r_exponent);
    CHECK(std::abs(est.a_exp - 1) < 0.1);
    CHECK(est.kappa == doctest::Approx(std::sqrt(2 / pi)).epsilon(0.15));
    CHECK(est.monotone);
    CHECK_FALSE(est.singular);
    REQUIRE(est.s_est);
    CHECK(*est.s_est == doctest::Approx(est.a_exp - 0.1));
    CHECK(est.table.size() == 12);
}

TEST_CASE("unit cube: the edge gives a linear shift difference")
{
    CounterStream rng(2, 0);
    std::vector<Vec3> pts(200000);
    for (Vec3& p : pts)
    {
        double const x = rng.uniform();
        double const y = rng.uniform();
        double const z = rng.uniform();
        p = {x, y, z};
    }
    std::vector<double> const r{0.1, 0.15};
    std::vector<double> const h{0.025, 0.05, 0.1};
    BesovEstimate const est = besov_estimate(EmpiricalMeasure(pts), r, h, 0.1);
    MESSAGE("a = " << est.a_exp << ", kappa = " << est.kappa);
    CHECK(std::abs(est.a_exp - 1) < 0.1);
}

TEST_CASE("single atom is flagged singular")
{
    EmpiricalMeasure const m({Vec3{0, 0, 0}});
    std::vector<double> const r{0.2, 0.3, 0.4};
    std::vector<double> const h{0.02, 0.04, 0.08};
    BesovEstimate const est = besov_estimate(m, r, h, 0.1);
    MESSAGE("a = " << est.a_exp << ", rho = " << est.r_exponent);
    CHECK(std::abs(est.a_exp - 1) < 0.15);
    CHECK(est.r_exponent > 0.8);
    CHECK(est.singular);
}

TEST_CASE("shift differences are subadditive")
{
    EmpiricalMeasure const m = gaussian_cloud(5000, 3);
    GridDensity const g = ball_mollify(m, 0.5, GridSpec::covering(m, 0.1, 0.7));
    for (int axis = 0; axis < 3; ++axis)
        for (int a = 1; a <= 4; ++a)
            for (int b = 1; b <= 4; ++b)
                CHECK(shift_l1(g, axis, a + b)
                      <= shift_l1(g, axis, a) + shift_l1(g, axis, b) + 1e-12);
    CHECK(shift_l1(g, 0, 0) == 0);
    CHECK(shift_l1(g, 1, -3) == doctest::Approx(shift_l1(g, 1, 3)));
}

TEST_CASE("ball mollifier conserves mass")
{
    EmpiricalMeasure const m({Vec3{0.05, 0.01, -0.02}, Vec3{1, 1, 1}});
    GridDensity const g = ball_mollify(m, 0.4, GridSpec::cube(-1, 2, 60));
    CHECK(g.total_mass() == doctest::Approx(1).epsilon(0.03));
    CHECK_THROWS_AS(ball_mollify(m, 0, GridSpec::cube(-1, 2, 6)), std::invalid_argument);
}

TEST_CASE("argument checks")
{
    EmpiricalMeasure const m = gaussian_cloud(100, 4);
    std::vector<double> const r{0.5};
    std::vector<double> const h{0.1, 0.2};
    CHECK_THROWS_AS(besov_estimate(m, r, h, 0), std::domain_error);
    CHECK_THROWS_AS(besov_estimate(m, r, h, 1), std::domain_error);
    std::vector<double> const bad_r{1.5};
    CHECK_THROWS_AS(besov_estimate(m, bad_r, h, 0.1), std::domain_error);
    std::vector<double> const one_h{0.1};
    CHECK_THROWS_AS(besov_estimate(m, r, one_h, 0.1), std::invalid_argument);
}
