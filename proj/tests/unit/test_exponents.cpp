#include <cmath>

#include <doctest.h>

#include "boltz/measure.hpp"

using namespace boltz;

namespace
{
// Brute-force supremum over a uniform alpha-grid of (0, nu]
double grid_sup(double gamma, double nu, int n)
{
    double const m = 2 + gamma / nu;
    double best = -1;
    for (int i = 1; i <= n; ++i)
    {
        double const a = nu * i / n;
        best = std::max(best, m * a / (1 + m * a) - a);
    }
    return best;
}

}  // namespace

TEST_CASE("hard potentials")
{
    CHECK(smoothness_exponent_hard(0.1) == doctest::Approx(0.08 / 1.2).epsilon(1e-14));
    double const d = std::sqrt(2.0) - 1;
    CHECK(smoothness_exponent_hard(0.5) == doctest::Approx(0.0857864).epsilon(1e-6));
    CHECK(smoothness_exponent_hard(0.5) == doctest::Approx(d * d / 2).epsilon(1e-14));

    double const b = d / 2;
    double const first = (b - 2 * b * b) / (1 + 2 * b);
    CHECK(std::abs(first - d * d / 2) < 1e-12);
    CHECK(std::abs(smoothness_exponent_hard(b) - first) < 1e-12);
    CHECK(std::abs(smoothness_exponent_hard(std::nextafter(b, 0.0)) - d * d / 2) < 1e-12);

    CHECK_THROWS_AS(smoothness_exponent_hard(0), std::domain_error);
    CHECK_THROWS_AS(smoothness_exponent_hard(1), std::domain_error);
}

TEST_CASE("soft reduces to hard at gamma = 0")
{
    double worst = 0;
    for (int i = 0; i < 1000; ++i)
    {
        double const nu = 0.001 + 0.998 * i / 999.0;
        worst = std::max(worst, std::abs(smoothness_exponent_soft(0, nu) - smoothness_exponent_hard(nu)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("soft potentials against a grid oracle")
{
    double const oracle = grid_sup(-0.5, 0.8, 1000000);
    SoftExponent const s = smoothness_exponent_soft_detail(-0.5, 0.8);
    CHECK(oracle == doctest::Approx(0.021666).epsilon(1e-4));
    CHECK(std::abs(s.value - oracle) < 1e-10);
    CHECK(std::abs(s.value - s.closed_form) < 1e-12);
    CHECK(s.alpha_star == doctest::Approx((std::sqrt(1.375) - 1) / 1.375));

    double const v = smoothness_exponent_soft(-0.5, 0.6);
    CHECK(v > 0);
    CHECK(std::abs(v - grid_sup(-0.5, 0.6, 1000000)) < 1e-10);

    // Interior optimum beyond nu: boundary value
    SoftExponent const edge = smoothness_exponent_soft_detail(-0.02, 0.05);
    CHECK(edge.alpha_star == 0.05);
    CHECK(std::abs(edge.value - edge.closed_form) < 1e-12);
}

TEST_CASE("soft domain errors")
{
    CHECK_THROWS_AS(smoothness_exponent_soft(0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(smoothness_exponent_soft(-1, 0.5), std::domain_error);
    CHECK_THROWS_AS(smoothness_exponent_soft(-0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(smoothness_exponent_soft(-0.2, 1), std::domain_error);
}
