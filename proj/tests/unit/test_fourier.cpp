#include <cmath>

#include <doctest.h>

#include "boltz/fourier.hpp"
#include "boltz/rng.hpp"
#include "test_util.hpp"

using namespace boltz;

namespace
{
// Constant-in-time background of a scaled normal cloud around \c center
std::vector<Snapshot> gaussian_background(Vec3 center, double sigma, std::size_t n, std::uint64_t seed)
{
    CounterStream rng(seed, 0xf0);
    std::vector<Vec3> pts(n);
    for (Vec3& p : pts)
    {
        double const x = rng.normal();
        double const y = rng.normal();
        double const z = rng.normal();
        p = center + sigma * Vec3{x, y, z};
    }
    std::vector<Snapshot> out;
    for (double t : {0.8, 0.93, 1.0})
    {
        Snapshot s;
        s.t = t;
        s.measure = EmpiricalMeasure(pts);
        out.push_back(s);
    }
    return out;
}

LevyCtx make_ctx(std::span<Snapshot const> bg, double gamma, double nu)
{
    LevyCtx ctx;
    ctx.eps = 0.1;
    ctx.t = 1;
    ctx.v0 = {0.5, 0, 0};
    ctx.background = bg;
    ctx.cs = {.gamma = gamma, .nu = nu};
    ctx.phi_rule = PhiRule::bessel;
    return ctx;
}

}  // namespace

TEST_CASE("symbol at the origin and for a dirac background")
{
    auto const bg = gaussian_background({}, 1, 200, 1);
    LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
    SymbolValue const zero = psi(ctx, {});
    CHECK(zero.psi_re == 0);
    CHECK(zero.psi_im == 0);

    auto const dirac = gaussian_background(ctx.v0, 0, 10, 2);
    ctx.background = dirac;
    SymbolValue const v = psi(ctx, {3, -1, 2});
    CHECK(v.psi_re == 0);
    CHECK(v.psi_im == 0);
    CHECK(lambda_moments(ctx, 1).value == 0);
    CHECK(lambda_moments(ctx, 4).value == 0);
}

TEST_CASE("conjugate symmetry and nonnegative real part")
{
    auto const bg = gaussian_background({}, 1, 100, 3);
    CounterStream rng(4, 0);
    for (PhiRule rule : {PhiRule::bessel, PhiRule::uniform})
    {
        LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
        ctx.phi_rule = rule;
        ctx.max_velocity_samples = rule == PhiRule::uniform ? 20 : 0;
        for (int i = 0; i < 10; ++i)
        {
            Vec3 const xi = test::random_vec(rng, 30);
            SymbolValue const a = psi(ctx, xi);
            SymbolValue const b = psi(ctx, -1.0 * xi);
            CHECK(a.psi_re >= 0);
            CHECK(std::abs(a.value() - std::conj(b.value())) <= 1e-10 * std::abs(a.value()));
        }
    }
}

TEST_CASE("bessel and trapezoid azimuthal rules agree")
{
    auto const bg = gaussian_background({}, 1, 30, 5);
    LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
    CounterStream rng(6, 0);
    for (int i = 0; i < 5; ++i)
    {
        Vec3 const xi = test::random_vec(rng, 50);
        ctx.phi_rule = PhiRule::bessel;
        SymbolValue const a = psi(ctx, xi);
        ctx.phi_rule = PhiRule::uniform;
        SymbolValue const b = psi(ctx, xi);
        CHECK(std::abs(a.value() - b.value()) <= 1e-6 * std::abs(a.value()));
        CHECK(a.rel_error < 1e-6);
    }
}

TEST_CASE("additivity over time windows")
{
    auto const bg = gaussian_background({}, 1, 100, 7);
    LevyCtx const ctx = make_ctx(bg, -0.5, 0.8);
    for (Vec3 const xi : {Vec3{1, 2, 3}, Vec3{-40, 5, 0}})
    {
        SymbolValue const whole = psi(ctx, xi);
        for (double split : {0.93, 0.95})
        {
            SymbolValue const a = psi_window(ctx, xi, 0.9, split);
            SymbolValue const b = psi_window(ctx, xi, split, 1.0);
            CHECK(std::abs(a.value() + b.value() - whole.value()) <= 1e-12 * std::abs(whole.value()));
        }
    }
}

TEST_CASE("coercivity on a gaussian background")
{
    auto const bg = gaussian_background({}, 1, 256, 8);
    LevyCtx const ctx = make_ctx(bg, 0.5, 0.5);
    auto const grid = radial_direction_grid(0.1, 10, 9, 6);
    CoercivityResult const c = verify_coercivity(ctx, grid);
    MESSAGE("c_hat = " << c.c_hat << " at " << c.argmin);
    CHECK(c.c_hat > 0);
    CHECK_FALSE(c.degenerate);
    CHECK(c.evaluated == grid.size());

    std::vector<Vec3> doubled;
    for (Vec3 const& xi : grid)
        doubled.push_back(2.0 * xi);
    CoercivityResult const c2 = verify_coercivity(ctx, doubled);
    MESSAGE("doubled grid: c_hat = " << c2.c_hat);
    CHECK(c2.c_hat > 0);
    CHECK(c2.c_hat / c.c_hat > 0.25);
    CHECK(c2.c_hat / c.c_hat < 4);

    std::vector<Vec3> with_zero{Vec3{}, Vec3{1, 0, 0}};
    CoercivityResult const cz = verify_coercivity(ctx, with_zero);
    CHECK(cz.excluded == 1);
    CHECK(cz.evaluated == 1);
}

TEST_CASE("soft potential coercivity uses the velocity weight")
{
    auto const bg = gaussian_background({}, 1, 256, 9);
    LevyCtx ctx = make_ctx(bg, -0.5, 0.8);
    ctx.v0 = {2, 0, 0};
    CHECK(coercivity_weight(ctx.cs, ctx.v0) == doctest::Approx(std::pow(3.0, -0.5)));
    CHECK(coercivity_weight({.gamma = 0.5, .nu = 0.5}, ctx.v0) == 1);
    CoercivityResult const c = verify_coercivity(ctx, radial_direction_grid(0.1, 10, 9, 6));
    MESSAGE("c_hat = " << c.c_hat);
    CHECK(c.c_hat > 0);
}

TEST_CASE("coercivity degenerates as the background contracts")
{
    std::vector<double> c_hat;
    auto const grid = radial_direction_grid(0.1, 10, 5, 4);
    for (double sigma : {1.0, 0.5, 0.25, 0.1, 0.0})
    {
        auto const bg = gaussian_background({0.5, 0, 0}, sigma, 64, 10);
        LevyCtx const ctx = make_ctx(bg, 0.5, 0.5);
        c_hat.push_back(verify_coercivity(ctx, grid).c_hat);
    }
    MESSAGE("c_hat: " << c_hat[0] << ", " << c_hat[1] << ", " << c_hat[2] << ", " << c_hat[3]);
    for (std::size_t i = 1; i < c_hat.size(); ++i)
        CHECK(c_hat[i] <= c_hat[i - 1]);
    CHECK(c_hat.back() == 0);
}

TEST_CASE("lambda moments")
{
    auto const bg = gaussian_background({}, 1, 500, 11);
    LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
    std::vector<double> m1;
    for (double eps : {0.2, 0.1, 0.05, 0.025})
    {
        ctx.eps = eps;
        for (int n : {1, 4})
        {
            LambdaMoment const m = lambda_moments(ctx, n);
            CHECK(m.value > 0);
            CHECK(m.value <= m.bound);
        }
        m1.push_back(lambda_moments(ctx, 1).value);
    }
    MESSAGE("m1 over eps: " << m1[0] << ", " << m1[1] << ", " << m1[2] << ", " << m1[3]);
    for (std::size_t i = 1; i < m1.size(); ++i)
        CHECK(m1[i] == doctest::Approx(m1[i - 1]).epsilon(0.05));
    CHECK_THROWS_AS(lambda_moments(ctx, 2), std::domain_error);
}

TEST_CASE("lambda first moment against direct quadrature")
{
    // One background velocity: m1 = eps^(1 - 1/nu) |X|^(1 + gamma) 2 pi int sin(theta/2) b
    std::vector<Snapshot> bg(2);
    bg[0].t = 0;
    bg[1].t = 1;
    bg[0].measure = bg[1].measure = EmpiricalMeasure({Vec3{0, 0, 0}});
    LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
    ctx.v0 = {2, 0, 0};
    double const tm = ctx.theta_max();
    // theta = u^2 turns sin(theta/2) theta^(-3/2) d theta into 2 sin(u^2/2)/u^2 du
    double const um = std::sqrt(tm);
    double integral = 0;
    int const steps = 200000;
    for (int i = 0; i < steps; ++i)
    {
        double const u = um * (i + 0.5) / steps;
        integral += 2 * std::sin(u * u / 2) / (u * u) * um / steps;
    }
    double const expected = std::pow(0.1, -2.0) * 0.1 * std::pow(2.0, 1.5) * two_pi * integral;
    CHECK(lambda_moments(ctx, 1).value == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("context validation")
{
    auto const bg = gaussian_background({}, 1, 10, 12);
    LevyCtx ctx = make_ctx(bg, 0.5, 0.5);
    CHECK_THROWS_AS(psi(ctx, {NAN, 0, 0}), std::domain_error);
    ctx.eps = 1;
    CHECK_THROWS_AS(psi(ctx, {1, 0, 0}), std::domain_error);
    ctx.eps = 0.5;
    CHECK_THROWS_AS(psi(ctx, {1, 0, 0}), std::domain_error);
    ctx.eps = 0.1;
    ctx.background = {};
    CHECK_THROWS_AS(psi(ctx, {1, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(radial_direction_grid(0, 1, 3, 3), std::invalid_argument);
    auto const g = radial_direction_grid(0.1, 10, 3, 4);
    REQUIRE(g.size() == 12);
    CHECK(norm(g[0]) == doctest::Approx(0.1));
    CHECK(norm(g[11]) == doctest::Approx(10));
}
