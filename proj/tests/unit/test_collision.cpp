#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <doctest.h>

#include "boltz/collision.hpp"
#include "test_util.hpp"

using namespace boltz;
using boltz::test::random_vec;

namespace
{
void check_vec(Vec3 const& a, Vec3 const& b, double tol = 1e-14)
{
    CHECK(a.x == doctest::Approx(b.x).epsilon(tol));
    CHECK(a.y == doctest::Approx(b.y).epsilon(tol));
    CHECK(a.z == doctest::Approx(b.z).epsilon(tol));
}

}  // namespace

TEST_CASE("frame for an axis vector")
{
    Frame const f = orthonormal_frame({2, 0, 0});
    check_vec(f.i_vec, {0, 2, 0});
    check_vec(f.j_vec, {0, 0, 2});
}

TEST_CASE("frame of zero is null")
{
    Frame const f = orthonormal_frame({});
    CHECK(f.i_vec == Vec3{});
    CHECK(f.j_vec == Vec3{});
    CHECK(gamma_vec(Vec3{}, 1.3) == Vec3{});
}

TEST_CASE("frame is orthogonal with norm |X|")
{
    CounterStream rng(7, 1);
    for (int n = 0; n < 1000; ++n)
    {
        Vec3 const x = random_vec(rng, 3);
        Frame const f = orthonormal_frame(x);
        double const len = norm(x);
        CHECK(std::abs(dot(x, f.i_vec)) <= 1e-12 * len * len);
        CHECK(std::abs(dot(x, f.j_vec)) <= 1e-12 * len * len);
        CHECK(std::abs(dot(f.i_vec, f.j_vec)) <= 1e-12 * len * len);
        CHECK(norm(f.i_vec) == doctest::Approx(len).epsilon(1e-13));
        CHECK(norm(f.j_vec) == doctest::Approx(len).epsilon(1e-13));
        // Right-handed: I x J points along X
        CHECK(dot(cross(f.i_vec, f.j_vec), x) > 0);
    }
}

TEST_CASE("gamma vector")
{
    Vec3 const x{2, 0, 0};
    check_vec(gamma_vec(x, 0), {0, 2, 0});
    check_vec(gamma_vec(x, half_pi), {0, 0, 2}, 1e-14);
    CHECK(std::abs(gamma_vec(x, half_pi).y) < 1e-15);

    CounterStream rng(7, 2);
    for (int n = 0; n < 200; ++n)
    {
        Vec3 const y = random_vec(rng);
        double const phi = two_pi * rng.uniform();
        CHECK(norm(gamma_vec(y, phi)) == doctest::Approx(norm(y)).epsilon(1e-13));
    }
}

TEST_CASE("deviation worked example")
{
    Vec3 const v{1, 0, 0};
    Vec3 const vs{-1, 0, 0};
    CollisionAngles const ang{half_pi, 0};
    Vec3 const a = deviation(v, vs, ang);
    check_vec(a, {-1, 1, 0});
    PostCollision const post = collide(v, vs, ang);
    check_vec(post.v, {0, 1, 0});
    CHECK(norm_sq(post.v) + norm_sq(post.v_star) == doctest::Approx(2.0));
}

TEST_CASE("deviation vanishes at theta = 0 and for v = v_*")
{
    CHECK(deviation(Vec3{1, 2, 3}, Vec3{0, 1, 0}, {0, 0.7}) == Vec3{});
    CHECK(deviation(Vec3{1, 2, 3}, Vec3{1, 2, 3}, {1.0, 0.7}) == Vec3{});
}

TEST_CASE("collision invariants on random inputs")
{
    CounterStream rng(11, 3);
    for (int n = 0; n < 20000; ++n)
    {
        Vec3 const v = random_vec(rng, 2);
        Vec3 const vs = random_vec(rng, 2);
        CollisionAngles const ang{half_pi * rng.uniform(), two_pi * rng.uniform()};
        PostCollision const post = collide(v, vs, ang);
        Vec3 const a = deviation(v, vs, ang);

        double const e0 = norm_sq(v) + norm_sq(vs);
        double const e1 = norm_sq(post.v) + norm_sq(post.v_star);
        CHECK(std::abs(e1 - e0) <= 1e-10 * e0);
        // Momentum is conserved to rounding of the two additions
        double const scale = norm(v) + norm(vs) + norm(a);
        CHECK(norm(post.v + post.v_star - (v + vs)) <= 4 * 2.3e-16 * scale);

        double const expected = std::sin(ang.theta / 2) * norm(v - vs);
        CHECK(norm(a) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sample_theta boundaries and inverse CDF")
{
    CrossSection cs{.gamma = 0.5, .nu = 0.5};
    CHECK(sample_theta(cs, 0.1, 0) == 0.1);
    CHECK(sample_theta(cs, 0.1, 1) == doctest::Approx(half_pi).epsilon(1e-15));

    // Brute-force oracle: adaptive quadrature of the density plus root finding
    auto const mass = [&](double hi) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            [&](double t) { return std::pow(t, -1 - cs.nu); }, 0.1, hi, 15, 1e-14);
    };
    double const total = mass(half_pi);
    for (double u : {0.5, 0.1, 0.9})
    {
        auto const f = [&](double th) { return mass(th) / total - u; };
        boost::uintmax_t iters = 200;
        auto const [lo, hi] = boost::math::tools::toms748_solve(
            f, 0.1, half_pi, boost::math::tools::eps_tolerance<double>(50), iters);
        double const oracle = (lo + hi) / 2;
        CHECK(std::abs(sample_theta(cs, 0.1, u) - oracle) <= 1e-10);
    }
}

TEST_CASE("sample_theta rejects bad cutoff")
{
    CrossSection cs;
    CHECK_THROWS_AS(sample_theta(cs, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(sample_theta(cs, 2, 0.5), std::domain_error);
}

TEST_CASE("cross section parameters")
{
    CrossSection cs{.gamma = 0.5, .nu = 0.5, .c0 = 1, .C0 = 2, .c_b = 1.5};
    CHECK_NOTHROW(cs.validate());
    CHECK(cs.b(0.5) == doctest::Approx(1.5 * std::pow(0.5, -1.5)));
    CHECK(cs.b(2.0) == 0);
    CHECK(cs.angular_mass(0.1)
          == doctest::Approx(1.5 * (std::pow(0.1, -0.5) - std::pow(half_pi, -0.5)) / 0.5));
    CHECK(cs.angular_mass(2.0) == 0);
    CHECK_THROWS_AS(cs.theta_min(), std::domain_error);

    cs.c_b = 3;
    CHECK_THROWS_AS(cs.validate(), std::domain_error);
    CrossSection bad{.gamma = -0.6, .nu = 0.5};
    CHECK_NOTHROW(bad.validate());
    CHECK_THROWS_AS(bad.validate_soft(), std::domain_error);
    CHECK_THROWS_AS((CrossSection{.nu = 1.0}.validate()), std::domain_error);

    CrossSection trunc{.gamma = 0.5, .nu = 0.5, .k = 10.0};
    CHECK(trunc.kinetic(4) == doctest::Approx(2));
    CHECK(trunc.kinetic(1e4) == 10);
    CHECK(trunc.theta_min() == doctest::Approx(0.1));
}

TEST_CASE("tanaka phi0: identical vectors")
{
    CounterStream rng(5, 5);
    for (int n = 0; n < 100; ++n)
    {
        Vec3 const x = random_vec(rng);
        double const phi0 = tanaka_phi0(x, x);
        CHECK((phi0 < 1e-12 || phi0 > two_pi - 1e-12));
    }
    CHECK(tanaka_phi0({}, {1, 0, 0}) == 0);
}

TEST_CASE("tanaka phi0: rotation about the X axis")
{
    // Y is X rotated about the x-axis; left side stays below 2 theta |X - Y|
    Vec3 const x{0.3, 1.0, -0.4};
    for (double angle : {0.01, 0.3, 1.0, 2.5})
    {
        double const c = std::cos(angle);
        double const s = std::sin(angle);
        Vec3 const y{x.x, c * x.y - s * x.z, s * x.y + c * x.z};
        double const phi0 = tanaka_phi0(x, y);
        for (int it = 1; it <= 16; ++it)
        {
            double const theta = half_pi * it / 16;
            for (int ip = 0; ip < 64; ++ip)
            {
                double const phi = two_pi * ip / 64;
                Vec3 const ax = deviation(x, orthonormal_frame(x), {theta, phi});
                Vec3 const ay = deviation(y, orthonormal_frame(y), {theta, phi + phi0});
                CHECK(norm(ax - ay) <= 2 * theta * norm(x - y) * (1 + 1e-12) + 1e-14);
            }
        }
    }
}

TEST_CASE("tanaka coupling bound on random tuples")
{
    CounterStream rng(3, 9);
    std::size_t violations = 0;
    for (int n = 0; n < 100000; ++n)
    {
        Vec3 const v = random_vec(rng);
        Vec3 const vs = random_vec(rng);
        Vec3 const w = random_vec(rng);
        Vec3 const ws = random_vec(rng);
        double const theta = half_pi * rng.uniform();
        double const phi = two_pi * rng.uniform();
        double const phi0 = tanaka_phi0(v - vs, w - ws);
        Vec3 const a1 = deviation(v, vs, {theta, phi});
        Vec3 const a2 = deviation(w, ws, {theta, phi + phi0});
        double const bound = 2 * theta * (norm(v - w) + norm(vs - ws));
        if (norm(a1 - a2) > bound * (1 + 1e-12) + 1e-14)
            ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("exchange identity of the azimuthal average")
{
    CounterStream rng(13, 1);
    // The kink of |y| limits a 1024-point trapezoid to about 5e-6
    auto const avg = [](auto&& f) {
        double s = 0;
        for (int i = 0; i < 4096; ++i)
            s += f(two_pi * i / 4096);
        return s / 4096;
    };
    for (int n = 0; n < 100; ++n)
    {
        Vec3 const xi = random_vec(rng, 2);
        Vec3 const x = random_vec(rng, 2);
        Frame const fx = orthonormal_frame(x);
        Frame const fxi = orthonormal_frame(xi);
        auto const check = [&](auto&& F) {
            double const lhs = avg([&](double p) { return F(dot(xi, gamma_vec(fx, p))); });
            double const rhs = avg([&](double p) { return F(dot(x, gamma_vec(fxi, p))); });
            CHECK(boltz::test::rel_diff(lhs, rhs) <= 1e-6);
        };
        check([](double y) { return std::abs(y); });
        check([](double y) { return y * y; });
        check([](double y) { return std::cos(y); });
    }
}
