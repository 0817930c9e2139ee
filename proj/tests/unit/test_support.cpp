#include <cmath>

#include <doctest.h>

#include "boltz/rng.hpp"
#include "boltz/support.hpp"
#include "test_util.hpp"

using namespace boltz;

namespace
{
std::vector<Vec3> uniform_ball(Vec3 center, double radius, std::size_t n, std::uint64_t seed)
{
    CounterStream rng(seed, 0x5a);
    std::vector<Vec3> out;
    while (out.size() < n)
    {
        double const x = 2 * rng.uniform() - 1;
        double const y = 2 * rng.uniform() - 1;
        double const z = 2 * rng.uniform() - 1;
        Vec3 const v{x, y, z};
        if (norm_sq(v) <= 1)
            out.push_back(center + radius * v);
    }
    return out;
}

std::vector<Snapshot> as_snapshots(std::vector<std::vector<Vec3>> clouds)
{
    std::vector<Snapshot> out;
    for (std::size_t i = 0; i < clouds.size(); ++i)
    {
        Snapshot s;
        s.t = 0.5 + 0.1 * static_cast<double>(i);
        s.measure = EmpiricalMeasure(std::move(clouds[i]));
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("membership in K")
{
    CHECK(in_K({2, 0, 0}, {{}, {1, 0, 0}}));
    CHECK_FALSE(in_K({4, 0, 0}, {{}, {1, 0, 0}}));
    CHECK_FALSE(in_K({4, 0, 0}, {{5, 5, 5}, {}}));
    CHECK_FALSE(in_K({2, 0, 0}, {{}, {0, 0, 5}}));
    // zeta = 0 leaves the radial conditions only
    CHECK(in_K({0, 0, 0.5}, {{0, 0, 2}, {}}));
    CHECK_FALSE(in_K({0, 0, 1.5}, {{0, 0, 2}, {}}));
    CHECK(sg(0) == 1);
    CHECK(sg(-0.1) == -1);
}

TEST_CASE("the inner unit ball lies in K")
{
    CounterStream rng(1, 0);
    int violations = 0;
    for (int i = 0; i < 1000000; ++i)
    {
        Kset k{test::random_vec(rng, 3), test::random_vec(rng, i % 2 ? 1 : 1e-3)};
        Vec3 const x = inner_ball_center(k);
        // Uniform point of the open unit ball around x
        Vec3 d = test::random_vec(rng, 1);
        double const len = norm(d);
        d = (0.999999 * std::cbrt(rng.uniform()) / len) * d;
        violations += !in_K(x + d, k);
    }
    CHECK(violations == 0);
    CHECK(norm(inner_ball_center({{1, 0, 0}, {0.5, 0, 0}}) - Vec3{-2, 0, 0}) == 0);
    CHECK_THROWS_AS(inner_ball_center({{1, 0, 0}, {}}), std::invalid_argument);
}

TEST_CASE("q on a uniform ball matches the volume fraction")
{
    auto const snaps = as_snapshots({uniform_ball({}, 3, 100000, 2)});
    // K(w far away, zeta = e_z) is B(0, 3) minus the slab |z| < 1
    std::vector<Kset> const probes{{{10, 0, 0}, {0, 0, 1}}};
    double const exact = 1 - (52.0 / 3) / 36;
    QEstimate const q = estimate_q(snaps, probes);
    double const se = std::sqrt(exact * (1 - exact) / 1e5);
    CHECK(std::abs(q.q - exact) < 4 * se);
    CHECK(q.inclusion_ok);
}

TEST_CASE("q vanishes on a dirac at the origin")
{
    auto const snaps = as_snapshots({std::vector<Vec3>(10, Vec3{})});
    std::vector<Kset> const probes{{{}, {1, 0, 0}}, {{0.5, 0, 0}, {0, 1, 0}}};
    CHECK(estimate_q(snaps, probes).q == 0);
}

TEST_CASE("q equals brute-force enumeration and shrinks with more probes")
{
    auto const snaps = as_snapshots({uniform_ball({0.3, 0, 0}, 2.5, 3000, 3),
                                     uniform_ball({-0.2, 0.1, 0}, 2.8, 3000, 4)});
    auto const probes = default_probes(6);
    CHECK(probes.size() == (1 + 2 * 6) * 6 * 3);
    QEstimate const q = estimate_q(snaps, probes, 5);
    double brute = INFINITY;
    for (Snapshot const& s : snaps)
        for (Kset const& k : probes)
        {
            std::size_t count = 0;
            for (Vec3 const& v : s.measure.samples())
                count += in_K(v, k);
            brute = std::min(brute, count / 3000.0);
        }
    CHECK(q.q == doctest::Approx(brute).epsilon(1e-12));
    CHECK(q.q > 0);
    CHECK(q.inclusion_ok);
    CHECK(q.inner_ball_mass > 0);

    std::vector<Kset> fewer(probes.begin(), probes.begin() + 20);
    CHECK(estimate_q(snaps, fewer).q >= q.q);
    CHECK_THROWS_AS(estimate_q(snaps, std::vector<Kset>{}), std::invalid_argument);
}

TEST_CASE("sqrt(2) growth construction")
{
    CounterStream rng(6, 0);
    double worst = 0;
    for (int i = 0; i < 100000; ++i)
    {
        Vec3 const x = test::random_vec(rng, 2);
        double const r = 0.1 + 3 * rng.uniform();
        Vec3 dir = test::random_vec(rng, 1);
        dir *= 1 / norm(dir);
        double const rad = i == 0 ? 0 : std::sqrt(2.0) * r * (i % 10 == 0 ? 1 : std::cbrt(rng.uniform()));
        Vec3 const v = x + rad * dir;
        SpherePair const p = sqrt2_pair(x, r, v);
        worst = std::max(worst, std::abs(norm(p.v1 - x) - r) / r);
        worst = std::max(worst, std::abs(norm(p.v2 - x) - r) / r);
        Vec3 const mid = 0.5 * (p.v1 + p.v2);
        double const half = norm(p.v1 - p.v2) / 2;
        worst = std::max(worst, std::abs(norm(v - mid) - half) / r);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("sphere spreading")
{
    std::vector<Vec3> const pair{{1, 0, 0}, {-1, 0, 0}};
    SpreadResult const two = sphere_spread(pair, 2, 4, 8, 1);
    CHECK(two.x0 == Vec3{});
    CHECK(two.r0 == 1);
    CHECK(two.guaranteed_radius == 2);

    SpreadResult const none = sphere_spread(pair, 0, 4);
    CHECK(none.cloud == pair);
    CHECK(none.guaranteed_radius == 1);

    for (int n = 0; n <= 6; ++n)
        CHECK(sphere_spread(pair, n, 1, 1).guaranteed_radius == std::pow(2.0, n / 2.0));

    CHECK_THROWS_AS(sphere_spread(std::vector<Vec3>(3, Vec3{1, 1, 1}), 2, 4), DiracCloudError);
    CHECK_THROWS_AS(sphere_spread(std::vector<Vec3>{{1, 0, 0}}, 2, 4), DiracCloudError);
    CHECK_THROWS_AS(sphere_spread(pair, -1, 4), std::invalid_argument);
}

TEST_CASE("dense spreading covers the guaranteed ball")
{
    std::vector<Vec3> const pair{{1, 0, 0}, {-1, 0, 0}};
    SpreadResult const s = sphere_spread(pair, 4, 32, 8192, 7);
    double const cov = coverage_fraction(s.cloud, s.x0, 4 * s.r0 * 0.99, 0.25);
    MESSAGE("coverage " << cov << " with " << s.cloud.size() << " points");
    CHECK(cov >= 0.95);
}

TEST_CASE("coverage and occupancy")
{
    std::vector<Vec3> const one{{0, 0, 0}};
    // Cells: the center only for radius below the cell size
    CHECK(occupied_fraction(one, {}, 0.4, 0.5) == 1);
    CHECK(coverage_fraction(one, {}, 0.4, 0.5) == 1);
    // 7 cells within radius 1 at cell 1; the origin plus its 6 neighbours within one diagonal
    CHECK(occupied_fraction(one, {}, 1, 1) == doctest::Approx(1.0 / 7));
    CHECK(coverage_fraction(one, {}, 1, 1) == 1);
    CHECK(coverage_fraction(std::vector<Vec3>{}, {}, 1, 1) == 0);
    CHECK_THROWS_AS(occupied_fraction(one, {}, 1, 0), std::invalid_argument);
}
