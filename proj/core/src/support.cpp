#include "boltz/support.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <unordered_set>

#include "boltz/collision.hpp"
#include "boltz/kdtree.hpp"
#include "boltz/rng.hpp"

namespace boltz
{
namespace
{
Vec3 unit_sphere(CounterStream& rng)
{
    double const z = 2 * rng.uniform() - 1;
    double const phi = two_pi * rng.uniform();
    double const r = std::sqrt(std::max(0.0, 1 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

std::vector<Vec3> fibonacci_directions(int n)
{
    std::vector<Vec3> out;
    double const golden = pi * (3 - std::sqrt(5.0));
    for (int d = 0; d < n; ++d)
    {
        double const z = 1 - (2 * d + 1.0) / n;
        double const rho = std::sqrt(std::max(0.0, 1 - z * z));
        out.push_back({rho * std::cos(golden * d), rho * std::sin(golden * d), z});
    }
    return out;
}

Vec3 any_orthogonal_unit(Vec3 const& s)
{
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(s[a]) < std::abs(s[axis]))
            axis = a;
    Vec3 e{};
    e[axis] = 1;
    Vec3 const t = e - dot(e, s) * s;
    return (1 / norm(t)) * t;
}

// Cells of side \c cell centered on a lattice through \c center
template<class F>
void for_each_cell_in_ball(Vec3 const& center, double radius, double cell, F&& f)
{
    int const reach = static_cast<int>(std::floor(radius / cell));
    for (int i = -reach; i <= reach; ++i)
        for (int j = -reach; j <= reach; ++j)
            for (int k = -reach; k <= reach; ++k)
            {
                Vec3 const offset{i * cell, j * cell, k * cell};
                if (norm(offset) <= radius)
                    f(i, j, k, center + offset);
            }
}

}  // namespace

bool in_K(Vec3 const& v, Kset const& k)
{
    Vec3 const d = v - k.w;
    return norm(v) <= 3 && norm(d) >= 1 && std::abs(dot(d, k.zeta)) >= norm(k.zeta);
}

Vec3 inner_ball_center(Kset const& k)
{
    double const len = norm(k.zeta);
    if (len == 0)
        throw std::invalid_argument("inner_ball_center: zeta must be nonzero");
    return (-2 * sg(dot(k.w, k.zeta)) / len) * k.zeta;
}

std::vector<Kset> default_probes(int n_dirs)
{
    std::vector<Kset> out;
    auto const dirs = fibonacci_directions(n_dirs);
    std::vector<Vec3> ws{Vec3{}};
    for (double radius : {1.5, 3.0})
        for (Vec3 const& d : dirs)
            ws.push_back(radius * d);
    for (Vec3 const& w : ws)
        for (Vec3 const& d : dirs)
            for (double len : {0.5, 1.0, 2.0})
                out.push_back({w, len * d});
    return out;
}

double mass_in_K(EmpiricalMeasure const& m, Kset const& k)
{
    auto const s = m.samples();
    auto const w = m.weights();
    double mass = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (in_K(s[i], k))
            mass += w[i];
    return mass;
}

QEstimate estimate_q(std::span<Snapshot const> snapshots,
                     std::span<Kset const> probes,
                     std::uint64_t seed)
{
    if (probes.empty())
        throw std::invalid_argument("estimate_q: no probes");
    if (snapshots.empty())
        throw std::invalid_argument("estimate_q: no snapshots");
    QEstimate out;
    out.q = INFINITY;
    out.inner_ball_mass = INFINITY;
    CounterStream rng(seed, 0x9e0, 0);
    constexpr int kBallChecks = 64;
    for (std::size_t p = 0; p < probes.size(); ++p)
    {
        Kset const& k = probes[p];
        bool const has_ball = norm_sq(k.zeta) > 0;
        Vec3 center;
        if (has_ball)
        {
            center = inner_ball_center(k);
            for (int c = 0; c < kBallChecks; ++c)
            {
                // Strictly inside the open unit ball
                Vec3 const v = center + 0.999999 * std::cbrt(rng.uniform()) * unit_sphere(rng);
                if (!in_K(v, k))
                    out.inclusion_ok = false;
            }
        }
        for (std::size_t s = 0; s < snapshots.size(); ++s)
        {
            EmpiricalMeasure const& m = snapshots[s].measure;
            double const mass = mass_in_K(m, k);
            if (mass < out.q)
            {
                out.q = mass;
                out.argmin_probe = p;
                out.argmin_snapshot = s;
            }
            if (has_ball)
            {
                double ball = 0;
                auto const samples = m.samples();
                auto const w = m.weights();
                for (std::size_t i = 0; i < samples.size(); ++i)
                    if (norm_sq(samples[i] - center) < 1)
                        ball += w[i];
                out.inner_ball_mass = std::min(out.inner_ball_mass, ball);
            }
        }
    }
    if (!std::isfinite(out.inner_ball_mass))
        out.inner_ball_mass = 0;
    return out;
}

//---------------------------------------------------------------------------//
SpherePair sqrt2_pair(Vec3 const& x, double r, Vec3 const& v)
{
    Vec3 const d = v - x;
    double const len = norm(d);
    double const alpha = std::min(len / r, std::sqrt(2.0));
    Vec3 const sigma = len > 0 ? (1 / len) * d : Vec3{1, 0, 0};
    Vec3 const tau = any_orthogonal_unit(sigma);
    double const s = std::sqrt(std::max(0.0, 2 - alpha * alpha));
    Vec3 const along = ((alpha + s) / 2) * sigma;
    Vec3 const across = ((alpha - s) / 2) * tau;
    return {x + r * (along + across), x + r * (along - across)};
}

SpreadResult sphere_spread(std::span<Vec3 const> points,
                           int iterations,
                           int samples_per_pair,
                           int pairs_per_iteration,
                           std::uint64_t seed)
{
    if (iterations < 0 || samples_per_pair < 1 || pairs_per_iteration < 1)
        throw std::invalid_argument("sphere_spread: bad iteration parameters");
    if (points.size() < 2
        || std::all_of(points.begin(), points.end(), [&](Vec3 const& p) { return p == points.front(); }))
        throw DiracCloudError("sphere_spread: need two distinct points (cloud is a Dirac mass)");

    SpreadResult out;
    out.cloud.assign(points.begin(), points.end());

    // Farthest pair: exact for small clouds, two sweeps otherwise
    std::size_t a = 0;
    std::size_t b = 1;
    double best = -1;
    if (points.size() <= 2048)
    {
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                if (double const d = norm_sq(points[i] - points[j]); d > best)
                {
                    best = d;
                    a = i;
                    b = j;
                }
    }
    else
    {
        auto farthest = [&](std::size_t from) {
            std::size_t arg = from;
            double far = -1;
            for (std::size_t i = 0; i < points.size(); ++i)
                if (double const d = norm_sq(points[i] - points[from]); d > far)
                {
                    far = d;
                    arg = i;
                }
            return arg;
        };
        a = farthest(0);
        b = farthest(a);
    }
    out.x0 = 0.5 * (points[a] + points[b]);
    out.r0 = norm(points[a] - points[b]) / 2;
    out.guaranteed_radius = std::pow(2.0, iterations / 2.0) * out.r0;

    CounterStream rng(seed, 0x5b4e, 0);
    for (int it = 1; it <= iterations; ++it)
    {
        if (it == 1)
        {
            auto const n_seed = static_cast<std::size_t>(samples_per_pair) * pairs_per_iteration;
            for (std::size_t s = 0; s < n_seed; ++s)
                out.cloud.push_back(out.x0 + out.r0 * unit_sphere(rng));
        }
        std::size_t const n = out.cloud.size();
        Vec3 centroid;
        for (Vec3 const& p : out.cloud)
            centroid += p;
        centroid *= 1.0 / static_cast<double>(n);
        double spread = 0;
        for (Vec3 const& p : out.cloud)
            spread = std::max(spread, norm(p - centroid));
        double const diameter = 2 * spread;

        // Radius reached before this round
        double const reached = std::pow(2.0, (it - 1) / 2.0) * out.r0;
        KdTree const tree(out.cloud);

        std::vector<Vec3> added;
        added.reserve(static_cast<std::size_t>(samples_per_pair) * pairs_per_iteration);
        for (int pair = 0; pair < pairs_per_iteration; ++pair)
        {
            Vec3 v1;
            Vec3 v2;
            if (pair % 2 == 0)
            {
                // Rejection: accept a uniform pair with probability |v1 - v2|/diameter
                while (true)
                {
                    v1 = out.cloud[rng.below(n)];
                    v2 = out.cloud[rng.below(n)];
                    if (rng.uniform() * diameter < norm(v1 - v2))
                        break;
                }
            }
            else
            {
                // Targeted: the sqrt(2) pair of a uniform point of the next ball, snapped to the cloud
                double const rad = std::sqrt(2.0) * reached * std::cbrt(rng.uniform());
                Vec3 const target = out.x0 + rad * unit_sphere(rng);
                SpherePair const ideal = sqrt2_pair(out.x0, reached, target);
                v1 = out.cloud[tree.nearest(ideal.v1, 1).front().index];
                v2 = out.cloud[tree.nearest(ideal.v2, 1).front().index];
            }
            Vec3 const mid = 0.5 * (v1 + v2);
            double const radius = norm(v1 - v2) / 2;
            for (int s = 0; s < samples_per_pair; ++s)
                added.push_back(mid + radius * unit_sphere(rng));
        }
        out.cloud.insert(out.cloud.end(), added.begin(), added.end());
    }
    return out;
}

double coverage_fraction(std::span<Vec3 const> cloud, Vec3 const& center, double radius, double cell)
{
    if (!(cell > 0) || !(radius > 0))
        throw std::invalid_argument("coverage_fraction: need positive radius and cell");
    if (cloud.empty())
        return 0;
    KdTree const tree(cloud);
    double const reach_sq = 3 * cell * cell;
    std::size_t total = 0;
    std::size_t hit = 0;
    for_each_cell_in_ball(center, radius, cell, [&](int, int, int, Vec3 const& c) {
        ++total;
        if (tree.nearest_dist_sq(c) <= reach_sq)
            ++hit;
    });
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

double occupied_fraction(std::span<Vec3 const> samples, Vec3 const& center, double radius, double cell)
{
    if (!(cell > 0) || !(radius > 0))
        throw std::invalid_argument("occupied_fraction: need positive radius and cell");
    struct Hash
    {
        std::size_t operator()(std::array<long long, 3> const& a) const
        {
            return static_cast<std::size_t>((a[0] * 73856093LL) ^ (a[1] * 19349663LL)
                                            ^ (a[2] * 83492791LL));
        }
    };
    std::unordered_set<std::array<long long, 3>, Hash> occupied;
    for (Vec3 const& v : samples)
    {
        Vec3 const d = v - center;
        occupied.insert({std::llround(d.x / cell), std::llround(d.y / cell), std::llround(d.z / cell)});
    }
    std::size_t total = 0;
    std::size_t hit = 0;
    for_each_cell_in_ball(center, radius, cell, [&](int i, int j, int k, Vec3 const&) {
        ++total;
        if (occupied.count({i, j, k}))
            ++hit;
    });
    return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
}

}  // namespace boltz
