#include "boltz/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#    include <omp.h>
#endif

namespace boltz
{
namespace
{
// Stream index reserved for the sequential pair scheme and init draws
constexpr std::uint64_t kPairStream = ~std::uint64_t{0};
constexpr std::uint64_t kInitStep = ~std::uint64_t{0};

Vec3 random_direction(CounterStream& rng)
{
    double const z = 2 * rng.uniform() - 1;
    double const phi = two_pi * rng.uniform();
    double const r = std::sqrt(std::max(0.0, 1 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

[[noreturn]] void dump_and_throw(ParticleSystem const& system, std::size_t i, Vec3 bad)
{
    std::ostringstream os;
    os.precision(17);
    os << "non-finite velocity for particle " << i << " at t=" << system.time
       << " (step " << system.step_index << "): " << bad << "\nstate:\n";
    for (std::size_t p = 0; p < system.velocities.size(); ++p)
        os << p << ' ' << system.velocities[p] << '\n';
    throw SimulationError(os.str());
}

}  // namespace

//---------------------------------------------------------------------------//
InitialLaw InitialLaw::two_point(Vec3 a, Vec3 b, double mass_a)
{
    InitialLaw law;
    law.kind = Kind::two_point;
    law.points = {a, b};
    law.first_mass = mass_a;
    return law;
}

InitialLaw InitialLaw::gaussian(Vec3 mean, double sigma)
{
    InitialLaw law;
    law.kind = Kind::gaussian;
    law.center = mean;
    law.sigma = sigma;
    return law;
}

InitialLaw InitialLaw::uniform_ball(Vec3 center, double radius)
{
    InitialLaw law;
    law.kind = Kind::uniform_ball;
    law.center = center;
    law.radius = radius;
    return law;
}

InitialLaw InitialLaw::from_samples(std::vector<Vec3> samples)
{
    InitialLaw law;
    law.kind = Kind::samples;
    law.points = std::move(samples);
    return law;
}

InitialLaw InitialLaw::truncated_pareto(double tail, double s_min, double s_max)
{
    InitialLaw law;
    law.kind = Kind::pareto;
    law.tail = tail;
    law.s_min = s_min;
    law.s_max = s_max;
    return law;
}

void InitialLaw::validate() const
{
    constexpr char const* dirac_msg
        = "initial law is a Dirac mass; regularization requires f0 not "
          "concentrated on a single velocity";
    switch (kind)
    {
        case Kind::two_point:
            if (points.size() != 2)
                throw std::invalid_argument("two-point law needs exactly two atoms");
            if (!(first_mass >= 0 && first_mass <= 1))
                throw std::invalid_argument("two-point law: mass must lie in [0, 1]");
            if (points[0] == points[1] || first_mass == 0 || first_mass == 1)
                throw std::invalid_argument(dirac_msg);
            break;
        case Kind::gaussian:
            if (!(sigma >= 0))
                throw std::invalid_argument("gaussian law: sigma must be nonnegative");
            if (sigma == 0)
                throw std::invalid_argument(dirac_msg);
            break;
        case Kind::uniform_ball:
            if (!(radius >= 0))
                throw std::invalid_argument("uniform ball: radius must be nonnegative");
            if (radius == 0)
                throw std::invalid_argument(dirac_msg);
            break;
        case Kind::samples:
            if (points.empty())
                throw std::invalid_argument("sample law: no samples");
            if (std::all_of(points.begin(), points.end(),
                            [&](Vec3 const& p) { return p == points.front(); }))
                throw std::invalid_argument(dirac_msg);
            break;
        case Kind::pareto:
            if (!(tail > 0 && s_min > 0 && s_max > s_min))
                throw std::invalid_argument(
                    "pareto law: need tail > 0 and 0 < s_min < s_max");
            break;
    }
}

Vec3 InitialLaw::draw(CounterStream& rng) const
{
    switch (kind)
    {
        case Kind::two_point:
            return rng.uniform() < first_mass ? points[0] : points[1];
        case Kind::gaussian: {
            double const x = rng.normal();
            double const y = rng.normal();
            double const z = rng.normal();
            return center + sigma * Vec3{x, y, z};
        }
        case Kind::uniform_ball: {
            double const r = radius * std::cbrt(rng.uniform());
            return center + r * random_direction(rng);
        }
        case Kind::samples:
            return points[rng.below(points.size())];
        case Kind::pareto: {
            // Inverse CDF of s^(-1-tail) on [s_min, s_max]
            double const lo = std::pow(s_min, -tail);
            double const hi = std::pow(s_max, -tail);
            double const s = std::pow(lo - rng.uniform() * (lo - hi), -1 / tail);
            return s * random_direction(rng);
        }
    }
    return {};
}

//---------------------------------------------------------------------------//
void SimConfig::validate() const
{
    if (n_particles < 2)
        throw std::invalid_argument("n_particles must be at least 2");
    if (!(dt > 0) || !std::isfinite(dt))
        throw std::invalid_argument("dt must be positive");
    if (!(t_end >= 0))
        throw std::invalid_argument("t_end must be nonnegative");
    if (!cross_section.k)
        throw std::invalid_argument("simulation needs a finite truncation level k");
    cross_section.validate();
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
        throw std::invalid_argument("snapshot_times must be sorted");
    for (double t : snapshot_times)
        if (!(t >= 0 && t <= t_end))
            throw std::invalid_argument("snapshot times must lie in [0, t_end]");
    for (double p : moment_orders)
        if (!(p >= 0))
            throw std::invalid_argument("moment orders must be nonnegative");
}

std::vector<std::string> SimConfig::warnings() const
{
    std::vector<std::string> out;
    double const load = dt * candidate_rate(cross_section);
    if (load > 0.1)
    {
        std::ostringstream os;
        os << "dt * candidate rate = " << load << " exceeds 0.1";
        out.push_back(os.str());
    }
    if (cross_section.gamma <= 0 && cross_section.gamma + cross_section.nu <= 0)
        out.emplace_back("gamma + nu <= 0: outside the moderately soft range");
    return out;
}

double candidate_rate(CrossSection const& cs)
{
    double const k = *cs.k;
    return k * cs.angular_mass(1 / k) * two_pi;
}

Vec3 clip_speed(Vec3 const& v, double k)
{
    double const s = norm(v);
    if (s <= k)
        return v;
    return (k / s) * v;
}

SnapshotDiagnostics diagnose(EmpiricalMeasure const& m, std::span<double const> moment_orders)
{
    SnapshotDiagnostics d;
    d.momentum = m.mean();
    d.energy = moment(m, 2);
    for (double p : moment_orders)
        d.moments.emplace_back(p, moment(m, p));
    return d;
}

//---------------------------------------------------------------------------//
ParticleSystem init_system(InitialLaw const& f0, SimConfig const& config)
{
    f0.validate();
    config.validate();
    ParticleSystem system;
    system.seed = config.seed;
    system.velocities.resize(config.n_particles);
    for (std::size_t i = 0; i < config.n_particles; ++i)
    {
        CounterStream rng(config.seed, kInitStep, i);
        system.velocities[i] = f0.draw(rng);
    }
    return system;
}

namespace
{
StepStats step_nanbu(ParticleSystem& system, double dt, SimConfig const& config)
{
    CrossSection const& cs = config.cross_section;
    double const k = *cs.k;
    double const theta_min = 1 / k;
    double const mean = candidate_rate(cs) * dt;
    std::size_t const n = system.velocities.size();
    std::vector<Vec3> const old = system.velocities;
    std::vector<Vec3>& next = system.velocities;

    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
    long long const count = static_cast<long long>(n);
#ifdef _OPENMP
    int const threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#    pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : candidates, accepted)
#endif
    for (long long ii = 0; ii < count; ++ii)
    {
        auto const i = static_cast<std::size_t>(ii);
        CounterStream rng(system.seed, system.step_index, i);
        std::uint64_t const n_cand = rng.poisson(mean);
        Vec3 v = old[i];
        for (std::uint64_t c = 0; c < n_cand; ++c)
        {
            std::size_t j = rng.below(n - 1);
            if (j >= i)
                ++j;
            double const u = rng.uniform();
            Vec3 const vk = clip_speed(v, k);
            if (u * k < cs.kinetic(norm(vk - old[j])))
            {
                // Angles are independent of the acceptance test, drawn only when needed
                CollisionAngles const angles{sample_theta(cs, theta_min, rng.uniform()),
                                             two_pi * rng.uniform()};
                v += deviation(vk, old[j], angles);
                ++accepted;
            }
        }
        candidates += n_cand;
        next[i] = v;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!is_finite(next[i]))
            dump_and_throw(system, i, next[i]);
    return {candidates, accepted};
}

StepStats step_pairs(ParticleSystem& system, double dt, SimConfig const& config)
{
    CrossSection const& cs = config.cross_section;
    double const k = *cs.k;
    double const theta_min = 1 / k;
    std::size_t const n = system.velocities.size();
    auto& vel = system.velocities;

    CounterStream rng(system.seed, system.step_index, kPairStream);
    double const mean = candidate_rate(cs) * dt * static_cast<double>(n) / 2;
    std::uint64_t const n_cand = rng.poisson(mean);
    StepStats stats{n_cand, 0};
    for (std::uint64_t c = 0; c < n_cand; ++c)
    {
        std::size_t const i = rng.below(n);
        std::size_t j = rng.below(n - 1);
        if (j >= i)
            ++j;
        double const u = rng.uniform();
        if (u * k < cs.kinetic(norm(vel[i] - vel[j])))
        {
            CollisionAngles const angles{sample_theta(cs, theta_min, rng.uniform()),
                                         two_pi * rng.uniform()};
            PostCollision const post = collide(vel[i], vel[j], angles);
            if (!is_finite(post.v))
                dump_and_throw(system, i, post.v);
            if (!is_finite(post.v_star))
                dump_and_throw(system, j, post.v_star);
            vel[i] = post.v;
            vel[j] = post.v_star;
            ++stats.accepted;
        }
    }
    return stats;
}

}  // namespace

StepStats step(ParticleSystem& system, double dt, SimConfig const& config)
{
    if (!(dt >= 0))
        throw std::invalid_argument("step: dt must be nonnegative");
    if (dt == 0)
        return {};
    StepStats const stats = config.scheme == Scheme::nanbu ? step_nanbu(system, dt, config)
                                                           : step_pairs(system, dt, config);
    system.time += dt;
    ++system.step_index;
    return stats;
}

Snapshot make_snapshot(ParticleSystem const& system, SimConfig const& config)
{
    Snapshot snap;
    snap.t = system.time;
    snap.measure = EmpiricalMeasure(system.velocities);
    snap.diagnostics = diagnose(snap.measure, config.moment_orders);
    return snap;
}

std::vector<Snapshot> simulate(SimConfig const& config, InitialLaw const& f0, SimLog* log)
{
    ParticleSystem system = init_system(f0, config);
    if (log)
        log->warnings = config.warnings();
    std::vector<Snapshot> out;
    out.reserve(config.snapshot_times.size());
    for (double target : config.snapshot_times)
    {
        // Whole steps while they fit, then one clipped step onto the target
        while (system.time < target)
        {
            double const remaining = target - system.time;
            double h = config.dt;
            if (remaining <= config.dt * (1 + 1e-9))
                h = remaining;
            StepStats const stats = step(system, h, config);
            if (h == remaining)
                system.time = target;
            if (log)
            {
                ++log->steps;
                log->candidates += stats.candidates;
                log->accepted += stats.accepted;
            }
        }
        out.push_back(make_snapshot(system, config));
        out.back().t = target;
    }
    return out;
}

}  // namespace boltz
