#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boltz/quadrature.hpp"
#include "boltz/simulator.hpp"

namespace boltz
{
namespace
{
// Background measure at time s: the last snapshot strictly before s
// (left-continuous), or the first one for s at or before it.
std::size_t background_index(std::span<Snapshot const> background, double s)
{
    std::size_t idx = 0;
    for (std::size_t i = 1; i < background.size(); ++i)
    {
        if (background[i].t < s)
            idx = i;
        else
            break;
    }
    return idx;
}

Vec3 draw_partner(EmpiricalMeasure const& m, CounterStream& rng)
{
    auto const samples = m.samples();
    if (m.uniform_weights())
        return samples[rng.below(samples.size())];
    double u = rng.uniform();
    auto const w = m.weights();
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        u -= w[i];
        if (u <= 0)
            return samples[i];
    }
    return samples.back();
}

double max_speed(std::span<Snapshot const> background)
{
    double out = 0;
    for (auto const& snap : background)
        for (Vec3 const& v : snap.measure.samples())
            out = std::max(out, norm(v));
    return out;
}

double dominating_kinetic(CrossSection const& cs, double speed_bound)
{
    double const k = *cs.k;
    if (cs.gamma > 0)
        return std::min(k, std::pow(speed_bound, cs.gamma));
    if (cs.gamma == 0)
        return 1;
    return k;
}

}  // namespace

Vec3 CoupledPath::value_at(double s) const
{
    auto it = std::upper_bound(v_path.begin(), v_path.end(), s,
                               [](double x, PathPoint const& p) { return x < p.s; });
    if (it == v_path.begin())
        return v_path.front().v;
    return std::prev(it)->v;
}

CoupledPath tagged_path(std::span<Snapshot const> background,
                        Vec3 v0,
                        double t,
                        double eps_max,
                        CrossSection const& cs,
                        std::uint64_t seed,
                        std::uint64_t path_id)
{
    if (background.empty())
        throw std::invalid_argument("tagged_path: empty background");
    if (!cs.k)
        throw std::invalid_argument("tagged_path: cross section needs k for the angular cutoff");
    if (!(t >= 0) || !(eps_max >= 0) || eps_max > t)
        throw std::domain_error("tagged_path: need 0 <= eps_max <= t");
    if (background.front().t > 0)
        throw std::invalid_argument("tagged_path: background must start at time 0");
    cs.validate();

    double const theta_min = 1 / *cs.k;
    double const angular = cs.angular_mass(theta_min) * two_pi;
    double const bg_speed = max_speed(background);

    CoupledPath path;
    path.cs = cs;
    path.t = t;
    path.eps_max = eps_max;
    path.v_path.push_back({0, v0});

    CounterStream rng(seed, 0x7a99edull, path_id);
    Vec3 v = v0;
    double running_max = norm(v0);
    double kbound = dominating_kinetic(cs, running_max + bg_speed);
    double s = 0;
    double const window = t - eps_max;
    while (true)
    {
        double const rate = kbound * angular;
        if (rate <= 0)
            break;
        s += rng.exponential() / rate;
        if (s > t)
            break;
        Mark mark;
        mark.s = s;
        mark.v = draw_partner(background[background_index(background, s)].measure, rng);
        mark.theta = sample_theta(cs, theta_min, rng.uniform());
        mark.phi = two_pi * rng.uniform();
        mark.u = kbound * rng.uniform();
        mark.v_before = v;
        double const kin = cs.kinetic(norm(v - mark.v));
        if (kin > kbound)
            throw std::logic_error("tagged_path: thinning bound exceeded");
        ++path.proposals;
        if (mark.u <= kin)
        {
            mark.accepted = true;
            v += deviation(v, mark.v, {mark.theta, mark.phi});
            if (!is_finite(v))
                throw SimulationError("tagged_path: non-finite velocity");
            path.v_path.push_back({s, v});
            ++path.jumps;
            if (norm(v) > running_max)
            {
                running_max = norm(v);
                kbound = std::max(kbound, dominating_kinetic(cs, running_max + bg_speed));
            }
        }
        if (s > window)
            path.events.push_back(mark);
    }
    path.v_t = v;
    path.v_t_eps = replay(path, eps_max, FreezeMode::frozen);
    return path;
}

Vec3 replay(CoupledPath const& path, double eps, FreezeMode mode)
{
    if (!(eps >= 0) || eps > path.t)
        throw std::domain_error("coupled_freeze: eps must lie in [0, t]");
    if (eps > path.eps_max)
        throw std::domain_error("coupled_freeze: eps exceeds the recorded window");
    double const start = path.t - eps;
    Vec3 const base = path.value_at(start);
    Vec3 v = base;
    for (Mark const& mark : path.events)
    {
        if (mark.s <= start)
            continue;
        Vec3 const anchor = mode == FreezeMode::frozen ? base : v;
        if (!(mark.u <= path.cs.kinetic(norm(anchor - mark.v))))
            continue;
        double const phi0 = tanaka_phi0(mark.v_before - mark.v, anchor - mark.v);
        double phi = mark.phi + phi0;
        if (phi >= two_pi)
            phi -= two_pi;
        v += deviation(anchor, mark.v, {mark.theta, phi});
    }
    return v;
}

std::pair<Vec3, Vec3> coupled_freeze(CoupledPath const& path, double eps)
{
    return {path.v_t, replay(path, eps, FreezeMode::frozen)};
}

RateStudy coupling_rates(std::span<Snapshot const> background,
                         double t,
                         std::span<double const> eps_list,
                         std::size_t n_paths,
                         CrossSection const& cs,
                         std::uint64_t seed)
{
    if (eps_list.empty() || n_paths < 2)
        throw std::invalid_argument("coupling_rates: need eps values and at least two paths");
    double const eps_max = *std::max_element(eps_list.begin(), eps_list.end());
    std::vector<double> sum(eps_list.size(), 0);
    std::vector<double> sum_sq(eps_list.size(), 0);
    for (std::size_t p = 0; p < n_paths; ++p)
    {
        CounterStream init(seed, 0x1417ull, p);
        Vec3 const v0 = draw_partner(background.front().measure, init);
        CoupledPath const path = tagged_path(background, v0, t, eps_max, cs, seed, p);
        for (std::size_t e = 0; e < eps_list.size(); ++e)
        {
            auto const [vt, vte] = coupled_freeze(path, eps_list[e]);
            double const x = std::pow(norm(vt - vte), cs.nu);
            sum[e] += x;
            sum_sq[e] += x * x;
        }
    }
    RateStudy study;
    auto const n = static_cast<double>(n_paths);
    std::vector<double> log_eps;
    std::vector<double> log_mean;
    for (std::size_t e = 0; e < eps_list.size(); ++e)
    {
        double const mean = sum[e] / n;
        double const var = std::max(0.0, (sum_sq[e] - n * mean * mean) / (n - 1));
        study.points.push_back({eps_list[e], mean, std::sqrt(var / n)});
        if (mean > 0)
        {
            log_eps.push_back(std::log(eps_list[e]));
            log_mean.push_back(std::log(mean));
        }
    }
    study.slope = log_eps.size() >= 2 ? fit_slope(log_eps, log_mean) : 0.0;
    return study;
}

}  // namespace boltz
