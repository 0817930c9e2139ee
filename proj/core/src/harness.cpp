#include "boltz/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "boltz/io.hpp"
#include "boltz/measure.hpp"
#include "boltz/support.hpp"

#ifndef BOLTZ_VERSION
#    define BOLTZ_VERSION "unknown"
#endif

namespace boltz
{
namespace
{
using json = nlohmann::ordered_json;

std::vector<std::pair<std::string, std::string>> const& schema()
{
    static std::vector<std::pair<std::string, std::string>> const keys{
        {"subcommand", "simulate | rates | psi | besov | support | entropy | exponents"},
        {"output_dir", "directory for snapshots/, sweeps/ and manifest.json"},
        {"seed", "64-bit master seed"},
        {"threads", "OpenMP threads for the particle update (0: runtime default)"},
        {"deterministic", "true forces one thread"},
        {"write_snapshots", "persist snapshot CSV and JSON sidecars"},
        {"sim.n_particles", "number of particles N"},
        {"sim.t_end", "final time"},
        {"sim.dt", "time step"},
        {"sim.scheme", "nanbu | symmetric_pair"},
        {"sim.snapshot_times", "comma-separated sorted times in [0, t_end]"},
        {"sim.moments", "comma-separated moment orders recorded per snapshot"},
        {"cs.gamma", "kinetic exponent in (-1, 1)"},
        {"cs.nu", "angular singularity in (0, 1)"},
        {"cs.c0", "lower angular constant"},
        {"cs.C0", "upper angular constant"},
        {"cs.c_b", "angular constant used, in [c0, C0]"},
        {"cs.k", "truncation level k >= 1"},
        {"f0.kind", "two_point | gaussian | uniform_ball | samples | pareto | dirac"},
        {"f0.a", "first atom of two_point"},
        {"f0.b", "second atom of two_point"},
        {"f0.mass_a", "mass of the first atom"},
        {"f0.mean", "gaussian mean"},
        {"f0.sigma", "gaussian standard deviation per axis"},
        {"f0.center", "uniform_ball center"},
        {"f0.radius", "uniform_ball radius"},
        {"f0.path", "sample CSV for kind = samples"},
        {"f0.point", "atom for kind = dirac (always rejected)"},
        {"f0.tail", "pareto tail index"},
        {"f0.s_min", "pareto minimal speed"},
        {"f0.s_max", "pareto maximal speed"},
        {"rates.t", "final time t of the coupled paths"},
        {"rates.eps", "comma-separated freezing windows"},
        {"rates.paths", "coupled paths per window"},
        {"rates.k", "angular cutoff level for tagged paths"},
        {"rates.snapshot_dt", "background snapshot spacing"},
        {"rates.min_slope", "assert the fitted slope is at least this"},
        {"psi.eps", "window eps in (0, 1)"},
        {"psi.t", "time t"},
        {"psi.v0", "base velocity v0"},
        {"psi.xi_min", "smallest |xi| of the coercivity grid"},
        {"psi.xi_max", "largest |xi| of the coercivity grid"},
        {"psi.n_radii", "radii in the coercivity grid"},
        {"psi.n_dirs", "directions per radius"},
        {"psi.max_velocity_samples", "background velocities used per snapshot (0: all)"},
        {"psi.phi_rule", "uniform | bessel"},
        {"besov.input", "sample CSV; empty means simulate and use the last snapshot"},
        {"besov.r", "comma-separated mollifier radii in (0, 1)"},
        {"besov.h", "comma-separated shifts in (0, 1)"},
        {"besov.alpha", "alpha in (0, 1) for s_est = a - alpha"},
        {"support.iterations", "sphere-spreading iterations"},
        {"support.samples_per_pair", "points per sphere"},
        {"support.pairs", "pairs per iteration"},
        {"support.radius", "radius of the coverage ball around 0"},
        {"support.cell", "coverage grid cell size"},
        {"support.min_coverage", "required coverage at the last snapshot"},
        {"support.q_t0", "start of the q window"},
        {"support.q_t1", "end of the q window"},
        {"entropy.input", "sample CSV; empty means simulate"},
        {"entropy.k_nn", "neighbour order"},
        {"exponents.nu_min", "smallest nu of the grid"},
        {"exponents.nu_max", "largest nu of the grid"},
        {"exponents.n", "number of grid points"},
        {"exponents.gammas", "comma-separated soft gammas to tabulate"},
    };
    return keys;
}

Subcommand parse_subcommand(KeyValueConfig const& file)
{
    if (!file.has("subcommand"))
        throw ConfigError(file.source() + ": missing required key 'subcommand'", 0);
    std::string const s = file.get_string("subcommand", "");
    for (Subcommand c : {Subcommand::simulate, Subcommand::rates, Subcommand::psi, Subcommand::besov,
                         Subcommand::support, Subcommand::entropy, Subcommand::exponents})
        if (s == to_string(c))
            return c;
    file.fail("subcommand", "unknown subcommand '" + s + "'");
}

InitialLaw parse_f0(KeyValueConfig const& file)
{
    std::string const kind = file.get_string("f0.kind", "gaussian");
    InitialLaw law;
    if (kind == "two_point")
        law = InitialLaw::two_point(file.get_vec3("f0.a", {1, 0, 0}), file.get_vec3("f0.b", {-1, 0, 0}),
                                    file.get_double("f0.mass_a", 0.5));
    else if (kind == "gaussian")
        law = InitialLaw::gaussian(file.get_vec3("f0.mean", {}), file.get_double("f0.sigma", 1));
    else if (kind == "uniform_ball")
        law = InitialLaw::uniform_ball(file.get_vec3("f0.center", {}), file.get_double("f0.radius", 1));
    else if (kind == "samples")
    {
        if (!file.has("f0.path"))
            file.fail("f0.kind", "kind 'samples' needs f0.path");
        try
        {
            EmpiricalMeasure const m = load_samples(file.get_string("f0.path", ""));
            law = InitialLaw::from_samples({m.samples().begin(), m.samples().end()});
        }
        catch (LoadError const& e)
        {
            file.fail("f0.path", e.what());
        }
    }
    else if (kind == "pareto")
        law = InitialLaw::truncated_pareto(file.get_double("f0.tail", 2.5), file.get_double("f0.s_min", 0.5),
                                           file.get_double("f0.s_max", 1e3));
    else if (kind == "dirac")
        law = InitialLaw::from_samples({file.get_vec3("f0.point", {})});
    else
        file.fail("f0.kind", "unknown initial law '" + kind + "'");
    try
    {
        law.validate();
    }
    catch (std::invalid_argument const& e)
    {
        file.fail("f0.kind", e.what());
    }
    return law;
}

std::vector<double> uniform_times(double t_end, double dt)
{
    std::vector<double> out;
    auto const n = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(std::min(t_end, static_cast<double>(i) * dt));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

json vec_json(Vec3 const& v) { return json::array({v.x, v.y, v.z}); }

void add(std::vector<Assertion>& out, std::string name, bool passed, std::string detail)
{
    out.push_back({std::move(name), passed, std::move(detail)});
}

std::string fmt(double x) { return format_double(x); }

struct RunContext
{
    ExperimentConfig const& cfg;
    std::vector<Assertion>& assertions;
    json& summary;
};

std::vector<Snapshot> run_simulation(RunContext& ctx, SimConfig const& sim)
{
    SimLog log;
    std::vector<Snapshot> snaps = simulate(sim, ctx.cfg.f0, &log);
    json& s = ctx.summary["simulation"];
    s["n_particles"] = sim.n_particles;
    s["steps"] = log.steps;
    s["candidates"] = log.candidates;
    s["accepted"] = log.accepted;
    s["warnings"] = log.warnings;
    json& rows = s["snapshots"];
    rows = json::array();
    for (Snapshot const& snap : snaps)
    {
        json row;
        row["t"] = snap.t;
        row["momentum"] = vec_json(snap.diagnostics.momentum);
        row["energy"] = snap.diagnostics.energy;
        for (auto const& [p, m] : snap.diagnostics.moments)
            row["m_" + fmt(p)] = m;
        rows.push_back(row);
    }
    bool finite = true;
    for (Snapshot const& snap : snaps)
        finite = finite && std::isfinite(snap.diagnostics.energy) && is_finite(snap.diagnostics.momentum);
    add(ctx.assertions, "finite_diagnostics", finite, "energy and momentum finite in every snapshot");
    if (sim.scheme == Scheme::symmetric_pair && snaps.size() >= 2)
    {
        double const e0 = snaps.front().diagnostics.energy;
        double worst_e = 0;
        double worst_p = 0;
        for (Snapshot const& snap : snaps)
        {
            worst_e = std::max(worst_e, std::abs(snap.diagnostics.energy - e0) / e0);
            worst_p = std::max(worst_p, norm(snap.diagnostics.momentum - snaps.front().diagnostics.momentum));
        }
        add(ctx.assertions, "energy_conserved", worst_e <= 1e-9, "max relative drift " + fmt(worst_e));
        add(ctx.assertions, "momentum_conserved", worst_p <= 1e-9 * std::sqrt(e0),
            "max drift " + fmt(worst_p));
    }
    if (ctx.cfg.write_snapshots)
    {
        for (std::size_t i = 0; i < snaps.size(); ++i)
        {
            std::ostringstream name;
            name << "snap_" << std::setw(4) << std::setfill('0') << i;
            auto const dir = ctx.cfg.output_dir / "snapshots";
            write_snapshot_csv(dir / (name.str() + ".csv"), snaps[i]);
            write_snapshot_sidecar(dir / (name.str() + ".json"), snaps[i], ctx.cfg.seed, ctx.cfg.config_hash);
        }
    }
    return snaps;
}

void run_rates(RunContext& ctx)
{
    RatesParams const& p = ctx.cfg.rates;
    SimConfig sim = ctx.cfg.sim;
    sim.t_end = std::max(sim.t_end, p.t);
    sim.snapshot_times = uniform_times(p.t, p.snapshot_dt);
    std::vector<Snapshot> const bg = run_simulation(ctx, sim);
    CrossSection cs = sim.cross_section;
    cs.k = p.k;
    RateStudy const study = coupling_rates(bg, p.t, p.eps, p.paths, cs, ctx.cfg.seed);
    std::vector<std::vector<double>> rows;
    json pts = json::array();
    for (RatePoint const& pt : study.points)
    {
        double const half = 1.96 * pt.std_error;
        rows.push_back({pt.eps, pt.mean, pt.std_error, pt.mean - half, pt.mean + half});
        pts.push_back({{"eps", pt.eps}, {"mean", pt.mean}, {"std_error", pt.std_error}});
    }
    write_table(ctx.cfg.output_dir / "sweeps" / "rates.csv",
                {"eps", "mean_abs_diff_pow_nu", "std_error", "ci_lo", "ci_hi"}, rows);
    ctx.summary["rates"] = {{"points", pts}, {"slope", study.slope}, {"paths", p.paths}};
    if (p.min_slope)
        add(ctx.assertions, "rate_slope", study.slope >= *p.min_slope,
            "slope " + fmt(study.slope) + " vs required " + fmt(*p.min_slope));
}

void run_psi(RunContext& ctx)
{
    PsiParams const& p = ctx.cfg.psi;
    SimConfig sim = ctx.cfg.sim;
    sim.t_end = std::max(sim.t_end, p.t);
    if (sim.snapshot_times.size() < 2)
        sim.snapshot_times = uniform_times(p.t, 0.1);
    std::vector<Snapshot> const bg = run_simulation(ctx, sim);

    LevyCtx lc;
    lc.eps = p.eps;
    lc.t = p.t;
    lc.v0 = p.v0;
    lc.background = bg;
    lc.cs = sim.cross_section;
    lc.max_velocity_samples = p.max_velocity_samples;
    lc.phi_rule = p.phi_rule;
    auto const grid = radial_direction_grid(p.xi_min, p.xi_max, p.n_radii, p.n_dirs);
    double const scale = std::pow(p.eps, -1 / lc.cs.nu);

    std::vector<std::vector<double>> rows;
    bool nonneg = true;
    for (Vec3 const& xi : grid)
    {
        SymbolValue const v = psi(lc, scale * xi);
        nonneg = nonneg && v.psi_re >= 0;
        rows.push_back({xi.x, xi.y, xi.z, v.psi_re, v.psi_im});
    }
    write_table(ctx.cfg.output_dir / "sweeps" / "psi.csv", {"xi_x", "xi_y", "xi_z", "psi_re", "psi_im"},
                rows);
    CoercivityResult const c = verify_coercivity(lc, grid);
    SymbolValue const zero = psi(lc, {});
    LambdaMoment const m1 = lambda_moments(lc, 1);
    LambdaMoment const m4 = lambda_moments(lc, 4);
    ctx.summary["psi"] = {{"c_hat", c.c_hat},
                          {"argmin", vec_json(c.argmin)},
                          {"evaluated", c.evaluated},
                          {"max_rel_error", c.max_rel_error},
                          {"m1", m1.value},
                          {"m1_bound", m1.bound},
                          {"m4", m4.value},
                          {"m4_bound", m4.bound}};
    add(ctx.assertions, "coercivity_positive", c.c_hat > 0, "c_hat " + fmt(c.c_hat));
    add(ctx.assertions, "psi_real_nonnegative", nonneg, "Re psi >= 0 on the sweep");
    add(ctx.assertions, "psi_zero", zero.psi_re == 0 && zero.psi_im == 0, "psi(0) = 0");
    add(ctx.assertions, "lambda_m1_bound", m1.value <= m1.bound, fmt(m1.value) + " <= " + fmt(m1.bound));
    add(ctx.assertions, "lambda_m4_bound", m4.value <= m4.bound, fmt(m4.value) + " <= " + fmt(m4.bound));
}

EmpiricalMeasure input_or_simulated(RunContext& ctx, std::string const& input)
{
    if (!input.empty())
        return load_samples(input);
    std::vector<Snapshot> const snaps = run_simulation(ctx, ctx.cfg.sim);
    return snaps.back().measure;
}

void run_besov(RunContext& ctx)
{
    BesovParams const& p = ctx.cfg.besov;
    EmpiricalMeasure const m = input_or_simulated(ctx, p.input);
    BesovEstimate const est = besov_estimate(m, p.r, p.h, p.alpha);
    std::vector<std::vector<double>> rows;
    for (ShiftDifference const& d : est.table)
        rows.push_back({d.h, d.r, d.value});
    write_table(ctx.cfg.output_dir / "sweeps" / "besov.csv", {"h", "r", "D"}, rows);
    json b{{"kappa", est.kappa},
           {"a_exp", est.a_exp},
           {"alpha", est.alpha},
           {"r_exponent", est.r_exponent},
           {"fit_residual", est.fit_residual},
           {"monotone", est.monotone},
           {"singular", est.singular}};
    b["s_est"] = est.s_est ? json(*est.s_est) : json(nullptr);
    ctx.summary["besov"] = b;
    add(ctx.assertions, "besov_fit_finite", std::isfinite(est.a_exp) && std::isfinite(est.kappa),
        "a = " + fmt(est.a_exp));
}

void run_support(RunContext& ctx)
{
    SupportParams const& p = ctx.cfg.support;
    std::vector<Snapshot> const snaps = run_simulation(ctx, ctx.cfg.sim);

    std::vector<std::vector<double>> rows;
    json cov = json::array();
    double prev = -1;
    bool monotone = true;
    for (Snapshot const& snap : snaps)
    {
        double const f = occupied_fraction(snap.measure.samples(), {}, p.radius, p.cell);
        rows.push_back({snap.t, f});
        cov.push_back({{"t", snap.t}, {"occupied", f}});
        if (f < prev)
            monotone = false;
        prev = f;
    }
    write_table(ctx.cfg.output_dir / "sweeps" / "support.csv", {"t", "occupied_fraction"}, rows);

    std::vector<Snapshot> window;
    for (Snapshot const& snap : snaps)
        if (snap.t >= p.q_t0 && snap.t <= p.q_t1)
            window.push_back(snap);
    auto const probes = default_probes();
    json& s = ctx.summary["support"];
    s["coverage"] = cov;
    if (!window.empty())
    {
        QEstimate const q = estimate_q(window, probes, ctx.cfg.seed);
        s["q"] = q.q;
        s["inner_ball_mass"] = q.inner_ball_mass;
        add(ctx.assertions, "q_positive", q.q > 0, "q = " + fmt(q.q));
        add(ctx.assertions, "inner_ball_inclusion", q.inclusion_ok, "B(x_{w,zeta}, 1) inside K(w, zeta)");
    }

    // Sphere spreading from the distinct initial velocities
    std::vector<Vec3> distinct;
    for (Vec3 const& v : snaps.front().measure.samples())
    {
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
            distinct.push_back(v);
        if (distinct.size() >= 256)
            break;
    }
    if (distinct.size() >= 2)
    {
        SpreadResult const spread
            = sphere_spread(distinct, p.iterations, p.samples_per_pair, p.pairs, ctx.cfg.seed);
        double const expected = std::pow(2.0, p.iterations / 2.0) * spread.r0;
        s["spread"] = {{"x0", vec_json(spread.x0)},
                       {"r0", spread.r0},
                       {"guaranteed_radius", spread.guaranteed_radius},
                       {"cloud_size", spread.cloud.size()}};
        add(ctx.assertions, "spread_radius_formula", spread.guaranteed_radius == expected,
            "2^(n/2) r0 = " + fmt(expected));
    }
    add(ctx.assertions, "coverage_nondecreasing", monotone, "occupied fraction of B(0, radius)");
    add(ctx.assertions, "coverage_final", prev >= p.min_coverage,
        "final " + fmt(prev) + " vs required " + fmt(p.min_coverage));
}

void run_entropy(RunContext& ctx)
{
    EntropyParams const& p = ctx.cfg.entropy;
    std::vector<std::vector<double>> rows;
    json out = json::array();
    bool finite = true;
    auto const record = [&](double t, EmpiricalMeasure const& m) {
        EntropyEstimate const e = entropy_knn(m, p.k_nn, ctx.cfg.seed);
        rows.push_back({t, e.entropy, static_cast<double>(e.jittered)});
        out.push_back({{"t", t}, {"entropy", e.entropy}, {"jittered", e.jittered}});
        finite = finite && std::isfinite(e.entropy);
    };
    if (!p.input.empty())
        record(0, load_samples(p.input));
    else
        for (Snapshot const& snap : run_simulation(ctx, ctx.cfg.sim))
            if (snap.t > 0)
                record(snap.t, snap.measure);
    write_table(ctx.cfg.output_dir / "sweeps" / "entropy.csv", {"t", "entropy", "jittered"}, rows);
    ctx.summary["entropy"] = out;
    add(ctx.assertions, "entropy_finite", finite, "every estimate finite");
}

void run_exponents(RunContext& ctx)
{
    ExponentParams const& p = ctx.cfg.exponents;
    std::vector<std::string> header{"nu", "s_hard", "s_soft_gamma0"};
    for (double g : p.gammas)
        header.push_back("s_soft_gamma" + fmt(g));
    std::vector<std::vector<double>> rows;
    double worst_consistency = 0;
    double worst_closed = 0;
    for (int i = 0; i < p.n; ++i)
    {
        double const nu = p.n == 1 ? p.nu_min : p.nu_min + (p.nu_max - p.nu_min) * i / (p.n - 1);
        double const hard = smoothness_exponent_hard(nu);
        SoftExponent const soft0 = smoothness_exponent_soft_detail(0, nu);
        worst_consistency = std::max(worst_consistency, std::abs(soft0.value - hard));
        worst_closed = std::max(worst_closed, std::abs(soft0.value - soft0.closed_form));
        std::vector<double> row{nu, hard, soft0.value};
        for (double g : p.gammas)
        {
            if (g + nu > 0)
            {
                SoftExponent const s = smoothness_exponent_soft_detail(g, nu);
                worst_closed = std::max(worst_closed, std::abs(s.value - s.closed_form));
                row.push_back(s.value);
            }
            else
            {
                row.push_back(std::nan(""));
            }
        }
        rows.push_back(row);
    }
    write_table(ctx.cfg.output_dir / "sweeps" / "exponents.csv", header, rows);
    ctx.summary["exponents"] = {{"points", p.n},
                                {"max_soft_hard_gap", worst_consistency},
                                {"max_closed_form_gap", worst_closed}};
    add(ctx.assertions, "soft_reduces_to_hard", worst_consistency <= 1e-10, fmt(worst_consistency));
    add(ctx.assertions, "sup_matches_closed_form", worst_closed <= 1e-10, fmt(worst_closed));
}

}  // namespace

char const* to_string(Subcommand s)
{
    switch (s)
    {
        case Subcommand::simulate:
            return "simulate";
        case Subcommand::rates:
            return "rates";
        case Subcommand::psi:
            return "psi";
        case Subcommand::besov:
            return "besov";
        case Subcommand::support:
            return "support";
        case Subcommand::entropy:
            return "entropy";
        case Subcommand::exponents:
            return "exponents";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> config_schema() { return schema(); }

ExperimentConfig parse_experiment(KeyValueConfig const& file, RunOverrides const& overrides)
{
    std::set<std::string> allowed;
    for (auto const& [key, doc] : schema())
        allowed.insert(key);
    file.reject_unknown(allowed);

    ExperimentConfig cfg;
    cfg.subcommand = parse_subcommand(file);
    cfg.output_dir = overrides.output_dir ? *overrides.output_dir
                                          : std::filesystem::path(file.get_string("output_dir", "out"));
    cfg.seed = overrides.seed ? *overrides.seed : file.get_u64("seed", 1);
    cfg.deterministic = overrides.deterministic || file.get_bool("deterministic", false);
    cfg.write_snapshots = file.get_bool("write_snapshots", cfg.subcommand == Subcommand::simulate);

    SimConfig& sim = cfg.sim;
    auto const n = file.get_int("sim.n_particles", 1000);
    if (n < 2)
        file.fail("sim.n_particles", "need at least 2 particles");
    sim.n_particles = static_cast<std::size_t>(n);
    sim.t_end = file.get_double("sim.t_end", 1);
    sim.dt = file.get_double("sim.dt", 1e-3);
    std::string const scheme = file.get_string("sim.scheme", "nanbu");
    if (scheme == "nanbu")
        sim.scheme = Scheme::nanbu;
    else if (scheme == "symmetric_pair")
        sim.scheme = Scheme::symmetric_pair;
    else
        file.fail("sim.scheme", "expected nanbu or symmetric_pair");
    sim.snapshot_times = file.get_list("sim.snapshot_times", {0.0, sim.t_end});
    sim.moment_orders = file.get_list("sim.moments", {2.0, 4.0});
    sim.seed = cfg.seed;
    int threads = static_cast<int>(file.get_int("threads", 0));
    if (overrides.threads)
        threads = *overrides.threads;
    if (cfg.deterministic)
        threads = 1;
    sim.threads = threads;

    CrossSection& cs = sim.cross_section;
    cs.gamma = file.get_double("cs.gamma", 0.5);
    cs.nu = file.get_double("cs.nu", 0.5);
    cs.c0 = file.get_double("cs.c0", 1);
    cs.C0 = file.get_double("cs.C0", 1);
    cs.c_b = file.get_double("cs.c_b", 1);
    cs.k = file.get_double("cs.k", 10);
    try
    {
        cs.validate();
    }
    catch (std::domain_error const& e)
    {
        file.fail(file.has("cs.gamma") ? "cs.gamma" : "cs.nu", e.what());
    }
    try
    {
        sim.validate();
    }
    catch (std::invalid_argument const& e)
    {
        file.fail(file.has("sim.snapshot_times") ? "sim.snapshot_times" : "sim.dt", e.what());
    }
    cfg.f0 = parse_f0(file);

    RatesParams& r = cfg.rates;
    r.t = file.get_double("rates.t", r.t);
    r.eps = file.get_list("rates.eps", r.eps);
    r.paths = static_cast<std::size_t>(file.get_int("rates.paths", static_cast<std::int64_t>(r.paths)));
    r.k = file.get_double("rates.k", r.k);
    r.snapshot_dt = file.get_double("rates.snapshot_dt", r.snapshot_dt);
    if (file.has("rates.min_slope"))
        r.min_slope = file.get_double("rates.min_slope", 0);
    for (double e : r.eps)
        if (!(e > 0 && e <= r.t))
            file.fail("rates.eps", "windows must lie in (0, rates.t]");

    PsiParams& ps = cfg.psi;
    ps.eps = file.get_double("psi.eps", ps.eps);
    ps.t = file.get_double("psi.t", ps.t);
    ps.v0 = file.get_vec3("psi.v0", ps.v0);
    ps.xi_min = file.get_double("psi.xi_min", ps.xi_min);
    ps.xi_max = file.get_double("psi.xi_max", ps.xi_max);
    ps.n_radii = static_cast<int>(file.get_int("psi.n_radii", ps.n_radii));
    ps.n_dirs = static_cast<int>(file.get_int("psi.n_dirs", ps.n_dirs));
    ps.max_velocity_samples = static_cast<std::size_t>(
        file.get_int("psi.max_velocity_samples", static_cast<std::int64_t>(ps.max_velocity_samples)));
    std::string const rule = file.get_string("psi.phi_rule", "bessel");
    if (rule == "bessel")
        ps.phi_rule = PhiRule::bessel;
    else if (rule == "uniform")
        ps.phi_rule = PhiRule::uniform;
    else
        file.fail("psi.phi_rule", "expected uniform or bessel");
    if (!(ps.eps > 0 && ps.eps < 1))
        file.fail("psi.eps", "must lie in (0, 1)");

    BesovParams& b = cfg.besov;
    b.input = file.get_string("besov.input", "");
    b.r = file.get_list("besov.r", b.r);
    b.h = file.get_list("besov.h", b.h);
    b.alpha = file.get_double("besov.alpha", b.alpha);

    SupportParams& su = cfg.support;
    su.iterations = static_cast<int>(file.get_int("support.iterations", su.iterations));
    su.samples_per_pair = static_cast<int>(file.get_int("support.samples_per_pair", su.samples_per_pair));
    su.pairs = static_cast<int>(file.get_int("support.pairs", su.pairs));
    su.radius = file.get_double("support.radius", su.radius);
    su.cell = file.get_double("support.cell", su.cell);
    su.min_coverage = file.get_double("support.min_coverage", su.min_coverage);
    su.q_t0 = file.get_double("support.q_t0", su.q_t0);
    su.q_t1 = file.get_double("support.q_t1", su.q_t1);

    EntropyParams& en = cfg.entropy;
    en.input = file.get_string("entropy.input", "");
    en.k_nn = static_cast<int>(file.get_int("entropy.k_nn", en.k_nn));

    ExponentParams& ex = cfg.exponents;
    ex.nu_min = file.get_double("exponents.nu_min", ex.nu_min);
    ex.nu_max = file.get_double("exponents.nu_max", ex.nu_max);
    ex.n = static_cast<int>(file.get_int("exponents.n", ex.n));
    ex.gammas = file.get_list("exponents.gammas", ex.gammas);
    if (!(ex.nu_min > 0 && ex.nu_max < 1 && ex.nu_min <= ex.nu_max) || ex.n < 1)
        file.fail("exponents.nu_min", "need 0 < nu_min <= nu_max < 1 and n >= 1");

    cfg.config_hash = hex64(fnv1a64(file.canonical() + "seed=" + std::to_string(cfg.seed) + "\n"));
    return cfg;
}

bool RunManifest::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](Assertion const& a) { return a.passed; });
}

std::string manifest_json(RunManifest const& m)
{
    json j;
    j["subcommand"] = m.subcommand;
    j["config_hash"] = m.config_hash;
    j["code_version"] = m.code_version;
    j["seed"] = m.seed;
    j["threads"] = m.threads;
    j["deterministic"] = m.deterministic;
    j["wall_seconds"] = m.wall_seconds;
    j["status"] = m.passed() ? "passed" : "failed";
    json a = json::array();
    for (Assertion const& x : m.assertions)
        a.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
    j["assertions"] = a;
    j["summary"] = json::parse(m.summary_json.empty() ? "{}" : m.summary_json);
    return j.dump(2) + "\n";
}

RunManifest run(ExperimentConfig const& cfg)
{
    auto const start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.subcommand = to_string(cfg.subcommand);
    manifest.config_hash = cfg.config_hash;
    manifest.code_version = BOLTZ_VERSION;
    manifest.seed = cfg.seed;
    manifest.threads = cfg.sim.threads;
    manifest.deterministic = cfg.deterministic;

    json summary = json::object();
    RunContext ctx{cfg, manifest.assertions, summary};
    std::filesystem::create_directories(cfg.output_dir);
    std::filesystem::remove(cfg.output_dir / "manifest.json");
    switch (cfg.subcommand)
    {
        case Subcommand::simulate:
            run_simulation(ctx, cfg.sim);
            break;
        case Subcommand::rates:
            run_rates(ctx);
            break;
        case Subcommand::psi:
            run_psi(ctx);
            break;
        case Subcommand::besov:
            run_besov(ctx);
            break;
        case Subcommand::support:
            run_support(ctx);
            break;
        case Subcommand::entropy:
            run_entropy(ctx);
            break;
        case Subcommand::exponents:
            run_exponents(ctx);
            break;
    }
    manifest.summary_json = summary.dump();
    manifest.wall_seconds
        = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_atomic(cfg.output_dir / "manifest.json", manifest_json(manifest));
    return manifest;
}

}  // namespace boltz
