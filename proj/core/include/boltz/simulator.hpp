#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "collision.hpp"
#include "measure.hpp"
#include "rng.hpp"
#include "vec3.hpp"

namespace boltz
{
//---------------------------------------------------------------------------//
/*!
 * Initial velocity law f_0.
 *
 * Families: two atoms, isotropic Gaussian, uniform ball, resampling from a
 * fixed list, and an isotropic law with truncated Pareto speeds (few finite
 * moments). A law concentrated on one point is rejected by validate().
 */
struct InitialLaw
{
    enum class Kind
    {
        two_point,
        gaussian,
        uniform_ball,
        samples,
        pareto
    };

    Kind kind{Kind::gaussian};
    //! Atoms for two_point and samples
    std::vector<Vec3> points;
    //! Probability of points[0] for two_point
    double first_mass{0.5};
    //! Mean (gaussian) or center (uniform_ball)
    Vec3 center;
    //! Standard deviation per axis (gaussian)
    double sigma{1};
    //! Radius (uniform_ball)
    double radius{1};
    //! Pareto tail index: speed density ~ s^(-1-tail) on [s_min, s_max]
    double tail{2.5};
    double s_min{0.5};
    double s_max{1e3};

    static InitialLaw two_point(Vec3 a, Vec3 b, double mass_a = 0.5);
    static InitialLaw gaussian(Vec3 mean, double sigma);
    static InitialLaw uniform_ball(Vec3 center, double radius);
    static InitialLaw from_samples(std::vector<Vec3> samples);
    static InitialLaw truncated_pareto(double tail, double s_min, double s_max);

    //! Throws std::invalid_argument, in particular for a Dirac mass
    void validate() const;

    Vec3 draw(CounterStream& rng) const;
};

enum class Scheme
{
    nanbu,
    symmetric_pair
};

struct SimConfig
{
    std::size_t n_particles{1000};
    double t_end{1};
    double dt{1e-3};
    //! Must carry a finite truncation level k
    CrossSection cross_section{.k = 10.0};
    Scheme scheme{Scheme::nanbu};
    std::uint64_t seed{1};
    std::vector<double> snapshot_times{0.0};
    //! Orders p of m_p recorded in every snapshot
    std::vector<double> moment_orders{2.0, 4.0};
    //! OpenMP threads for the Nanbu update (0: runtime default)
    int threads{0};

    //! Throws std::invalid_argument on inconsistent settings
    void validate() const;
    //! Soft problems with the configuration (e.g. large dt times rate)
    std::vector<std::string> warnings() const;
};

//! Candidate rate per particle, k * int_{1/k}^{pi/2} b * 2 pi
double candidate_rate(CrossSection const& cs);

//! H_k(v) = (min(|v|, k)/|v|) v
Vec3 clip_speed(Vec3 const& v, double k);

struct ParticleSystem
{
    std::vector<Vec3> velocities;
    double time{0};
    //! Number of steps taken; addresses the per-step RNG streams
    std::uint64_t step_index{0};
    std::uint64_t seed{0};
};

struct SnapshotDiagnostics
{
    //! Mean velocity (momentum per particle)
    Vec3 momentum;
    //! Mean squared speed
    double energy{0};
    //! (p, m_p) pairs
    std::vector<std::pair<double, double>> moments;
};

struct Snapshot
{
    double t{0};
    EmpiricalMeasure measure;
    SnapshotDiagnostics diagnostics;
};

SnapshotDiagnostics diagnose(EmpiricalMeasure const& m, std::span<double const> moment_orders);

//! Raised on a non-finite velocity; what() includes a state dump
class SimulationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct StepStats
{
    std::uint64_t candidates{0};
    std::uint64_t accepted{0};
};

ParticleSystem init_system(InitialLaw const& f0, SimConfig const& config);

/*!
 * Advance by dt.
 *
 * Nanbu: every particle draws Poisson(Lambda dt) candidates against the
 * frozen start-of-step velocities and moves alone. SymmetricPair: pairs are
 * drawn at half rate and processed sequentially, both partners updated.
 */
StepStats step(ParticleSystem& system, double dt, SimConfig const& config);

Snapshot make_snapshot(ParticleSystem const& system, SimConfig const& config);

struct SimLog
{
    std::vector<std::string> warnings;
    std::uint64_t steps{0};
    std::uint64_t candidates{0};
    std::uint64_t accepted{0};
};

//! Snapshots at config.snapshot_times; the last step before each is clipped
std::vector<Snapshot> simulate(SimConfig const& config, InitialLaw const& f0, SimLog* log = nullptr);

//---------------------------------------------------------------------------//
//! Atom of the driving Poisson measure, proposed by thinning
struct Mark
{
    double s{0};
    Vec3 v;
    double theta{0};
    double phi{0};
    //! Thinning height in [0, K(s))
    double u{0};
    //! Left limit V_{s-}
    Vec3 v_before;
    bool accepted{false};
};

struct PathPoint
{
    double s;
    Vec3 v;
};

/*!
 * One tagged-particle trajectory with the marks needed for frozen replay.
 *
 * \c v_path holds the initial point and every accepted jump (value after the
 * jump). \c events holds all proposed marks in [t - eps_max, t].
 */
struct CoupledPath
{
    CrossSection cs;
    double t{0};
    double eps_max{0};
    std::vector<PathPoint> v_path;
    std::vector<Mark> events;
    Vec3 v_t;
    Vec3 v_t_eps;
    std::uint64_t proposals{0};
    std::uint64_t jumps{0};

    //! Right-continuous value V_s for s in [0, t]
    Vec3 value_at(double s) const;
};

/*!
 * Simulate V on [0, t] from v0 driven by the background measures.
 *
 * Needs cs.k for the angular cutoff 1/k. The kinetic factor is
 * cs.kinetic(|V - v|); proposals arrive at rate K c 2 pi with
 * K = min(k, (max_s |V_s| + max speed in background)^gamma) for gamma > 0
 * and K = k otherwise.
 */
CoupledPath tagged_path(std::span<Snapshot const> background,
                        Vec3 v0,
                        double t,
                        double eps_max,
                        CrossSection const& cs,
                        std::uint64_t seed,
                        std::uint64_t path_id = 0);

enum class FreezeMode
{
    //! Base point V_{t-eps} for every mark
    frozen,
    //! Base point is the replay's own left limit (reproduces V_t)
    degenerate
};

//! Replay the marks in (t - eps, t] starting from V_{t-eps}
Vec3 replay(CoupledPath const& path, double eps, FreezeMode mode);

//! (V_t, V_t^eps)
std::pair<Vec3, Vec3> coupled_freeze(CoupledPath const& path, double eps);

//---------------------------------------------------------------------------//
struct RatePoint
{
    double eps;
    double mean;        //!< mean |V_t - V_t^eps|^nu
    double std_error;
};

struct RateStudy
{
    std::vector<RatePoint> points;
    double slope{0};
};

/*!
 * Monte Carlo estimate of E|V_t - V_t^eps|^nu over n_paths coupled paths.
 *
 * Initial velocities are drawn from the first background snapshot; each
 * path is replayed for every eps (common random numbers).
 */
RateStudy coupling_rates(std::span<Snapshot const> background,
                         double t,
                         std::span<double const> eps_list,
                         std::size_t n_paths,
                         CrossSection const& cs,
                         std::uint64_t seed);

}  // namespace boltz
