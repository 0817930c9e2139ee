#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "measure.hpp"
#include "simulator.hpp"
#include "vec3.hpp"

namespace boltz
{
//! K(w, zeta) = {v : |v| <= 3, |v - w| >= 1, |<v - w, zeta>| >= |zeta|}
struct Kset
{
    Vec3 w;
    Vec3 zeta;
};

bool in_K(Vec3 const& v, Kset const& k);

//! sg(y) = 1 for y >= 0, -1 otherwise
inline double sg(double y) { return y >= 0 ? 1.0 : -1.0; }

/*!
 * Center of a unit ball inside K(w, zeta): -2 sg(<w, zeta>) zeta/|zeta|.
 * Requires zeta != 0.
 */
Vec3 inner_ball_center(Kset const& k);

/*!
 * Default probe battery: w on three shells (radii 0, 1.5, 3) along a
 * direction grid, zeta along the same directions with |zeta| in
 * {0.5, 1, 2}.
 */
std::vector<Kset> default_probes(int n_dirs = 14);

struct QEstimate
{
    //! min over snapshots and probes of the empirical mass of K
    double q{0};
    std::size_t argmin_probe{0};
    std::size_t argmin_snapshot{0};
    //! min over snapshots and probes of the mass in B(x_{w,zeta}, 1)
    double inner_ball_mass{0};
    //! every sampled point of each inner ball was found inside K
    bool inclusion_ok{true};
};

//! Empirical mass of K(w, zeta)
double mass_in_K(EmpiricalMeasure const& m, Kset const& k);

QEstimate estimate_q(std::span<Snapshot const> snapshots,
                     std::span<Kset const> probes,
                     std::uint64_t seed = 0);

//---------------------------------------------------------------------------//
//! Raised when a cloud has no two distinct points
class DiracCloudError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

struct SpreadResult
{
    std::vector<Vec3> cloud;
    Vec3 x0;
    double r0{0};
    //! 2^(n/2) r0: radius of the ball around x0 reached by the construction
    double guaranteed_radius{0};
};

/*!
 * Sphere-spreading iteration.
 *
 * Iteration 1 adds points on the seeding sphere S(x0, r0) of the farthest
 * pair and then one round of random pairs; every later iteration adds one
 * round. A round picks \c pairs_per_iteration pairs of the cloud as it was
 * at the start of the round and puts \c samples_per_pair uniform points on
 * each sphere S((v1 + v2)/2, |v1 - v2|/2). Even-numbered pairs are drawn
 * with probability proportional to |v1 - v2|; odd-numbered pairs are the
 * sqrt2_pair of a uniform target in B(x0, sqrt(2) R), R the radius reached
 * so far, snapped to the nearest cloud points.
 */
SpreadResult sphere_spread(std::span<Vec3 const> points,
                           int iterations,
                           int samples_per_pair,
                           int pairs_per_iteration = 256,
                           std::uint64_t seed = 0);

//! Pair (v1, v2) on S(x, r) whose diametral sphere passes through v
struct SpherePair
{
    Vec3 v1;
    Vec3 v2;
};

/*!
 * Explicit construction for v in the closed ball B(x, sqrt(2) r): with
 * v = x + alpha r sigma and tau orthogonal to sigma,
 * v1,2 = x + r[(alpha + s) sigma +- (alpha - s) tau]/2, s = sqrt(2 - alpha^2).
 */
SpherePair sqrt2_pair(Vec3 const& x, double r, Vec3 const& v);

//! Share of grid cells inside B(center, radius) with a cloud point within one cell diagonal
double coverage_fraction(std::span<Vec3 const> cloud, Vec3 const& center, double radius, double cell);

//! Share of grid cells inside B(center, radius) that contain at least one sample
double occupied_fraction(std::span<Vec3 const> samples, Vec3 const& center, double radius, double cell);

}  // namespace boltz
