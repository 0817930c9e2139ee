#pragma once

#include <numbers>
#include <optional>

#include "vec3.hpp"

namespace boltz
{
inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2;
inline constexpr double two_pi = 2 * std::numbers::pi;

//---------------------------------------------------------------------------//
/*!
 * Non-cutoff cross section |v - v_*|^gamma b(theta), with
 * b(theta) = c_b theta^(-1-nu) on (0, pi/2] and zero beyond.
 *
 * The optional truncation level k replaces the kinetic factor by
 * min(|v - v_*|^gamma, k) and removes grazing angles theta <= 1/k.
 */
struct CrossSection
{
    double gamma{0.5};
    double nu{0.5};
    double c0{1};
    double C0{1};
    //! Constant actually used for b; must lie in [c0, C0]
    double c_b{1};
    std::optional<double> k;

    //! Throws std::domain_error when parameters leave their ranges
    void validate() const;
    //! Additionally requires gamma + nu > 0
    void validate_soft() const;

    double b(double theta) const;

    //! Integral of b over [theta_min, pi/2]
    double angular_mass(double theta_min) const;

    //! Lower angular cutoff 1/k (requires k)
    double theta_min() const;

    //! Kinetic factor, truncated at k when k is set
    double kinetic(double rel_speed) const;
};

//! Orthogonal pair (I(X), J(X)) completing X/|X| to a basis, scaled by |X|
struct Frame
{
    Vec3 i_vec;
    Vec3 j_vec;
};

struct CollisionAngles
{
    double theta{0};
    double phi{0};
};

//---------------------------------------------------------------------------//
/*!
 * Measurable frame selection.
 *
 * Picks the coordinate axis least aligned with X (lowest index on ties),
 * projects it onto the plane orthogonal to X and scales to |X|; the second
 * vector is (X/|X|) x I. Returns a null frame for X = 0.
 */
Frame orthonormal_frame(Vec3 const& x);

//! Gamma(X, phi) = cos(phi) I(X) + sin(phi) J(X)
Vec3 gamma_vec(Vec3 const& x, double phi);

//! Same as above for a frame already computed
Vec3 gamma_vec(Frame const& frame, double phi);

//! Deviation a = v' - v of the parameterized post-collision velocity
Vec3 deviation(Vec3 const& v, Vec3 const& v_star, CollisionAngles angles);

//! Deviation with a precomputed frame of X = v - v_*
Vec3 deviation(Vec3 const& rel, Frame const& frame, CollisionAngles angles);

//! Post-collision pair (v', v'_*) with v'_* = v + v_* - v'
struct PostCollision
{
    Vec3 v;
    Vec3 v_star;
};
PostCollision collide(Vec3 const& v, Vec3 const& v_star, CollisionAngles angles);

/*!
 * Inverse-CDF sample of theta^(-1-nu) restricted to [theta_min, pi/2].
 *
 * \c u is a uniform variate in [0, 1]; u = 0 maps to theta_min and u = 1 to
 * pi/2.
 */
double sample_theta(CrossSection const& cs, double theta_min, double u);

/*!
 * Azimuthal shift aligning the collision frames of X and Y.
 *
 * Maximizes the phi-average of <Gamma(X, phi), Gamma(Y, phi + phi0)>, so
 * that |a(v, v_*, theta, phi) - a(w, w_*, theta, phi + phi0)| stays below
 * 2 theta (|v - w| + |v_* - w_*|) for X = v - v_*, Y = w - w_*. Returns 0
 * when either vector vanishes.
 */
double tanaka_phi0(Vec3 const& x, Vec3 const& y);

}  // namespace boltz
