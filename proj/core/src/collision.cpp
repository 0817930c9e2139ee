#include "boltz/collision.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace boltz
{
void CrossSection::validate() const
{
    if (!(gamma > -1 && gamma < 1))
        throw std::domain_error("cross section: gamma must lie in (-1, 1), got "
                                + std::to_string(gamma));
    if (!(nu > 0 && nu < 1))
        throw std::domain_error("cross section: nu must lie in (0, 1), got "
                                + std::to_string(nu));
    if (!(c0 > 0 && c0 <= C0))
        throw std::domain_error("cross section: need 0 < c0 <= C0");
    if (!(c_b >= c0 && c_b <= C0))
        throw std::domain_error("cross section: c_b must lie in [c0, C0]");
    if (k && !(*k >= 1))
        throw std::domain_error("cross section: truncation level k must be >= 1");
}

void CrossSection::validate_soft() const
{
    validate();
    if (!(gamma + nu > 0))
        throw std::domain_error("cross section: gamma + nu must be positive");
}

double CrossSection::b(double theta) const
{
    if (theta <= 0 || theta > half_pi)
        return 0;
    return c_b * std::pow(theta, -1 - nu);
}

double CrossSection::angular_mass(double theta_min) const
{
    if (!(theta_min > 0))
        throw std::domain_error("angular_mass: theta_min must be positive");
    if (theta_min >= half_pi)
        return 0;
    return c_b * (std::pow(theta_min, -nu) - std::pow(half_pi, -nu)) / nu;
}

double CrossSection::theta_min() const
{
    if (!k)
        throw std::domain_error("cross section has no truncation level");
    return 1 / *k;
}

double CrossSection::kinetic(double rel_speed) const
{
    double const raw = std::pow(rel_speed, gamma);
    return k ? std::min(raw, *k) : raw;
}

//---------------------------------------------------------------------------//
Frame orthonormal_frame(Vec3 const& x)
{
    double const len_sq = norm_sq(x);
    if (len_sq == 0)
        return {};
    double const len = std::sqrt(len_sq);

    int axis = 0;
    double best = std::abs(x.x);
    for (int i = 1; i < 3; ++i)
    {
        if (std::abs(x[i]) < best)
        {
            best = std::abs(x[i]);
            axis = i;
        }
    }
    Vec3 e{};
    e[axis] = 1;
    Vec3 u = e - (x[axis] / len_sq) * x;
    Vec3 i_vec = (len / norm(u)) * u;
    Vec3 j_vec = (1 / len) * cross(x, i_vec);
    return {i_vec, j_vec};
}

Vec3 gamma_vec(Frame const& frame, double phi)
{
    return std::cos(phi) * frame.i_vec + std::sin(phi) * frame.j_vec;
}

Vec3 gamma_vec(Vec3 const& x, double phi)
{
    return gamma_vec(orthonormal_frame(x), phi);
}

Vec3 deviation(Vec3 const& rel, Frame const& frame, CollisionAngles angles)
{
    // 1 - cos(theta) written as 2 sin^2(theta/2) to keep grazing angles exact
    double const s_half = std::sin(angles.theta / 2);
    double const one_minus_cos = 2 * s_half * s_half;
    return (-one_minus_cos / 2) * rel
           + (std::sin(angles.theta) / 2) * gamma_vec(frame, angles.phi);
}

Vec3 deviation(Vec3 const& v, Vec3 const& v_star, CollisionAngles angles)
{
    Vec3 const rel = v - v_star;
    return deviation(rel, orthonormal_frame(rel), angles);
}

PostCollision collide(Vec3 const& v, Vec3 const& v_star, CollisionAngles angles)
{
    Vec3 const a = deviation(v, v_star, angles);
    return {v + a, v_star - a};
}

double sample_theta(CrossSection const& cs, double theta_min, double u)
{
    if (!(theta_min > 0 && theta_min < half_pi))
        throw std::domain_error("sample_theta: theta_min must lie in (0, pi/2)");
    if (u <= 0)
        return theta_min;
    if (u >= 1)
        return half_pi;
    double const lo = std::pow(theta_min, -cs.nu);
    double const hi = std::pow(half_pi, -cs.nu);
    double const theta = std::pow(lo - u * (lo - hi), -1 / cs.nu);
    return std::clamp(theta, theta_min, half_pi);
}

double tanaka_phi0(Vec3 const& x, Vec3 const& y)
{
    Frame const fx = orthonormal_frame(x);
    Frame const fy = orthonormal_frame(y);
    if (norm_sq(fx.i_vec) == 0 || norm_sq(fy.i_vec) == 0)
        return 0;
    double const s = dot(fx.i_vec, fy.j_vec) - dot(fx.j_vec, fy.i_vec);
    double const c = dot(fx.i_vec, fy.i_vec) + dot(fx.j_vec, fy.j_vec);
    double phi0 = std::atan2(s, c);
    if (phi0 < 0)
        phi0 += two_pi;
    if (phi0 >= two_pi)
        phi0 = 0;
    return phi0;
}

}  // namespace boltz
