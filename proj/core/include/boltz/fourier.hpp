#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "collision.hpp"
#include "measure.hpp"
#include "simulator.hpp"
#include "vec3.hpp"

namespace boltz
{
//---------------------------------------------------------------------------//
//! Azimuthal quadrature for the phi-integral of the symbol
enum class PhiRule
{
    //! 256-point periodic trapezoid
    uniform,
    //! Closed form 2 pi (1 - e^{iA} J0(R)) of the same integral
    bessel
};

/*!
 * Frozen-process symbol context.
 *
 * The background is read as piecewise constant in time, snapshot i holding
 * on (t_i, t_{i+1}].
 */
struct LevyCtx
{
    double eps{0.1};
    double t{1};
    Vec3 v0;
    std::span<Snapshot const> background;
    CrossSection cs;
    //! Use at most this many velocities per snapshot (0: all), evenly strided
    std::size_t max_velocity_samples{0};
    PhiRule phi_rule{PhiRule::uniform};
    //! Gauss-Legendre nodes per theta panel
    int theta_nodes{128};
    //! Compare against a half-order rule to estimate the quadrature error
    bool estimate_error{true};

    //! Throws std::domain_error when eps, t or the background are unusable
    void validate() const;
    //! Upper angular limit eps^(1/nu)
    double theta_max() const;
};

struct SymbolValue
{
    Vec3 xi;
    double psi_re{0};
    double psi_im{0};
    //! Relative difference to the lower-order rule (0 if not estimated)
    double rel_error{0};

    std::complex<double> value() const { return {psi_re, psi_im}; }
};

//! Psi_{eps,t,v0}(xi)
SymbolValue psi(LevyCtx const& ctx, Vec3 const& xi);

//! Same integrand restricted to the time window [s0, s1]
SymbolValue psi_window(LevyCtx const& ctx, Vec3 const& xi, double s0, double s1);

//---------------------------------------------------------------------------//
struct CoercivityResult
{
    double c_hat{0};
    Vec3 argmin;
    std::size_t evaluated{0};
    std::size_t excluded{0};
    //! c_hat is zero: the symbol vanishes somewhere on the grid
    bool degenerate{false};
    //! Largest quadrature error estimate seen
    double max_rel_error{0};
};

//! Weight w(v0): 1 for gamma > 0, (1 + |v0|)^gamma otherwise
double coercivity_weight(CrossSection const& cs, Vec3 const& v0);

//! Log-spaced radii in [r_min, r_max] times quasi-uniform directions
std::vector<Vec3> radial_direction_grid(double r_min, double r_max, int n_radii, int n_dirs);

/*!
 * min over the grid of Re Psi(eps^(-1/nu) xi) / ((|xi|^2 ^ |xi|^nu) w(v0)).
 * Grid points with a zero denominator are skipped.
 */
CoercivityResult verify_coercivity(LevyCtx const& ctx, std::span<Vec3 const> xi_grid);

//---------------------------------------------------------------------------//
struct LambdaMoment
{
    int n{1};
    double value{0};
    //! Explicit constant C of the comparison bound
    double constant{0};
    //! C sup_s int (|v|^(gamma+n) + |v0|^(gamma+n)) f_s(dv)
    double bound{0};
};

//! int |y|^n lambda_{t,eps,v0}(dy) for n in {1, 4}
LambdaMoment lambda_moments(LevyCtx const& ctx, int n);

//---------------------------------------------------------------------------//
//! Symmetric xi-grid: n points per axis at (j - n/2) dxi, dxi = 2 xi_max / n
struct SymbolGrid
{
    int n{64};
    double xi_max{8};

    double dxi() const { return 2 * xi_max / n; }
    //! Period of the x-grid, 2 pi / dxi
    double period() const { return 2 * pi / dxi(); }
};

using Symbol = std::function<std::complex<double>(Vec3 const&)>;

struct InversionResult
{
    //! k on the x-grid (cell centers at (m - n/2) dx)
    GridDensity density;
    double grad_l1{0};
    //! Grid value of int e^{-Re Phi} (1 + |xi|) dxi
    double weight_integral{0};
    //! Share of that integral carried by |xi| > 3/4 xi_max
    double tail_fraction{0};
    double min_value{0};
    //! Largest |Im k| relative to max k
    double imag_ratio{0};
};

//! Raised when the xi-grid cannot resolve exp(-Phi)
class GridExtentError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/*!
 * k(x) = (2 pi)^-3 int e^{-i<xi,x>} e^{-Phi(xi)} dxi by a 3D FFT.
 *
 * Refuses (GridExtentError) when the tail fraction exceeds \c max_tail.
 */
InversionResult invert_symbol(Symbol const& phi, SymbolGrid const& grid, double max_tail = 1e-4);

//! Phi(xi) = Psi_{eps,t,v0}(eps^(-1/nu) xi)
InversionResult invert_symbol(LevyCtx const& ctx, SymbolGrid const& grid, double max_tail = 1e-4);

//! Phi = |xi|^2
Symbol gaussian_symbol();
//! Phi = |xi|^nu
Symbol stable_symbol(double nu);

struct GradientBound
{
    double grad_l1{0};
    double m1{0};
    double m4{0};
    double weight_integral{0};
    double constant{0};
    //! C (1 + m1^4 + m4) weight_integral
    double rhs{0};
    bool holds{false};
};

/*!
 * Constant making ||grad k||_1 = C (1 + m1^4 + m4) int e^{-Re Phi}(1 + |xi|)
 * an equality for a reference inversion with the given lambda moments.
 */
double calibrate_gradient_constant(InversionResult const& reference, double m1 = 0, double m4 = 0);

GradientBound check_gradient_bound(InversionResult const& inv, double m1, double m4, double constant);

}  // namespace boltz
