#include "boltz/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boltz/quadrature.hpp"

namespace boltz
{
namespace
{
constexpr int kPhiPoints = 256;
// Target phase change per theta panel, in radians
constexpr double kPanelPhase = 20.0;

struct Piece
{
    double length;
    std::size_t snapshot;
};

std::vector<Piece> time_pieces(std::span<Snapshot const> bg, double s0, double s1)
{
    std::vector<Piece> out;
    for (std::size_t i = 0; i < bg.size(); ++i)
    {
        double const lo = i == 0 ? -INFINITY : bg[i].t;
        double const hi = i + 1 < bg.size() ? bg[i + 1].t : INFINITY;
        double const a = std::max(lo, s0);
        double const b = std::min(hi, s1);
        if (b > a)
            out.push_back({b - a, i});
    }
    return out;
}

// Indices of the velocities used from one snapshot
std::size_t stride_for(std::size_t n, std::size_t cap)
{
    if (cap == 0 || n <= cap)
        return 1;
    return (n + cap - 1) / cap;
}

// phi-integral of 1 - e^{i<xi, a>} for one (X, theta)
std::complex<double> phi_integral(PhiRule rule,
                                  Vec3 const& xi,
                                  Frame const& frame,
                                  double xi_rel,
                                  double xi_perp,
                                  double theta)
{
    double const s_half = std::sin(theta / 2);
    double const a_par = -s_half * s_half * xi_rel;  // -(1 - cos)/2 <xi, X>
    double const half_sin = std::sin(theta) / 2;
    if (rule == PhiRule::bessel)
    {
        double const j0 = std::cyl_bessel_j(0.0, half_sin * xi_perp);
        return two_pi * std::complex<double>(1 - std::cos(a_par) * j0, -std::sin(a_par) * j0);
    }
    double const xi_i = dot(xi, frame.i_vec);
    double const xi_j = dot(xi, frame.j_vec);
    double re = 0;
    double im = 0;
    double const dphi = two_pi / kPhiPoints;
    for (int p = 0; p < kPhiPoints; ++p)
    {
        double const phi = p * dphi;
        double const arg = a_par + half_sin * (std::cos(phi) * xi_i + std::sin(phi) * xi_j);
        re += 1 - std::cos(arg);
        im -= std::sin(arg);
    }
    return {re * dphi, im * dphi};
}

// Integral over theta in (0, theta_max) of b(theta) times the phi-integral.
// First panel in w = theta^(2 - nu), remaining panels directly in theta.
std::complex<double> theta_integral(LevyCtx const& ctx,
                                    Vec3 const& xi,
                                    Vec3 const& rel,
                                    int nodes)
{
    CrossSection const& cs = ctx.cs;
    double const theta_max = ctx.theta_max();
    Frame const frame = orthonormal_frame(rel);
    double const xi_rel = dot(xi, rel);
    double const perp_sq = std::max(0.0, norm_sq(xi) * norm_sq(rel) - xi_rel * xi_rel);
    double const xi_perp = std::sqrt(perp_sq);
    double const phase = (std::abs(xi_rel) + xi_perp) * theta_max;
    int const panels = 1 + static_cast<int>(phase / kPanelPhase);
    double const width = theta_max / panels;
    GaussLegendre const& gl = gauss_legendre(nodes);

    auto const integrand = [&](double theta) {
        return phi_integral(ctx.phi_rule, xi, frame, xi_rel, xi_perp, theta);
    };

    std::complex<double> total = 0;
    // b(theta) d theta = c_b/(2 - nu) w^(-2/(2 - nu)) dw
    double const expo = 2 - cs.nu;
    double const w_max = std::pow(width, expo);
    double const jac = cs.c_b / expo;
    double const half = w_max / 2;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q)
    {
        double const w = half * (1 + gl.nodes[q]);
        double const theta = std::pow(w, 1 / expo);
        total += gl.weights[q] * half * jac * std::pow(w, -2 / expo) * integrand(theta);
    }
    for (int p = 1; p < panels; ++p)
    {
        double const a = p * width;
        double const h = width / 2;
        for (std::size_t q = 0; q < gl.nodes.size(); ++q)
        {
            double const theta = a + h * (1 + gl.nodes[q]);
            total += gl.weights[q] * h * cs.b(theta) * integrand(theta);
        }
    }
    return total;
}

std::complex<double> psi_sum(LevyCtx const& ctx, Vec3 const& xi, double s0, double s1, int nodes)
{
    std::complex<double> total = 0;
    for (Piece const& piece : time_pieces(ctx.background, s0, s1))
    {
        EmpiricalMeasure const& m = ctx.background[piece.snapshot].measure;
        auto const samples = m.samples();
        auto const weights = m.weights();
        std::size_t const stride = stride_for(samples.size(), ctx.max_velocity_samples);
        std::complex<double> acc = 0;
        double wsum = 0;
        for (std::size_t i = 0; i < samples.size(); i += stride)
        {
            Vec3 const rel = ctx.v0 - samples[i];
            double const kin = ctx.cs.kinetic(norm(rel));
            wsum += weights[i];
            if (kin == 0 || norm_sq(rel) == 0)
                continue;
            acc += weights[i] * kin * theta_integral(ctx, xi, rel, nodes);
        }
        total += piece.length * acc / wsum;
    }
    return total;
}

}  // namespace

void LevyCtx::validate() const
{
    if (!(eps > 0 && eps < 1))
        throw std::domain_error("LevyCtx: eps must lie in (0, 1)");
    if (background.empty())
        throw std::domain_error("LevyCtx: empty background");
    if (t - eps < background.front().t)
        throw std::domain_error("LevyCtx: background does not cover [t - eps, t]");
    if (theta_nodes < 2)
        throw std::domain_error("LevyCtx: need at least two theta nodes");
    cs.validate();
}

double LevyCtx::theta_max() const { return std::min(std::pow(eps, 1 / cs.nu), half_pi); }

SymbolValue psi_window(LevyCtx const& ctx, Vec3 const& xi, double s0, double s1)
{
    if (!is_finite(xi))
        throw std::domain_error("psi: xi must be finite");
    ctx.validate();
    SymbolValue out;
    out.xi = xi;
    if (norm_sq(xi) == 0 || !(s1 > s0))
        return out;
    std::complex<double> const value = psi_sum(ctx, xi, s0, s1, ctx.theta_nodes);
    out.psi_re = value.real();
    out.psi_im = value.imag();
    if (out.psi_re < -1e-12 * (1 + std::abs(value)))
        throw std::logic_error("psi: negative real part");
    out.psi_re = std::max(out.psi_re, 0.0);
    if (ctx.estimate_error)
    {
        std::complex<double> const coarse
            = psi_sum(ctx, xi, s0, s1, std::max(2, ctx.theta_nodes / 2));
        double const scale = std::abs(value);
        out.rel_error = scale > 0 ? std::abs(value - coarse) / scale : 0.0;
    }
    return out;
}

SymbolValue psi(LevyCtx const& ctx, Vec3 const& xi)
{
    return psi_window(ctx, xi, ctx.t - ctx.eps, ctx.t);
}

//---------------------------------------------------------------------------//
double coercivity_weight(CrossSection const& cs, Vec3 const& v0)
{
    return cs.gamma > 0 ? 1.0 : std::pow(1 + norm(v0), cs.gamma);
}

std::vector<Vec3> radial_direction_grid(double r_min, double r_max, int n_radii, int n_dirs)
{
    if (!(r_min > 0 && r_max >= r_min) || n_radii < 1 || n_dirs < 1)
        throw std::invalid_argument("radial_direction_grid: bad arguments");
    std::vector<Vec3> out;
    double const golden = pi * (3 - std::sqrt(5.0));
    for (int r = 0; r < n_radii; ++r)
    {
        double const frac = n_radii == 1 ? 0.0 : static_cast<double>(r) / (n_radii - 1);
        double const radius = r_min * std::pow(r_max / r_min, frac);
        for (int d = 0; d < n_dirs; ++d)
        {
            // Fibonacci sphere
            double const z = 1 - (2 * d + 1.0) / n_dirs;
            double const rho = std::sqrt(std::max(0.0, 1 - z * z));
            double const ang = golden * d;
            out.push_back(radius * Vec3{rho * std::cos(ang), rho * std::sin(ang), z});
        }
    }
    return out;
}

CoercivityResult verify_coercivity(LevyCtx const& ctx, std::span<Vec3 const> xi_grid)
{
    ctx.validate();
    CoercivityResult out;
    out.c_hat = INFINITY;
    double const scale = std::pow(ctx.eps, -1 / ctx.cs.nu);
    double const weight = coercivity_weight(ctx.cs, ctx.v0);
    for (Vec3 const& xi : xi_grid)
    {
        double const r = norm(xi);
        double const denom = std::min(r * r, std::pow(r, ctx.cs.nu)) * weight;
        if (!(denom > 0))
        {
            ++out.excluded;
            continue;
        }
        SymbolValue const v = psi(ctx, scale * xi);
        ++out.evaluated;
        out.max_rel_error = std::max(out.max_rel_error, v.rel_error);
        double const ratio = v.psi_re / denom;
        if (ratio < out.c_hat)
        {
            out.c_hat = ratio;
            out.argmin = xi;
        }
    }
    if (out.evaluated == 0)
        out.c_hat = 0;
    out.degenerate = !(out.c_hat > 0);
    return out;
}

//---------------------------------------------------------------------------//
LambdaMoment lambda_moments(LevyCtx const& ctx, int n)
{
    if (n != 1 && n != 4)
        throw std::domain_error("lambda_moments: n must be 1 or 4");
    ctx.validate();
    CrossSection const& cs = ctx.cs;
    double const theta_max = ctx.theta_max();
    double const scale = std::pow(ctx.eps, -static_cast<double>(n) / cs.nu);

    // |a| = sin(theta/2)|X|, so the phi-integral is 2 pi and theta separates.
    // With w = theta^(n - nu) the integrand c_b/(n - nu) (sin(theta/2)/theta)^n is smooth.
    double const expo = n - cs.nu;
    double const w_max = std::pow(theta_max, expo);
    GaussLegendre const& gl = gauss_legendre(ctx.theta_nodes);
    double const theta_part = gl.integrate(
        [&](double w) {
            double const theta = std::pow(w, 1 / expo);
            return cs.c_b / expo * std::pow(std::sin(theta / 2) / theta, n);
        },
        0, w_max);

    LambdaMoment out;
    out.n = n;
    double const p = cs.gamma + n;
    out.constant = two_pi * cs.c_b / (std::pow(2.0, n) * (n - cs.nu))
                   * std::max(1.0, std::pow(2.0, p - 1));
    double sup = 0;
    for (Piece const& piece : time_pieces(ctx.background, ctx.t - ctx.eps, ctx.t))
    {
        EmpiricalMeasure const& m = ctx.background[piece.snapshot].measure;
        auto const samples = m.samples();
        auto const weights = m.weights();
        std::size_t const stride = stride_for(samples.size(), ctx.max_velocity_samples);
        double acc = 0;
        double moment_sum = 0;
        double wsum = 0;
        for (std::size_t i = 0; i < samples.size(); i += stride)
        {
            double const r = norm(ctx.v0 - samples[i]);
            wsum += weights[i];
            moment_sum += weights[i] * std::pow(norm(samples[i]), p);
            if (r > 0)
                acc += weights[i] * cs.kinetic(r) * std::pow(r, n);
        }
        out.value += piece.length * acc / wsum;
        sup = std::max(sup, moment_sum / wsum + std::pow(norm(ctx.v0), p));
    }
    out.value *= two_pi * theta_part * scale;
    out.bound = out.constant * sup;
    return out;
}

}  // namespace boltz
