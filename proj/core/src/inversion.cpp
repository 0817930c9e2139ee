#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "boltz/fourier.hpp"

namespace boltz
{
namespace
{
// FFTW planning is not thread-safe
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree
{
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer alloc(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!p)
        throw std::bad_alloc();
    return FftwBuffer(p);
}

class Plan
{
  public:
    Plan(int n, fftw_complex* buf)
    {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!plan_)
            throw std::runtime_error("FFTW planning failed");
    }
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(Plan const&) = delete;
    Plan& operator=(Plan const&) = delete;

    void execute(fftw_complex* buf) const { fftw_execute_dft(plan_, buf, buf); }

  private:
    fftw_plan plan_;
};

}  // namespace

InversionResult invert_symbol(Symbol const& phi, SymbolGrid const& grid, double max_tail)
{
    int const n = grid.n;
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("invert_symbol: n must be even and at least 4");
    if (!(grid.xi_max > 0))
        throw std::invalid_argument("invert_symbol: xi_max must be positive");
    auto const nn = static_cast<std::size_t>(n);
    std::size_t const total = nn * nn * nn;
    double const dxi = grid.dxi();
    double const dx = grid.period() / n;
    int const half = n / 2;

    // Fourier index j' = (j - n/2) mod n stores xi_j = (j - n/2) dxi
    auto const wrap = [&](int j) { return static_cast<std::size_t>((j - half + n) % n); };
    auto const flat = [&](std::size_t a, std::size_t b, std::size_t c) { return (a * nn + b) * nn + c; };

    std::vector<std::complex<double>> hat(total);
    std::vector<Vec3> xi_at(total);
    double weight = 0;
    double tail = 0;
    double const tail_radius = 0.75 * grid.xi_max;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
            {
                Vec3 const xi{(i - half) * dxi, (j - half) * dxi, (k - half) * dxi};
                std::complex<double> const value = phi(xi);
                if (value.real() < 0)
                    throw std::logic_error("invert_symbol: symbol with negative real part");
                std::size_t const idx = flat(wrap(i), wrap(j), wrap(k));
                hat[idx] = std::exp(-value);
                xi_at[idx] = xi;
                double const w = std::exp(-value.real()) * (1 + norm(xi));
                weight += w;
                if (norm(xi) > tail_radius)
                    tail += w;
            }
    double const cell_xi = dxi * dxi * dxi;
    InversionResult out;
    out.weight_integral = weight * cell_xi;
    out.tail_fraction = weight > 0 ? tail / weight : 1.0;
    if (out.tail_fraction > max_tail)
    {
        std::ostringstream os;
        os << "invert_symbol: xi-grid too small, tail fraction " << out.tail_fraction
           << " beyond |xi| > " << tail_radius << " exceeds " << max_tail
           << "; increase xi_max";
        throw GridExtentError(os.str());
    }

    FftwBuffer buf = alloc(total);
    Plan const plan(n, buf.get());
    double const norm_factor = cell_xi / std::pow(two_pi, 3);

    // x_m = (m - n/2) dx: e^{-i xi_j x_m} = e^{-2 pi i j' m' / n}, j', m' wrapped
    auto const transform = [&](auto&& multiplier, std::vector<std::complex<double>>& dest) {
        for (std::size_t idx = 0; idx < total; ++idx)
        {
            std::complex<double> const v = hat[idx] * multiplier(xi_at[idx]);
            buf[idx][0] = v.real();
            buf[idx][1] = v.imag();
        }
        plan.execute(buf.get());
        dest.resize(total);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                {
                    std::size_t const src = flat(wrap(i), wrap(j), wrap(k));
                    dest[flat(i, j, k)] = norm_factor * std::complex<double>(buf[src][0], buf[src][1]);
                }
    };

    std::vector<std::complex<double>> k_vals;
    transform([](Vec3 const&) { return std::complex<double>(1, 0); }, k_vals);

    out.density.grid.origin = Vec3{-half * dx, -half * dx, -half * dx};
    out.density.grid.spacing = dx;
    out.density.grid.counts = {n, n, n};
    out.density.values.resize(total);
    double max_re = 0;
    double max_im = 0;
    out.min_value = INFINITY;
    for (std::size_t idx = 0; idx < total; ++idx)
    {
        out.density.values[idx] = k_vals[idx].real();
        max_re = std::max(max_re, std::abs(k_vals[idx].real()));
        max_im = std::max(max_im, std::abs(k_vals[idx].imag()));
        out.min_value = std::min(out.min_value, k_vals[idx].real());
    }
    out.imag_ratio = max_re > 0 ? max_im / max_re : 0.0;

    // d/dx_a e^{-i xi x} = -i xi_a e^{-i xi x}
    std::vector<double> grad_sq(total, 0);
    std::vector<std::complex<double>> deriv;
    for (int a = 0; a < 3; ++a)
    {
        transform([a](Vec3 const& xi) { return std::complex<double>(0, -xi[a]); }, deriv);
        for (std::size_t idx = 0; idx < total; ++idx)
            grad_sq[idx] += deriv[idx].real() * deriv[idx].real();
    }
    double grad = 0;
    for (double g : grad_sq)
        grad += std::sqrt(g);
    out.grad_l1 = grad * dx * dx * dx;
    return out;
}

InversionResult invert_symbol(LevyCtx const& ctx, SymbolGrid const& grid, double max_tail)
{
    ctx.validate();
    double const scale = std::pow(ctx.eps, -1 / ctx.cs.nu);
    LevyCtx local = ctx;
    local.estimate_error = false;
    return invert_symbol(
        [&local, scale](Vec3 const& xi) { return psi(local, scale * xi).value(); }, grid, max_tail);
}

Symbol gaussian_symbol()
{
    return [](Vec3 const& xi) { return std::complex<double>(norm_sq(xi), 0); };
}

Symbol stable_symbol(double nu)
{
    if (!(nu > 0 && nu <= 2))
        throw std::domain_error("stable_symbol: nu must lie in (0, 2]");
    return [nu](Vec3 const& xi) { return std::complex<double>(std::pow(norm(xi), nu), 0); };
}

double calibrate_gradient_constant(InversionResult const& reference, double m1, double m4)
{
    double const denom = (1 + std::pow(m1, 4) + m4) * reference.weight_integral;
    if (!(denom > 0))
        throw std::domain_error("calibrate_gradient_constant: degenerate reference");
    return reference.grad_l1 / denom;
}

GradientBound check_gradient_bound(InversionResult const& inv, double m1, double m4, double constant)
{
    GradientBound out;
    out.grad_l1 = inv.grad_l1;
    out.m1 = m1;
    out.m4 = m4;
    out.weight_integral = inv.weight_integral;
    out.constant = constant;
    out.rhs = constant * (1 + std::pow(m1, 4) + m4) * inv.weight_integral;
    out.holds = out.grad_l1 <= out.rhs;
    return out;
}

}  // namespace boltz
