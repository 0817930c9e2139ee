#include "boltz/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace boltz
{
GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n)
{
    if (n < 1)
        throw std::invalid_argument("GaussLegendre: need at least one node");
    // Newton iteration on P_n from the Chebyshev-like initial guess
    for (int i = 0; i < (n + 1) / 2; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter)
        {
            double p0 = 1;
            double p1 = x;
            for (int k = 2; k <= n; ++k)
            {
                double const p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1)
            {
                p1 = x;
                p0 = 1;
            }
            dp = n * (x * p1 - p0) / (x * x - 1);
            double const dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double const w = 2 / ((1 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        nodes[n / 2] = 0;
}

GaussLegendre const& gauss_legendre(int n)
{
    static std::mutex mutex;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, GaussLegendre(n)).first;
    return it->second;
}

Extremum golden_section_max(std::function<double(double)> const& f,
                            double a,
                            double b,
                            double tol)
{
    double const inv_phi = (std::sqrt(5.0) - 1) / 2;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    // The bracket endpoints are candidates too when the maximum sits on them
    Extremum best{(a + b) / 2, f((a + b) / 2)};
    for (double x : {a, b})
    {
        double const fx = f(x);
        if (fx > best.value)
            best = {x, fx};
    }
    return best;
}

LinearFit least_squares(std::span<std::vector<double> const> columns,
                        std::span<double const> y)
{
    std::size_t const p = columns.size() + 1;
    std::size_t const n = y.size();
    if (n < p)
        throw std::invalid_argument("least_squares: fewer observations than unknowns");
    auto design = [&](std::size_t row, std::size_t col) {
        return col == 0 ? 1.0 : columns[col - 1][row];
    };
    std::vector<double> a(p * (p + 1), 0);
    for (std::size_t r = 0; r < n; ++r)
    {
        for (std::size_t i = 0; i < p; ++i)
        {
            for (std::size_t j = 0; j < p; ++j)
                a[i * (p + 1) + j] += design(r, i) * design(r, j);
            a[i * (p + 1) + p] += design(r, i) * y[r];
        }
    }
    // Gaussian elimination with partial pivoting on the augmented system
    for (std::size_t col = 0; col < p; ++col)
    {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::abs(a[r * (p + 1) + col]) > std::abs(a[pivot * (p + 1) + col]))
                pivot = r;
        if (std::abs(a[pivot * (p + 1) + col]) < 1e-300)
            throw std::runtime_error("least_squares: singular design");
        for (std::size_t j = 0; j <= p; ++j)
            std::swap(a[col * (p + 1) + j], a[pivot * (p + 1) + j]);
        for (std::size_t r = 0; r < p; ++r)
        {
            if (r == col)
                continue;
            double const factor = a[r * (p + 1) + col] / a[col * (p + 1) + col];
            for (std::size_t j = col; j <= p; ++j)
                a[r * (p + 1) + j] -= factor * a[col * (p + 1) + j];
        }
    }
    LinearFit fit;
    fit.coef.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        fit.coef[i] = a[i * (p + 1) + p] / a[i * (p + 1) + i];
    double ss = 0;
    for (std::size_t r = 0; r < n; ++r)
    {
        double pred = 0;
        for (std::size_t i = 0; i < p; ++i)
            pred += fit.coef[i] * design(r, i);
        ss += (y[r] - pred) * (y[r] - pred);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

double fit_slope(std::span<double const> x, std::span<double const> y)
{
    std::vector<std::vector<double>> cols{std::vector<double>(x.begin(), x.end())};
    return least_squares(cols, y).coef[1];
}

}  // namespace boltz
