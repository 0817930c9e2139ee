#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "boltz/collision.hpp"
#include "boltz/measure.hpp"
#include "boltz/quadrature.hpp"

namespace boltz
{
GridDensity ball_mollify(EmpiricalMeasure const& m, double r, GridSpec const& grid)
{
    if (!(r > 0))
        throw std::invalid_argument("ball_mollify: radius must be positive");
    GridDensity out;
    out.grid = grid;
    out.values.assign(grid.size(), 0);
    double const inv_vol = 1 / (4.0 / 3.0 * pi * r * r * r);
    double const h = grid.spacing;
    double const r_sq = r * r;
    auto const s = m.samples();
    auto const w = m.weights();
    double captured = 0;
    for (std::size_t p = 0; p < s.size(); ++p)
    {
        std::array<int, 3> lo{};
        std::array<int, 3> hi{};
        for (int a = 0; a < 3; ++a)
        {
            lo[a] = std::max(0, static_cast<int>(std::ceil((s[p][a] - r - grid.origin[a]) / h)));
            hi[a] = std::min(grid.counts[a] - 1,
                             static_cast<int>(std::floor((s[p][a] + r - grid.origin[a]) / h)));
        }
        double const val = w[p] * inv_vol;
        for (int i = lo[0]; i <= hi[0]; ++i)
        {
            double const dx = grid.origin.x + i * h - s[p].x;
            for (int j = lo[1]; j <= hi[1]; ++j)
            {
                double const dy = grid.origin.y + j * h - s[p].y;
                double const dxy = dx * dx + dy * dy;
                if (dxy >= r_sq)
                    continue;
                std::size_t const row = grid.index(i, j, 0);
                for (int k = lo[2]; k <= hi[2]; ++k)
                {
                    double const dz = grid.origin.z + k * h - s[p].z;
                    if (dxy + dz * dz < r_sq)
                    {
                        out.values[row + k] += val;
                        captured += val;
                    }
                }
            }
        }
    }
    out.coverage_warning = captured * grid.cell_volume() < 0.999 * 0.999;
    return out;
}

double shift_l1(GridDensity const& g, int axis, int shift)
{
    if (axis < 0 || axis > 2)
        throw std::invalid_argument("shift_l1: axis must be 0, 1 or 2");
    auto const& c = g.grid.counts;
    std::array<int, 3> d{0, 0, 0};
    d[axis] = shift;
    auto const value = [&](int i, int j, int k) {
        if (i < 0 || j < 0 || k < 0 || i >= c[0] || j >= c[1] || k >= c[2])
            return 0.0;
        return g.at(i, j, k);
    };
    // Cells x where either g(x) or g(x + shift) can be nonzero
    int const lo = std::min(0, -shift);
    int const hi_extra = std::max(0, -shift);
    std::array<int, 3> start{0, 0, 0};
    std::array<int, 3> stop{c[0], c[1], c[2]};
    start[axis] = lo;
    stop[axis] = c[axis] + hi_extra;
    double sum = 0;
    for (int i = start[0]; i < stop[0]; ++i)
        for (int j = start[1]; j < stop[1]; ++j)
            for (int k = start[2]; k < stop[2]; ++k)
                sum += std::abs(value(i + d[0], j + d[1], k + d[2]) - value(i, j, k));
    return sum * g.grid.cell_volume();
}

BesovEstimate besov_estimate(EmpiricalMeasure const& m,
                             std::span<double const> r_set,
                             std::span<double const> h_set,
                             double alpha,
                             BesovOptions const& options)
{
    if (!(alpha > 0 && alpha < 1))
        throw std::domain_error("besov_estimate: alpha must lie in (0, 1)");
    if (r_set.empty() || h_set.size() < 2)
        throw std::invalid_argument("besov_estimate: need radii and at least two shifts");
    for (double r : r_set)
        if (!(r > 0 && r < 1))
            throw std::domain_error("besov_estimate: radii must lie in (0, 1)");
    for (double h : h_set)
        if (!(h > 0 && h < 1))
            throw std::domain_error("besov_estimate: shifts must lie in (0, 1)");

    double const r_min = *std::min_element(r_set.begin(), r_set.end());
    double const r_max = *std::max_element(r_set.begin(), r_set.end());
    double const h_max = *std::max_element(h_set.begin(), h_set.end());
    double const spacing = std::min(options.spacing_over_r, 0.25) * r_min;
    GridSpec const grid = GridSpec::covering(m, spacing, r_max + h_max + spacing);

    // Shifts snapped to whole cells, duplicates dropped
    std::vector<int> cells;
    for (double h : h_set)
        cells.push_back(std::max(1, static_cast<int>(std::lround(h / spacing))));
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    if (cells.size() < 2)
        throw std::invalid_argument("besov_estimate: shifts collapse onto one grid multiple");

    BesovEstimate est;
    est.alpha = alpha;
    std::vector<double> log_h;
    std::vector<double> log_r;
    std::vector<double> log_d;
    for (double r : r_set)
    {
        GridDensity const g = ball_mollify(m, r, grid);
        double prev = 0;
        for (int c : cells)
        {
            double d = 0;
            for (int axis = 0; axis < 3; ++axis)
                d += shift_l1(g, axis, c);
            d /= 3;
            double const h = c * spacing;
            est.table.push_back({h, r, d});
            if (d < prev)
                est.monotone = false;
            prev = d;
            if (d > 0)
            {
                log_h.push_back(std::log(h));
                log_r.push_back(std::log(r));
                log_d.push_back(std::log(d));
            }
        }
    }

    bool const several_r = std::any_of(r_set.begin(), r_set.end(),
                                       [&](double r) { return r != r_set.front(); });
    std::vector<std::vector<double>> columns{log_h};
    if (several_r)
        columns.push_back(log_r);
    LinearFit const fit = least_squares(columns, log_d);
    est.kappa = std::exp(fit.coef[0]);
    est.a_exp = fit.coef[1];
    est.r_exponent = several_r ? -fit.coef[2] : 0.0;
    est.fit_residual = fit.rms_residual;
    est.singular = est.r_exponent > options.singular_r_exponent;
    if (est.monotone)
        est.s_est = est.a_exp - alpha;
    return est;
}

}  // namespace boltz
