#include "boltz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "boltz/rng.hpp"

namespace boltz
{
namespace
{
constexpr double kKernelCut = 5.0;

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<Vec3> samples)
    : samples_(std::move(samples))
{
    if (samples_.empty())
        throw std::invalid_argument("empirical measure needs at least one sample");
    weights_.assign(samples_.size(), 1.0 / static_cast<double>(samples_.size()));
}

EmpiricalMeasure::EmpiricalMeasure(std::vector<Vec3> samples, std::vector<double> weights)
    : samples_(std::move(samples)), weights_(std::move(weights)), uniform_(false)
{
    if (samples_.empty())
        throw std::invalid_argument("empirical measure needs at least one sample");
    if (weights_.size() != samples_.size())
        throw std::invalid_argument("empirical measure: weight count differs from sample count");
    double total = 0;
    for (double w : weights_)
    {
        if (!(w >= 0) || !std::isfinite(w))
            throw std::invalid_argument("empirical measure: weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0))
        throw std::invalid_argument("empirical measure: weights sum to zero");
    for (double& w : weights_)
        w /= total;
    uniform_ = std::all_of(weights_.begin(), weights_.end(),
                           [&](double w) { return w == weights_.front(); });
}

Vec3 EmpiricalMeasure::mean() const
{
    Vec3 out;
    for (std::size_t i = 0; i < samples_.size(); ++i)
        out += weights_[i] * samples_[i];
    return out;
}

EmpiricalMeasure EmpiricalMeasure::resample_uniform(std::uint64_t seed) const
{
    if (uniform_)
        return EmpiricalMeasure(samples_);
    std::size_t const n = samples_.size();
    CounterStream rng(seed, 0x5e5a, 0);
    double const step = 1.0 / static_cast<double>(n);
    double pos = rng.uniform() * step;
    double cum = 0;
    std::vector<Vec3> out;
    out.reserve(n);
    std::size_t i = 0;
    for (std::size_t draw = 0; draw < n; ++draw, pos += step)
    {
        while (i + 1 < n && cum + weights_[i] < pos)
            cum += weights_[i++];
        out.push_back(samples_[i]);
    }
    return EmpiricalMeasure(std::move(out));
}

double moment(EmpiricalMeasure const& m, double p)
{
    if (!(p >= 0))
        throw std::domain_error("moment: order must be nonnegative");
    auto const s = m.samples();
    auto const w = m.weights();
    double out = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        out += w[i] * (p == 0 ? 1.0 : std::pow(norm(s[i]), p));
    return out;
}

//---------------------------------------------------------------------------//
GridSpec GridSpec::cube(double lo, double hi, int n)
{
    if (!(hi > lo) || n < 1)
        throw std::invalid_argument("GridSpec::cube: need hi > lo and n >= 1");
    GridSpec g;
    g.spacing = (hi - lo) / n;
    g.origin = Vec3{lo, lo, lo} + Vec3{g.spacing / 2, g.spacing / 2, g.spacing / 2};
    g.counts = {n, n, n};
    return g;
}

GridSpec GridSpec::covering(EmpiricalMeasure const& m,
                            double spacing,
                            double padding,
                            double mass_fraction)
{
    if (!(spacing > 0))
        throw std::invalid_argument("GridSpec::covering: spacing must be positive");
    auto const s = m.samples();
    std::size_t const n = s.size();
    // Per-axis quantiles with the excluded mass split over six tails
    double const tail = (1 - mass_fraction) / 6;
    GridSpec g;
    g.spacing = spacing;
    std::vector<double> coord(n);
    for (int a = 0; a < 3; ++a)
    {
        for (std::size_t i = 0; i < n; ++i)
            coord[i] = s[i][a];
        std::sort(coord.begin(), coord.end());
        auto const lo_idx = static_cast<std::size_t>(std::floor(tail * static_cast<double>(n - 1)));
        auto const hi_idx = static_cast<std::size_t>(std::ceil((1 - tail) * static_cast<double>(n - 1)));
        double const lo = coord[lo_idx] - padding;
        double const hi = coord[hi_idx] + padding;
        int const count = std::max(1, static_cast<int>(std::ceil((hi - lo) / spacing)) + 1);
        double const center = (lo + hi) / 2;
        g.origin[a] = center - spacing * (count - 1) / 2.0;
        g.counts[a] = count;
    }
    return g;
}

double GridDensity::total_mass() const
{
    double const sum = std::accumulate(values.begin(), values.end(), 0.0);
    return sum * grid.cell_volume();
}

double silverman_bandwidth(EmpiricalMeasure const& m)
{
    Vec3 const mu = m.mean();
    auto const s = m.samples();
    auto const w = m.weights();
    double var = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        var += w[i] * norm_sq(s[i] - mu);
    double const sigma = std::sqrt(var / 3);
    double const n = static_cast<double>(s.size());
    return sigma * std::pow(4.0 / 5.0, 1.0 / 7.0) * std::pow(n, -1.0 / 7.0);
}

GridDensity kde_density(EmpiricalMeasure const& m, double bandwidth, GridSpec const& grid)
{
    if (!(bandwidth > 0))
        throw std::invalid_argument("kde_density: bandwidth must be positive");
    GridDensity out;
    out.grid = grid;
    out.values.assign(grid.size(), 0);
    auto const s = m.samples();
    auto const w = m.weights();
    double const h = grid.spacing;
    int const reach = static_cast<int>(std::ceil(kKernelCut * bandwidth / h)) + 1;

    double captured = 0;
    std::array<std::vector<double>, 3> kern;
    std::array<int, 3> first{};
    for (std::size_t p = 0; p < s.size(); ++p)
    {
        double axis_in = 1;
        for (int a = 0; a < 3; ++a)
        {
            double const rel = (s[p][a] - grid.origin[a]) / h;
            int const nearest = static_cast<int>(std::lround(rel));
            first[a] = nearest - reach;
            kern[a].assign(2 * reach + 1, 0);
            double total = 0;
            for (int c = 0; c <= 2 * reach; ++c)
            {
                double const d = (first[a] + c - rel) * h / bandwidth;
                kern[a][c] = std::exp(-0.5 * d * d);
                total += kern[a][c];
            }
            if (total == 0)
            {
                kern[a][reach] = 1;
                total = 1;
            }
            double inside = 0;
            for (int c = 0; c <= 2 * reach; ++c)
            {
                kern[a][c] /= total;
                int const idx = first[a] + c;
                if (idx >= 0 && idx < grid.counts[a])
                    inside += kern[a][c];
            }
            axis_in *= inside;
        }
        captured += w[p] * axis_in;
        double const scale = w[p] / grid.cell_volume();
        for (int cx = 0; cx <= 2 * reach; ++cx)
        {
            int const ix = first[0] + cx;
            if (ix < 0 || ix >= grid.counts[0] || kern[0][cx] == 0)
                continue;
            for (int cy = 0; cy <= 2 * reach; ++cy)
            {
                int const iy = first[1] + cy;
                if (iy < 0 || iy >= grid.counts[1] || kern[1][cy] == 0)
                    continue;
                double const wxy = scale * kern[0][cx] * kern[1][cy];
                std::size_t const row = grid.index(ix, iy, 0);
                for (int cz = 0; cz <= 2 * reach; ++cz)
                {
                    int const iz = first[2] + cz;
                    if (iz < 0 || iz >= grid.counts[2])
                        continue;
                    out.values[row + iz] += wxy * kern[2][cz];
                }
            }
        }
    }
    out.coverage_warning = captured < 0.999;
    return out;
}

}  // namespace boltz
