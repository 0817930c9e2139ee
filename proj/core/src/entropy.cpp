#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

#include "boltz/collision.hpp"
#include "boltz/kdtree.hpp"
#include "boltz/measure.hpp"
#include "boltz/rng.hpp"

namespace boltz
{
namespace
{
// Jitter scale relative to the cloud's RMS radius
constexpr double kJitter = 1e-9;

std::size_t jitter_duplicates(std::vector<Vec3>& pts, std::uint64_t seed)
{
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto const lex = [&](std::size_t a, std::size_t b) {
        Vec3 const& p = pts[a];
        Vec3 const& q = pts[b];
        if (p.x != q.x)
            return p.x < q.x;
        if (p.y != q.y)
            return p.y < q.y;
        return p.z < q.z;
    };
    std::sort(order.begin(), order.end(), lex);

    Vec3 mu;
    for (Vec3 const& p : pts)
        mu += p;
    mu *= 1.0 / static_cast<double>(pts.size());
    double spread = 0;
    for (Vec3 const& p : pts)
        spread += norm_sq(p - mu);
    spread = std::sqrt(spread / static_cast<double>(pts.size()));
    if (spread == 0)
        spread = 1;

    CounterStream rng(seed, 0x117e, 0);
    std::size_t count = 0;
    for (std::size_t i = 1; i < order.size(); ++i)
    {
        if (pts[order[i]] == pts[order[i - 1]])
        {
            ++count;
            pts[order[i]] += kJitter * spread * Vec3{rng.normal(), rng.normal(), rng.normal()};
        }
    }
    return count;
}

}  // namespace

EntropyEstimate entropy_knn(EmpiricalMeasure const& m, int k_nn, std::uint64_t seed)
{
    if (k_nn < 1)
        throw std::invalid_argument("entropy_knn: k_nn must be at least 1");
    EntropyEstimate est;
    EmpiricalMeasure const unweighted = m.uniform_weights() ? m : m.resample_uniform(seed);
    est.resampled = !m.uniform_weights();
    std::vector<Vec3> pts(unweighted.samples().begin(), unweighted.samples().end());
    auto const k = static_cast<std::size_t>(k_nn);
    if (pts.size() <= k)
        throw std::invalid_argument("entropy_knn: need more samples than k_nn");
    est.jittered = jitter_duplicates(pts, seed);

    KdTree const tree(pts);
    double sum_log = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        auto const nn = tree.nearest(pts[i], k, i);
        sum_log += 0.5 * std::log(nn.back().dist_sq);
    }
    double const n = static_cast<double>(pts.size());
    double const log_ball = std::log(4.0 * pi / 3.0);
    est.entropy = boost::math::digamma(n) - boost::math::digamma(static_cast<double>(k_nn))
                  + log_ball + 3.0 * sum_log / n;
    return est;
}

}  // namespace boltz
