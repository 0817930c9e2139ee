#include "boltz/kdtree.hpp"

#include <algorithm>
#include <limits>

namespace boltz
{
namespace
{
constexpr std::size_t kLeafSize = 8;

bool heap_less(KdTree::Neighbor const& a, KdTree::Neighbor const& b)
{
    return a.dist_sq < b.dist_sq;
}

}  // namespace

KdTree::KdTree(std::span<Vec3 const> points)
    : points_(points.begin(), points.end()), order_(points.size())
{
    for (std::size_t i = 0; i < order_.size(); ++i)
        order_[i] = i;
    if (!points_.empty())
        build(0, points_.size());
}

int KdTree::build(std::size_t begin, std::size_t end)
{
    auto const id = static_cast<int>(nodes_.size());
    nodes_.push_back({begin, end, 0, 0});
    if (end - begin <= kLeafSize)
        return id;

    Vec3 lo = points_[order_[begin]];
    Vec3 hi = lo;
    for (std::size_t i = begin; i < end; ++i)
    {
        Vec3 const& p = points_[order_[i]];
        for (int a = 0; a < 3; ++a)
        {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (hi[a] - lo[a] > hi[axis] - lo[axis])
            axis = a;
    if (hi[axis] == lo[axis])
        return id;

    std::size_t const mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::size_t a, std::size_t b) {
                         return points_[a][axis] < points_[b][axis];
                     });
    double const split = points_[order_[mid]][axis];
    int const left = build(begin, mid);
    int const right = build(mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree::search(int node_id, Vec3 const& q, std::size_t k, std::size_t skip,
                    std::vector<Neighbor>& heap) const
{
    Node const& node = nodes_[node_id];
    if (node.left < 0)
    {
        for (std::size_t i = node.begin; i < node.end; ++i)
        {
            std::size_t const idx = order_[i];
            if (idx == skip)
                continue;
            double const d = norm_sq(points_[idx] - q);
            if (heap.size() < k)
            {
                heap.push_back({idx, d});
                std::push_heap(heap.begin(), heap.end(), heap_less);
            }
            else if (d < heap.front().dist_sq)
            {
                std::pop_heap(heap.begin(), heap.end(), heap_less);
                heap.back() = {idx, d};
                std::push_heap(heap.begin(), heap.end(), heap_less);
            }
        }
        return;
    }
    double const diff = q[node.axis] - node.split;
    int const near = diff < 0 ? node.left : node.right;
    int const far = diff < 0 ? node.right : node.left;
    search(near, q, k, skip, heap);
    if (heap.size() < k || diff * diff < heap.front().dist_sq)
        search(far, q, k, skip, heap);
}

std::vector<KdTree::Neighbor>
KdTree::nearest(Vec3 const& q, std::size_t k, std::size_t skip) const
{
    std::vector<Neighbor> heap;
    if (nodes_.empty() || k == 0)
        return heap;
    heap.reserve(k + 1);
    search(0, q, k, skip, heap);
    std::sort_heap(heap.begin(), heap.end(), heap_less);
    return heap;
}

double KdTree::nearest_dist_sq(Vec3 const& q) const
{
    auto const nn = nearest(q, 1);
    return nn.empty() ? std::numeric_limits<double>::infinity() : nn.front().dist_sq;
}

}  // namespace boltz
