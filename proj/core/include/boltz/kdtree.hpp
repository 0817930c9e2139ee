#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vec3.hpp"

namespace boltz
{
//! Static 3D kd-tree over a point set (indices refer to the input order)
class KdTree
{
  public:
    explicit KdTree(std::span<Vec3 const> points);

    struct Neighbor
    {
        std::size_t index;
        double dist_sq;
    };

    //! k nearest points to q, nearest first; \c skip excludes one index
    std::vector<Neighbor> nearest(Vec3 const& q, std::size_t k, std::size_t skip = npos) const;

    //! Squared distance to the nearest point
    double nearest_dist_sq(Vec3 const& q) const;

    std::size_t size() const { return points_.size(); }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  private:
    struct Node
    {
        std::size_t begin;
        std::size_t end;
        int axis;
        double split;
        int left{-1};
        int right{-1};
    };

    std::vector<Vec3> points_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;

    int build(std::size_t begin, std::size_t end);
    void search(int node, Vec3 const& q, std::size_t k, std::size_t skip,
                std::vector<Neighbor>& heap) const;
};

}  // namespace boltz
