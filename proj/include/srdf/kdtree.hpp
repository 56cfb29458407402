#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "srdf/errors.hpp"

namespace srdf {

/* Exact nearest-neighbour search over a fixed point set. Median-split
 * kd-tree; distances are computed with the same expression a brute-force
 * scan would use, so results match exhaustive search exactly (the metric
 * tests assert this bitwise). */
class KdTree3 {
public:
    struct Result {
        int index = -1;
        double sq_dist = std::numeric_limits<double>::infinity();
    };

    explicit KdTree3(std::vector<Eigen::Vector3d> points)
        : points_(std::move(points))
    {
        if (points_.empty())
            throw ConfigError("kdtree: empty point set");
        order_.resize(points_.size());
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.reserve(2 * points_.size());
        root_ = build(0, static_cast<int>(points_.size()));
    }

    std::size_t size() const { return points_.size(); }
    const Eigen::Vector3d& point(int i) const { return points_[i]; }

    Result nearest(const Eigen::Vector3d& query) const
    {
        Result best;
        search(root_, query, &best);
        return best;
    }

private:
    struct Node {
        double split = 0.0;
        int axis = -1;          // -1 marks a leaf
        int left = -1;
        int right = -1;
        int begin = 0;          // leaf payload range in order_
        int end = 0;
    };

    static constexpr int kLeafSize = 16;

    int build(int begin, int end)
    {
        Node node;
        if (end - begin <= kLeafSize) {
            node.begin = begin;
            node.end = end;
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }

        Eigen::Vector3d lo = points_[order_[begin]];
        Eigen::Vector3d hi = lo;
        for (int i = begin + 1; i < end; ++i) {
            lo = lo.cwiseMin(points_[order_[i]]);
            hi = hi.cwiseMax(points_[order_[i]]);
        }
        int axis = 0;
        (hi - lo).maxCoeff(&axis);

        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid,
                         order_.begin() + end, [&](int a, int b) {
                             return points_[a][axis] < points_[b][axis];
                         });
        node.axis = axis;
        node.split = points_[order_[mid]][axis];

        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[self].left = left;
        nodes_[self].right = right;
        return self;
    }

    void search(int node_index, const Eigen::Vector3d& q, Result* best) const
    {
        const Node& node = nodes_[node_index];
        if (node.axis < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int p = order_[i];
                const double d2 = (points_[p] - q).squaredNorm();
                if (d2 < best->sq_dist) {
                    best->sq_dist = d2;
                    best->index = p;
                }
            }
            return;
        }
        const double delta = q[node.axis] - node.split;
        const int near = delta < 0.0 ? node.left : node.right;
        const int far = delta < 0.0 ? node.right : node.left;
        search(near, q, best);
        if (delta * delta < best->sq_dist)
            search(far, q, best);
    }

    std::vector<Eigen::Vector3d> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace srdf
