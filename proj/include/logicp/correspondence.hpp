#pragma once

#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace logicp {

struct Neighbor {
    std::size_t index = 0;
    double squared_distance = std::numeric_limits<double>::infinity();

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact nearest-neighbor index over a fixed model cloud.
///
/// Results match an exhaustive scan bit for bit: distances use
/// `squared_distance`, and among equidistant model points the lowest
/// index wins. Subtrees are skipped only when the splitting plane is
/// strictly farther than the current best.
class KdTree {
public:
    static constexpr std::size_t kDefaultLeafSize = 8;

    explicit KdTree(const PointCloud& model, std::size_t leaf_size = kDefaultLeafSize)
        : model_(model), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
        build();
    }

    const PointCloud& model() const { return model_; }
    std::size_t size() const { return model_.size(); }

    Neighbor nearest(const Point3& query) const {
        Neighbor best;
        search(0, query, best);
        return best;
    }

private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        int axis = -1;  ///< -1 for leaves
        double split = 0.0;
    };

    void build() {
        const auto n = model_.size();
        if (n > std::numeric_limits<std::uint32_t>::max())
            throw InvalidInput("KdTree: model cloud too large");
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::uint32_t{0});
        nodes_.reserve(2 * (n / leaf_size_) + 1);
        build_node(0, static_cast<std::uint32_t>(n));
        sorted_.reserve(n);
        for (auto i : order_) sorted_.push_back(model_[i]);
    }

    std::uint32_t build_node(std::uint32_t begin, std::uint32_t end) {
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back(Node{begin, end, 0, 0, -1, 0.0});
        if (end - begin <= leaf_size_) return id;

        Vec3 lo = model_[order_[begin]], hi = lo;
        for (auto i = begin; i < end; ++i) {
            const auto& p = model_[order_[i]];
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        const Vec3 spread = hi - lo;
        int axis = 0;
        if (spread.y > spread[axis]) axis = 1;
        if (spread.z > spread[static_cast<std::size_t>(axis)]) axis = 2;
        if (spread[static_cast<std::size_t>(axis)] == 0.0) return id;  // all points coincide

        const auto mid = begin + (end - begin) / 2;
        const auto ax = static_cast<std::size_t>(axis);
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) {
                             const double ca = model_[a][ax], cb = model_[b][ax];
                             return ca < cb || (ca == cb && a < b);
                         });
        const double split = model_[order_[mid]][ax];
        const auto left = build_node(begin, mid);
        const auto right = build_node(mid, end);
        auto& node = nodes_[id];
        node.axis = axis;
        node.split = split;
        node.left = left;
        node.right = right;
        return id;
    }

    void search(std::uint32_t id, const Point3& q, Neighbor& best) const {
        const Node& node = nodes_[id];
        if (node.axis < 0) {
            for (auto i = node.begin; i < node.end; ++i) {
                const double d = squared_distance(q, sorted_[i]);
                const std::size_t idx = order_[i];
                if (d < best.squared_distance || (d == best.squared_distance && idx < best.index)) {
                    best.squared_distance = d;
                    best.index = idx;
                }
            }
            return;
        }
        const double diff = q[static_cast<std::size_t>(node.axis)] - node.split;
        const auto near = diff < 0.0 ? node.left : node.right;
        const auto far = diff < 0.0 ? node.right : node.left;
        search(near, q, best);
        // `<=` keeps equidistant points on the far side reachable for the tie rule.
        if (diff * diff <= best.squared_distance) search(far, q, best);
    }

    PointCloud model_;
    std::size_t leaf_size_;
    std::vector<std::uint32_t> order_;
    std::vector<Point3> sorted_;
    std::vector<Node> nodes_;
};

inline KdTree build_index(const PointCloud& model) { return KdTree(model); }

inline Neighbor nearest_point(const KdTree& index, const Point3& p) { return index.nearest(p); }

struct Correspondence {
    std::size_t source = 0;  ///< index into the moving cloud
    std::size_t target = 0;  ///< index into the model cloud
    double squared_distance = 0.0;

    friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

/// One pair per moving point, in moving-point order. Targets may repeat.
using CorrespondenceSet = std::vector<Correspondence>;

inline void match_correspondences(const KdTree& index, std::span<const Point3> moving, CorrespondenceSet& out) {
    out.resize(moving.size());
    for (std::size_t i = 0; i < moving.size(); ++i) {
        const auto nb = index.nearest(moving[i]);
        out[i] = {i, nb.index, nb.squared_distance};
    }
}

inline CorrespondenceSet match_correspondences(const KdTree& index, const PointCloud& moving) {
    CorrespondenceSet out;
    match_correspondences(index, moving.points(), out);
    return out;
}

}  // namespace logicp
