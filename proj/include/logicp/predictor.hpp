#pragma once

#include <logicp/correspondence.hpp>
#include <logicp/errors.hpp>
#include <logicp/parallel.hpp>
#include <logicp/records.hpp>
#include <logicp/registration.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logicp {

struct PredictionOutcome {
    ProductBasket predicted;
    /// Set only by neighbor-based predictors.
    std::optional<std::string> neighbor_id;
    /// ICP mean squared error (mm^2) for the ICP predictor; standardized
    /// feature-space distance for the feature kNN.
    std::optional<double> distance;
};

namespace detail {

inline void check_uniform_baskets(std::span<const LogRecord> train) {
    if (train.empty()) throw InvalidInput("training set is empty");
    const auto p = train.front().basket.size();
    for (const auto& r : train)
        if (r.basket.size() != p) throw InvalidInput("training baskets have different lengths");
}

/// Lexicographic (distance, index) minimum, so any evaluation order agrees.
inline std::size_t argmin(std::span<const double> distances) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < distances.size(); ++i)
        if (distances[i] < distances[best]) best = i;
    return best;
}

}  // namespace detail

/// Rounded componentwise mean of the training baskets; the same basket
/// is predicted for every query.
inline ProductBasket mean_predict(std::span<const LogRecord> train) {
    detail::check_uniform_baskets(train);
    std::vector<const ProductBasket*> ptrs;
    ptrs.reserve(train.size());
    for (const auto& r : train) ptrs.push_back(&r.basket);
    return rounded_mean(ptrs);
}

/// Nearest training log under the ICP distance (query moving, training
/// scan fixed). One spatial index per training scan, built once.
class IcpNearestNeighbor {
public:
    explicit IcpNearestNeighbor(std::span<const LogRecord> train, unsigned jobs = 1) : train_(train) {
        detail::check_uniform_baskets(train);
        std::vector<std::optional<KdTree>> built(train.size());
        parallel_for(train.size(), jobs, [&](std::size_t i) { built[i].emplace(train[i].scan); });
        indices_.reserve(train.size());
        for (auto& b : built) indices_.push_back(std::move(*b));
    }

    std::size_t size() const { return train_.size(); }

    /// ICP distance from `query` to every training scan, in training order.
    std::vector<double> distances(const PointCloud& query, const IcpConfig& cfg, unsigned jobs = 1) const {
        std::vector<double> d(train_.size());
        parallel_for(train_.size(), jobs, [&](std::size_t i) { d[i] = icp_distance(query, indices_[i], cfg); });
        return d;
    }

    PredictionOutcome predict(const PointCloud& query, const IcpConfig& cfg, unsigned jobs = 1) const {
        return outcome(distances(query, cfg, jobs));
    }

    /// Batch prediction; the (query x training log) alignments are spread
    /// over `jobs` workers.
    std::vector<PredictionOutcome> predict_all(std::span<const PointCloud> queries, const IcpConfig& cfg,
                                               unsigned jobs = 1) const {
        const std::size_t n = train_.size();
        std::vector<double> d(queries.size() * n);
        parallel_for(d.size(), jobs, [&](std::size_t k) {
            d[k] = icp_distance(queries[k / n], indices_[k % n], cfg);
        });
        std::vector<PredictionOutcome> out;
        out.reserve(queries.size());
        for (std::size_t q = 0; q < queries.size(); ++q)
            out.push_back(outcome(std::span<const double>(d).subspan(q * n, n)));
        return out;
    }

private:
    PredictionOutcome outcome(std::span<const double> d) const {
        const auto best = detail::argmin(d);
        return {train_[best].basket, train_[best].id, d[best]};
    }

    std::span<const LogRecord> train_;
    std::vector<KdTree> indices_;
};

inline PredictionOutcome icp_nn_predict(std::span<const LogRecord> train, const PointCloud& query,
                                        const IcpConfig& cfg, unsigned jobs = 1) {
    return IcpNearestNeighbor(train, jobs).predict(query, cfg, jobs);
}

/// k nearest neighbors in z-score standardized feature space.
class FeatureKnn {
public:
    explicit FeatureKnn(std::span<const LogRecord> train) : train_(train) {
        detail::check_uniform_baskets(train);
        for (const auto& r : train)
            if (!r.features) throw InvalidInput("training log '" + r.id + "' has no features");
        const auto n = static_cast<double>(train.size());
        for (std::size_t f = 0; f < LogFeatures::kCount; ++f) {
            double mean = 0.0;
            for (const auto& r : train) mean += r.features->as_array()[f];
            mean /= n;
            double var = 0.0;
            for (const auto& r : train) {
                const double d = r.features->as_array()[f] - mean;
                var += d * d;
            }
            const double sd = std::sqrt(var / n);
            mean_[f] = mean;
            scale_[f] = sd > 0.0 ? sd : 1.0;  // constant feature: differences stay unscaled
        }
    }

    PredictionOutcome predict(const LogFeatures& query, std::size_t k) const {
        if (k < 1 || k > train_.size()) throw InvalidInput("k must be in [1, training size]");
        query.validate();
        const auto zq = standardize(query);
        std::vector<double> d(train_.size());
        for (std::size_t i = 0; i < train_.size(); ++i) {
            const auto zi = standardize(*train_[i].features);
            double s = 0.0;
            for (std::size_t f = 0; f < LogFeatures::kCount; ++f) s += (zq[f] - zi[f]) * (zq[f] - zi[f]);
            d[i] = std::sqrt(s);
        }
        std::vector<std::size_t> order(train_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        std::vector<const ProductBasket*> nearest;
        for (std::size_t i = 0; i < k; ++i) nearest.push_back(&train_[order[i]].basket);
        return {rounded_mean(nearest), train_[order[0]].id, d[order[0]]};
    }

private:
    std::array<double, LogFeatures::kCount> standardize(const LogFeatures& f) const {
        auto a = f.as_array();
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - mean_[i]) / scale_[i];
        return a;
    }

    std::span<const LogRecord> train_;
    std::array<double, LogFeatures::kCount> mean_{};
    std::array<double, LogFeatures::kCount> scale_{};
};

inline PredictionOutcome knn_feature_predict(std::span<const LogRecord> train, const LogFeatures& query,
                                             std::size_t k) {
    return FeatureKnn(train).predict(query, k);
}

}  // namespace logicp
