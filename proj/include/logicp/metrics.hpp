#pragma once

#include <logicp/errors.hpp>
#include <logicp/records.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace logicp {

/// Real basket y and predicted basket y_hat for one log.
struct ScoredPair {
    ProductBasket real;
    ProductBasket predicted;
};

struct MetricConfig {
    double epsilon = 1e-6;
    bool filter_zero_pairs = true;

    void validate() const {
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
    }
};

/// The six Table-style scores; every value lies in [0, 1].
struct ScoreReport {
    double s_z = 0.0;
    double one_minus_dH = 0.0;
    double one_minus_dHplus = 0.0;
    double s_pre = 0.0;
    double s_pro = 0.0;
    double s_pro_x_pre = 0.0;
    std::size_t n_evaluated = 0;

    friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

namespace detail {

inline void check_lengths(const ScoredPair& pair) {
    if (pair.real.size() != pair.predicted.size())
        throw InvalidInput("real and predicted baskets have different lengths");
}

inline double as_real(Quantity q) { return static_cast<double>(q); }

}  // namespace detail

/// Drops products where both real and predicted quantities are 0.
inline ScoredPair filter_pairs(const ScoredPair& pair) {
    detail::check_lengths(pair);
    std::vector<Quantity> y, y_hat;
    for (std::size_t j = 0; j < pair.real.size(); ++j) {
        if (pair.real[j] != 0 || pair.predicted[j] != 0) {
            y.push_back(pair.real[j]);
            y_hat.push_back(pair.predicted[j]);
        }
    }
    return {ProductBasket(std::move(y)), ProductBasket(std::move(y_hat))};
}

// The per-pair scores below take the pair as given (filter first if the
// configuration asks for it). An empty pair is a perfect prediction.

inline int zero_one(const ScoredPair& pair) {
    detail::check_lengths(pair);
    return pair.real == pair.predicted ? 1 : 0;
}

inline double hamming(const ScoredPair& pair) {
    detail::check_lengths(pair);
    if (pair.real.size() == 0) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t j = 0; j < pair.real.size(); ++j) wrong += pair.real[j] != pair.predicted[j] ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(pair.real.size());
}

inline double augmented_hamming(const ScoredPair& pair) {
    detail::check_lengths(pair);
    if (pair.real.size() == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < pair.real.size(); ++j) {
        const Quantity y = pair.real[j], y_hat = pair.predicted[j];
        if (y == y_hat) continue;
        const double f = detail::as_real(std::min(y, y_hat)) / detail::as_real(std::max(y, y_hat));
        sum += 1.0 - f;
    }
    return sum / static_cast<double>(pair.real.size());
}

namespace detail {

/// (1/p) sum min(1, max(num_j, eps) / max(den_j, eps)).
inline double bounded_ratio(std::span<const Quantity> num, std::span<const Quantity> den, double eps) {
    if (num.empty()) return 1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < num.size(); ++j)
        sum += std::min(1.0, std::max(as_real(num[j]), eps) / std::max(as_real(den[j]), eps));
    return sum / static_cast<double>(num.size());
}

}  // namespace detail

/// Bounded ratio of predicted over real quantities.
inline double prediction_score(const ScoredPair& pair, const MetricConfig& cfg = {}) {
    detail::check_lengths(pair);
    cfg.validate();
    return detail::bounded_ratio(pair.predicted.quantities(), pair.real.quantities(), cfg.epsilon);
}

/// Bounded ratio of real over predicted quantities.
inline double production_score(const ScoredPair& pair, const MetricConfig& cfg = {}) {
    detail::check_lengths(pair);
    cfg.validate();
    return detail::bounded_ratio(pair.real.quantities(), pair.predicted.quantities(), cfg.epsilon);
}

inline double area_score(const ScoredPair& pair, const MetricConfig& cfg = {}) {
    return prediction_score(pair, cfg) * production_score(pair, cfg);
}

/// All six scores of one pair, filtering first when configured.
inline ScoreReport score_pair(const ScoredPair& pair, const MetricConfig& cfg = {}) {
    cfg.validate();
    const ScoredPair p = cfg.filter_zero_pairs ? filter_pairs(pair) : pair;
    ScoreReport r;
    r.s_z = zero_one(p);
    r.one_minus_dH = 1.0 - hamming(p);
    r.one_minus_dHplus = 1.0 - augmented_hamming(p);
    r.s_pre = prediction_score(p, cfg);
    r.s_pro = production_score(p, cfg);
    r.s_pro_x_pre = r.s_pre * r.s_pro;
    r.n_evaluated = 1;
    return r;
}

/// Per-pair scores averaged over the pairs, summed in input order.
inline ScoreReport evaluate(std::span<const ScoredPair> pairs, const MetricConfig& cfg = {}) {
    if (pairs.empty()) throw InvalidInput("evaluate: no prediction pairs");
    const auto p = pairs.front().real.size();
    ScoreReport sum;
    for (const auto& pair : pairs) {
        if (pair.real.size() != p || pair.predicted.size() != p)
            throw InvalidInput("evaluate: baskets have different lengths");
        const auto r = score_pair(pair, cfg);
        sum.s_z += r.s_z;
        sum.one_minus_dH += r.one_minus_dH;
        sum.one_minus_dHplus += r.one_minus_dHplus;
        sum.s_pre += r.s_pre;
        sum.s_pro += r.s_pro;
        sum.s_pro_x_pre += r.s_pro_x_pre;
    }
    const double n = static_cast<double>(pairs.size());
    sum.s_z /= n;
    sum.one_minus_dH /= n;
    sum.one_minus_dHplus /= n;
    sum.s_pre /= n;
    sum.s_pro /= n;
    sum.s_pro_x_pre /= n;
    sum.n_evaluated = pairs.size();
    return sum;
}

/// Arithmetic mean of several reports (e.g. over repeated runs).
inline ScoreReport mean_report(std::span<const ScoreReport> reports) {
    if (reports.empty()) throw InvalidInput("mean of zero reports");
    ScoreReport m;
    for (const auto& r : reports) {
        m.s_z += r.s_z;
        m.one_minus_dH += r.one_minus_dH;
        m.one_minus_dHplus += r.one_minus_dHplus;
        m.s_pre += r.s_pre;
        m.s_pro += r.s_pro;
        m.s_pro_x_pre += r.s_pro_x_pre;
        m.n_evaluated += r.n_evaluated;
    }
    const double n = static_cast<double>(reports.size());
    m.s_z /= n;
    m.one_minus_dH /= n;
    m.one_minus_dHplus /= n;
    m.s_pre /= n;
    m.s_pro /= n;
    m.s_pro_x_pre /= n;
    return m;
}

}  // namespace logicp
