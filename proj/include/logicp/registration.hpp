#pragma once

#include <logicp/correspondence.hpp>
#include <logicp/eigen.hpp>
#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logicp {

struct RegistrationResult {
    RigidTransform transform;
    double mse = 0.0;  ///< mm^2, mean squared residual over the pairs at `transform`
};

namespace detail {

inline void check_pairs(std::span<const Point3> moving, std::span<const Point3> model,
                        const CorrespondenceSet& pairs) {
    if (pairs.empty()) throw InvalidInput("registration needs at least one correspondence");
    for (const auto& c : pairs)
        if (c.source >= moving.size() || c.target >= model.size())
            throw InvalidInput("correspondence index out of range");
}

}  // namespace detail

/// Cross-covariance of the paired points, (1/n) sum (p - mu_p)(x - mu_x)^T.
/// mu_x averages matched model points with multiplicity.
inline Mat3 cross_covariance(std::span<const Point3> moving, std::span<const Point3> model,
                             const CorrespondenceSet& pairs) {
    detail::check_pairs(moving, model, pairs);
    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    Vec3 mu_p, mu_x;
    for (const auto& c : pairs) {
        mu_p += moving[c.source];
        mu_x += model[c.target];
    }
    mu_p *= inv_n;
    mu_x *= inv_n;

    Mat3 sigma;
    for (const auto& c : pairs) {
        const Vec3 p = moving[c.source] - mu_p;
        const Vec3 x = model[c.target] - mu_x;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t k = 0; k < 3; ++k) sigma(r, k) += p[r] * x[k];
    }
    for (double& v : sigma.data) v *= inv_n;
    return sigma;
}

inline Mat3 cross_covariance(const PointCloud& moving, const PointCloud& model, const CorrespondenceSet& pairs) {
    return cross_covariance(moving.points(), model.points(), pairs);
}

/// Symmetric 4x4 whose top eigenvector is the optimal rotation quaternion.
///
///     [ tr(S)   D^T                ]
///     [ D       S + S^T - tr(S) I3 ]
///
/// with D = (A23, A31, A12) and A = S - S^T.
inline Mat4 q_matrix(const Mat3& sigma) {
    const double tr = sigma.trace();
    const Vec3 delta{sigma(1, 2) - sigma(2, 1), sigma(2, 0) - sigma(0, 2), sigma(0, 1) - sigma(1, 0)};
    Mat4 q;
    q(0, 0) = tr;
    for (std::size_t i = 0; i < 3; ++i) {
        q(0, i + 1) = delta[i];
        q(i + 1, 0) = delta[i];
        for (std::size_t j = 0; j < 3; ++j)
            q(i + 1, j + 1) = sigma(i, j) + sigma(j, i) - (i == j ? tr : 0.0);
    }
    return q;
}

/// (1/n) sum |x - (R p + T)|^2, summed in pair order.
inline double mse(std::span<const Point3> moving, std::span<const Point3> model, const CorrespondenceSet& pairs,
                  const RigidTransform& t) {
    detail::check_pairs(moving, model, pairs);
    double sum = 0.0;
    for (const auto& c : pairs) sum += squared_distance(model[c.target], t.apply(moving[c.source]));
    return sum / static_cast<double>(pairs.size());
}

inline double mse(const PointCloud& moving, const PointCloud& model, const CorrespondenceSet& pairs,
                  const RigidTransform& t) {
    return mse(moving.points(), model.points(), pairs, t);
}

/// Closed-form least-squares rigid transform for fixed correspondences.
/// Degenerate inputs (one point, collinear points) still return a
/// maximizing eigenvector; the rotation is then not unique.
inline RegistrationResult compute_registration(std::span<const Point3> moving, std::span<const Point3> model,
                                               const CorrespondenceSet& pairs) {
    const Mat3 sigma = cross_covariance(moving, model, pairs);
    const auto top = max_eigenvector(q_matrix(sigma));
    const auto rotation = UnitQuaternion::from_unnormalized(top.vector[0], top.vector[1], top.vector[2], top.vector[3]);

    const double inv_n = 1.0 / static_cast<double>(pairs.size());
    Vec3 mu_p, mu_x;
    for (const auto& c : pairs) {
        mu_p += moving[c.source];
        mu_x += model[c.target];
    }
    mu_p *= inv_n;
    mu_x *= inv_n;

    const Mat3 r = quaternion_to_rotation(rotation);
    RegistrationResult out{RigidTransform(rotation, mu_x - r * mu_p), 0.0};
    out.mse = mse(moving, model, pairs, out.transform);
    return out;
}

inline RegistrationResult compute_registration(const PointCloud& moving, const PointCloud& model,
                                               const CorrespondenceSet& pairs) {
    return compute_registration(moving.points(), model.points(), pairs);
}

struct IcpConfig {
    double tau = 1e-8;             ///< mm^2; stop when d_{k-1} - d_k < tau
    int max_iterations = 50;
    RigidTransform initial_transform;
    bool pre_align = false;        ///< shift moving so the centroids coincide before iterating
    std::size_t stride = 1;        ///< use every stride-th moving point

    void validate() const {
        if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidInput("tau must be a positive finite number");
        if (max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
        if (stride < 1) throw InvalidInput("stride must be at least 1");
    }
};

enum class TerminalReason { converged, max_iterations };

inline std::string_view to_string(TerminalReason r) {
    return r == TerminalReason::converged ? "converged" : "max_iterations";
}

struct IcpIteration {
    int iteration = 0;
    double mse = 0.0;
    RigidTransform transform;
};

struct IcpTrace {
    std::vector<IcpIteration> iterations;
    TerminalReason terminal_reason = TerminalReason::max_iterations;
};

namespace detail {

inline std::vector<Point3> subsample(const PointCloud& cloud, std::size_t stride) {
    std::vector<Point3> out;
    out.reserve((cloud.size() + stride - 1) / stride);
    for (std::size_t i = 0; i < cloud.size(); i += stride) out.push_back(cloud[i]);
    return out;
}

}  // namespace detail

/// Point-to-point ICP of `moving` onto the indexed model.
///
/// Each iteration matches the current moving cloud P_k to the model, then
/// registers the ORIGINAL moving cloud P_0 against those matches; P_{k+1}
/// is P_0 under the new transform. The initial transform only seeds the
/// first matching.
inline std::pair<RegistrationResult, IcpTrace> icp_align(const PointCloud& moving, const KdTree& model_index,
                                                         const IcpConfig& cfg) {
    cfg.validate();
    const std::vector<Point3> original = detail::subsample(moving, cfg.stride);
    const auto model = model_index.model().points();

    RigidTransform start = cfg.initial_transform;
    if (cfg.pre_align) {
        Vec3 moved;
        for (const auto& p : original) moved += start.apply(p);
        moved *= 1.0 / static_cast<double>(original.size());
        start = compose(RigidTransform::translation_only(centroid(model) - moved), start);
    }

    std::vector<Point3> current(original.size());
    for (std::size_t i = 0; i < original.size(); ++i) current[i] = start.apply(original[i]);

    CorrespondenceSet pairs;
    IcpTrace trace;
    trace.iterations.reserve(static_cast<std::size_t>(cfg.max_iterations));
    RegistrationResult result;
    for (int k = 0; k < cfg.max_iterations; ++k) {
        match_correspondences(model_index, current, pairs);
        result = compute_registration(original, model, pairs);
        trace.iterations.push_back({k, result.mse, result.transform});
        for (std::size_t i = 0; i < original.size(); ++i) current[i] = result.transform.apply(original[i]);
        if (k > 0 && trace.iterations[static_cast<std::size_t>(k) - 1].mse - result.mse < cfg.tau) {
            trace.terminal_reason = TerminalReason::converged;
            break;
        }
    }
    return {result, std::move(trace)};
}

inline std::pair<RegistrationResult, IcpTrace> icp_align(const PointCloud& moving, const PointCloud& model,
                                                         const IcpConfig& cfg) {
    return icp_align(moving, KdTree(model), cfg);
}

/// Converged mean squared error of `a` aligned onto `b`. Directional.
inline double icp_distance(const PointCloud& a, const KdTree& b_index, const IcpConfig& cfg) {
    return icp_align(a, b_index, cfg).first.mse;
}

inline double icp_distance(const PointCloud& a, const PointCloud& b, const IcpConfig& cfg) {
    return icp_align(a, b, cfg).first.mse;
}

}  // namespace logicp
