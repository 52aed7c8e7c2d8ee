#pragma once

#include <logicp/eigen.hpp>
#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>
#include <logicp/records.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace logicp {

namespace detail {

struct Planar {
    double u = 0.0;
    double v = 0.0;
};

/// Area of the convex hull (Andrew's monotone chain). 0 when degenerate.
inline double convex_hull_area(std::vector<Planar> pts) {
    if (pts.size() < 3) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const Planar& a, const Planar& b) {
        return a.u < b.u || (a.u == b.u && a.v < b.v);
    });
    auto turn = [](const Planar& o, const Planar& a, const Planar& b) {
        return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
    };
    std::vector<Planar> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        twice += a.u * b.v - b.u * a.v;
    }
    return std::abs(twice) / 2.0;
}

}  // namespace detail

/// Shape features measured along the principal axis of the scan.
///
/// Length is the extent along the axis. End diameters are twice the
/// largest radial distance within the 5 %-of-length slab at each end.
/// Volume integrates 100 axial slices; each slice area is the convex hull
/// of its points projected on the cross-section plane, or a disc of the
/// slice's largest radius when the hull is degenerate.
inline LogFeatures extract_features(const PointCloud& scan) {
    constexpr std::size_t kMinPoints = 10;
    constexpr int kSlices = 100;
    constexpr double kEndSlab = 0.05;
    if (scan.size() < kMinPoints) throw InvalidInput("feature extraction needs at least 10 points");

    const Vec3 c = centroid(scan);
    Mat3 cov;
    for (const auto& p : scan) {
        const Vec3 d = p - c;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t k = 0; k < 3; ++k) cov(r, k) += d[r] * d[k];
    }
    const auto eig = jacobi_eigen(cov);
    std::size_t major = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (eig.values[i] > eig.values[major]) major = i;
    const Vec3 axis{eig.vectors(0, major), eig.vectors(1, major), eig.vectors(2, major)};
    const Vec3 helper = std::abs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 u = cross(axis, helper);
    u *= 1.0 / norm(u);
    const Vec3 v = cross(axis, u);

    struct Projected {
        double t;
        detail::Planar plane;
        double radius;
    };
    std::vector<Projected> proj;
    proj.reserve(scan.size());
    double t_min = std::numeric_limits<double>::infinity(), t_max = -t_min;
    for (const auto& p : scan) {
        const Vec3 d = p - c;
        const double t = dot(d, axis);
        const double a = dot(d, u), b = dot(d, v);
        proj.push_back({t, {a, b}, std::hypot(a, b)});
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    const double length = t_max - t_min;
    if (!(length > 0.0)) throw InvalidInput("scan has no extent along its principal axis");

    double r_low = 0.0, r_high = 0.0;
    const double slab = kEndSlab * length;
    for (const auto& p : proj) {
        if (p.t <= t_min + slab) r_low = std::max(r_low, p.radius);
        if (p.t >= t_max - slab) r_high = std::max(r_high, p.radius);
    }

    const double thickness = length / kSlices;
    std::vector<std::vector<detail::Planar>> slices(kSlices);
    std::vector<double> slice_radius(kSlices, 0.0);
    for (const auto& p : proj) {
        auto s = static_cast<int>((p.t - t_min) / thickness);
        s = std::clamp(s, 0, kSlices - 1);
        slices[static_cast<std::size_t>(s)].push_back(p.plane);
        slice_radius[static_cast<std::size_t>(s)] = std::max(slice_radius[static_cast<std::size_t>(s)], p.radius);
    }
    double volume = 0.0;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        double area = detail::convex_hull_area(std::move(slices[s]));
        if (area <= 0.0) area = std::numbers::pi * slice_radius[s] * slice_radius[s];
        volume += area * thickness;
    }

    LogFeatures f;
    f.volume = volume;
    f.length = length;
    f.wide_end_diameter = 2.0 * std::max(r_low, r_high);
    f.narrow_end_diameter = 2.0 * std::min(r_low, r_high);
    f.taper = (f.wide_end_diameter - f.narrow_end_diameter) / length;
    return f;
}

}  // namespace logicp
