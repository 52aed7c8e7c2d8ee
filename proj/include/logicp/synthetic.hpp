#pragma once

#include <logicp/dataset.hpp>
#include <logicp/geometry.hpp>
#include <logicp/random.hpp>
#include <logicp/records.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <string>
#include <vector>

/// Seeded generators for test clouds and log-like datasets.
namespace logicp::synth {

inline PointCloud random_cloud_in_box(Rng& rng, std::size_t n, const Vec3& lo, const Vec3& hi) {
    std::vector<Point3> pts(n);
    for (auto& p : pts) p = {rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
    return PointCloud(std::move(pts));
}

/// Uniform random axis, angle uniform in [0, max_angle]; translation of
/// uniform random direction with length uniform in [0, max_translation].
inline RigidTransform random_transform(Rng& rng, double max_angle_rad, double max_translation) {
    const Vec3 axis = rng.unit_vector();
    const double angle = rng.uniform(0.0, max_angle_rad);
    const Vec3 dir = rng.unit_vector();
    const double len = rng.uniform(0.0, max_translation);
    return {UnitQuaternion::from_axis_angle(axis, angle), dir * len};
}

/// Adds independent N(0, sigma^2) noise to every coordinate.
inline PointCloud jitter(Rng& rng, const PointCloud& cloud, double sigma) {
    std::vector<Point3> pts;
    pts.reserve(cloud.size());
    for (const auto& p : cloud) pts.push_back({p.x + sigma * rng.normal(), p.y + sigma * rng.normal(), p.z + sigma * rng.normal()});
    return PointCloud(std::move(pts));
}

/// Surface samples of a cone frustum along +x from 0 to `length`
/// (a cylinder when the radii match).
inline PointCloud sample_frustum(Rng& rng, double length, double radius_start, double radius_end, std::size_t n) {
    std::vector<Point3> pts(n);
    for (auto& p : pts) {
        const double t = rng.uniform(0.0, length);
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = radius_start + (radius_end - radius_start) * t / length;
        p = {t, r * std::cos(a), r * std::sin(a)};
    }
    return PointCloud(std::move(pts));
}

/// Geometry of a synthetic log, centered on the origin along x.
struct LogShape {
    double length = 4000.0;      ///< mm
    double butt_radius = 150.0;  ///< mm, at x = -length/2
    double top_radius = 120.0;   ///< mm, at x = +length/2
    double sweep = 0.0;          ///< mm, bow of the axis at mid-length (in y)
    double ovality = 0.0;        ///< relative radius modulation with angle
    double ovality_phase = 0.0;  ///< rad
};

inline LogShape random_log_shape(Rng& rng) {
    LogShape s;
    s.length = rng.uniform(2400.0, 5000.0);
    s.butt_radius = rng.uniform(90.0, 250.0);
    s.top_radius = s.butt_radius * rng.uniform(0.6, 0.95);
    s.sweep = rng.uniform(0.0, 60.0);
    s.ovality = rng.uniform(0.0, 0.1);
    s.ovality_phase = rng.uniform(0.0, std::numbers::pi);
    return s;
}

inline PointCloud sample_log_surface(Rng& rng, const LogShape& shape, std::size_t n) {
    std::vector<Point3> pts(n);
    for (auto& p : pts) {
        const double u = rng.uniform();
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double r = (shape.butt_radius + (shape.top_radius - shape.butt_radius) * u) *
                         (1.0 + shape.ovality * std::cos(2.0 * (a - shape.ovality_phase)));
        const double bow = shape.sweep * std::sin(std::numbers::pi * u);
        p = {(u - 0.5) * shape.length, bow + r * std::cos(a), r * std::sin(a)};
    }
    return PointCloud(std::move(pts));
}

/// Parameters of a clustered dataset: every prototype log gets a distinct
/// basket and is observed several times under small rigid motions plus
/// coordinate noise.
struct PrototypeDatasetSpec {
    std::size_t prototypes = 30;
    std::size_t copies_per_prototype = 7;
    std::size_t points_per_scan = 200;
    std::size_t product_count = 19;
    double max_rotation_deg = 5.0;
    double max_translation_mm = 20.0;
    double jitter_sigma_mm = 0.5;
    std::uint64_t seed = 1;
};

/// Random basket with about a third of the products present, 1..6 units each.
inline ProductBasket random_basket(Rng& rng, std::size_t p) {
    std::vector<Quantity> q(p, 0);
    for (auto& v : q)
        if (rng.below(3) == 0) v = static_cast<Quantity>(1 + rng.below(6));
    return ProductBasket(std::move(q));
}

/// Records are ordered prototype-major; ids are `log<prototype>_<copy>`.
inline Dataset make_prototype_dataset(const PrototypeDatasetSpec& spec) {
    Rng rng(spec.seed);
    Dataset ds;
    ds.product_count = spec.product_count;
    std::set<std::vector<Quantity>> used;
    for (std::size_t k = 0; k < spec.prototypes; ++k) {
        const auto shape = random_log_shape(rng);
        const auto prototype = sample_log_surface(rng, shape, spec.points_per_scan);
        ProductBasket basket;
        do basket = random_basket(rng, spec.product_count);
        while (!used.insert({basket.quantities().begin(), basket.quantities().end()}).second);
        for (std::size_t c = 0; c < spec.copies_per_prototype; ++c) {
            const auto motion = random_transform(rng, spec.max_rotation_deg * std::numbers::pi / 180.0,
                                                 spec.max_translation_mm);
            auto scan = jitter(rng, apply_transform(motion, prototype), spec.jitter_sigma_mm);
            ds.records.push_back({"log" + std::to_string(k) + "_" + std::to_string(c), std::move(scan), basket, std::nullopt});
        }
    }
    return ds;
}

}  // namespace logicp::synth
