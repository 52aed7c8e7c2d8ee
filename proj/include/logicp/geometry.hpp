#pragma once

#include <logicp/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace logicp {

/// 3D vector / point in millimeters.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Vec3& operator-=(const Vec3& o) {
        x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Vec3& operator*=(double s) {
        x *= s; y *= s; z *= s;
        return *this;
    }
    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

using Point3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Squared Euclidean distance. Every nearest-neighbor path uses this exact
/// evaluation order so results are bit-comparable.
constexpr double squared_distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

inline bool is_finite(const Vec3& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

/// Dense row-major N x N matrix of doubles.
template <std::size_t N>
struct SquareMatrix {
    std::array<double, N * N> data{};

    static constexpr std::size_t size() { return N; }

    static constexpr SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    constexpr double& operator()(std::size_t r, std::size_t c) { return data[r * N + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return data[r * N + c]; }

    constexpr SquareMatrix transposed() const {
        SquareMatrix t;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    constexpr double trace() const {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += (*this)(i, i);
        return s;
    }

    friend constexpr SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) {
                double s = 0.0;
                for (std::size_t k = 0; k < N; ++k) s += a(r, k) * b(k, c);
                m(r, c) = s;
            }
        return m;
    }
    friend constexpr SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) {
        for (std::size_t i = 0; i < N * N; ++i) a.data[i] += b.data[i];
        return a;
    }
    friend constexpr SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) {
        for (std::size_t i = 0; i < N * N; ++i) a.data[i] -= b.data[i];
        return a;
    }
    friend constexpr bool operator==(const SquareMatrix&, const SquareMatrix&) = default;
};

using Mat3 = SquareMatrix<3>;
using Mat4 = SquareMatrix<4>;

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

constexpr double determinant(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

/// Rotation as a unit quaternion (w, x, y, z), w the scalar part.
///
/// Stored canonically: w >= 0, and when w == 0 the first nonzero of
/// (x, y, z) is positive, so each rotation has exactly one representation.
class UnitQuaternion {
public:
    static constexpr double kConstructionTolerance = 1e-6;

    UnitQuaternion() = default;

    /// Accepts components whose norm is within 1e-6 of one; renormalizes.
    UnitQuaternion(double w, double x, double y, double z) {
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (!std::isfinite(n) || std::abs(n - 1.0) > kConstructionTolerance)
            throw InvalidInput("quaternion is not unit length (norm = " + std::to_string(n) + ")");
        assign(w / n, x / n, y / n, z / n);
    }

    /// Normalizes any finite nonzero 4-vector.
    static UnitQuaternion from_unnormalized(double w, double x, double y, double z) {
        const double n = std::sqrt(w * w + x * x + y * y + z * z);
        if (!std::isfinite(n) || n == 0.0)
            throw InvalidInput("cannot normalize a zero or non-finite quaternion");
        UnitQuaternion q;
        q.assign(w / n, x / n, y / n, z / n);
        return q;
    }

    static UnitQuaternion from_axis_angle(const Vec3& axis, double angle_rad) {
        const double n = norm(axis);
        if (!std::isfinite(n) || n == 0.0) throw InvalidInput("rotation axis must be nonzero");
        const double s = std::sin(angle_rad / 2.0) / n;
        return from_unnormalized(std::cos(angle_rad / 2.0), axis.x * s, axis.y * s, axis.z * s);
    }

    double w() const { return w_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }
    std::array<double, 4> components() const { return {w_, x_, y_, z_}; }

    UnitQuaternion conjugate() const {
        UnitQuaternion q;
        q.assign(w_, -x_, -y_, -z_);
        return q;
    }

    /// Hamilton product; the result rotates by `b` first, then `a`.
    friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
        return from_unnormalized(a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
                                 a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
                                 a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
                                 a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_);
    }

    friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

private:
    void assign(double w, double x, double y, double z) {
        bool flip = w < 0.0;
        if (w == 0.0) {
            const double first = x != 0.0 ? x : (y != 0.0 ? y : z);
            flip = first < 0.0;
        }
        const double s = flip ? -1.0 : 1.0;
        w_ = s * w + 0.0;  // + 0.0 turns -0.0 into +0.0
        x_ = s * x + 0.0;
        y_ = s * y + 0.0;
        z_ = s * z + 0.0;
    }

    double w_ = 1.0;
    double x_ = 0.0;
    double y_ = 0.0;
    double z_ = 0.0;
};

/// Rotation matrix of a unit quaternion (Besl-McKay form).
inline Mat3 quaternion_to_rotation(const UnitQuaternion& q) {
    const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
    Mat3 r;
    r(0, 0) = w * w + x * x - y * y - z * z;
    r(0, 1) = 2.0 * (x * y - w * z);
    r(0, 2) = 2.0 * (x * z + w * y);
    r(1, 0) = 2.0 * (x * y + w * z);
    r(1, 1) = w * w + y * y - x * x - z * z;
    r(1, 2) = 2.0 * (y * z - w * x);
    r(2, 0) = 2.0 * (x * z - w * y);
    r(2, 1) = 2.0 * (y * z + w * x);
    r(2, 2) = w * w + z * z - x * x - y * y;
    return r;
}

/// Rotation angle (radians, in [0, pi]) taking `a` to `b`.
inline double rotation_angle_between(const UnitQuaternion& a, const UnitQuaternion& b) {
    const auto d = a.conjugate() * b;
    const double v = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
    return 2.0 * std::atan2(v, std::abs(d.w()));
}

/// x -> R x + T.
class RigidTransform {
public:
    RigidTransform() = default;
    RigidTransform(const UnitQuaternion& rotation, const Vec3& translation)
        : rotation_(rotation), translation_(translation), matrix_(quaternion_to_rotation(rotation)) {
        if (!is_finite(translation)) throw InvalidInput("translation must be finite");
    }

    static RigidTransform identity() { return {}; }
    static RigidTransform translation_only(const Vec3& t) { return {UnitQuaternion{}, t}; }

    const UnitQuaternion& rotation() const { return rotation_; }
    const Vec3& translation() const { return translation_; }
    const Mat3& rotation_matrix() const { return matrix_; }

    Vec3 apply(const Vec3& p) const { return matrix_ * p + translation_; }

    /// (R^T, -R^T T).
    RigidTransform inverse() const {
        const auto inv = rotation_.conjugate();
        return {inv, -(quaternion_to_rotation(inv) * translation_)};
    }

    /// Returns the transform applying `inner` first, then `outer`.
    friend RigidTransform compose(const RigidTransform& outer, const RigidTransform& inner) {
        return {outer.rotation_ * inner.rotation_, outer.apply(inner.translation_)};
    }

private:
    UnitQuaternion rotation_;
    Vec3 translation_;
    Mat3 matrix_ = Mat3::identity();
};

/// Ordered, non-empty sequence of finite points. Index is point identity.
class PointCloud {
public:
    PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
        if (points_.empty()) throw InvalidInput("point cloud must contain at least one point");
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (!is_finite(points_[i]))
                throw InvalidInput("point " + std::to_string(i) + " has a non-finite coordinate");
    }

    std::size_t size() const { return points_.size(); }
    std::span<const Point3> points() const { return points_; }
    const Point3& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::vector<Point3> points_;
};

inline PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud) {
    std::vector<Point3> out;
    out.reserve(cloud.size());
    for (const auto& p : cloud) out.push_back(t.apply(p));
    return PointCloud(std::move(out));
}

inline Vec3 centroid(std::span<const Point3> points) {
    if (points.empty()) throw InvalidInput("centroid of an empty point set");
    Vec3 sum;
    for (const auto& p : points) sum += p;
    return sum * (1.0 / static_cast<double>(points.size()));
}

inline Vec3 centroid(const PointCloud& cloud) { return centroid(cloud.points()); }

/// Largest pairwise distance bound: diagonal of the axis-aligned bounding box.
inline double bounding_diagonal(const PointCloud& cloud) {
    Vec3 lo = cloud[0], hi = cloud[0];
    for (const auto& p : cloud) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    return norm(hi - lo);
}

}  // namespace logicp
