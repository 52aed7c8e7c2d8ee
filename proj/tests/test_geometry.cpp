#include <logicp/geometry.hpp>
#include <logicp/random.hpp>

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace logicp {
namespace {

using testing::max_abs_diff;
using testing::rodrigues;

constexpr double kPi = std::numbers::pi;

UnitQuaternion random_quaternion(Rng& rng) {
    return UnitQuaternion::from_unnormalized(rng.normal(), rng.normal(), rng.normal(), rng.normal());
}

TEST(Quaternion, IdentityGivesIdentityMatrix) {
    EXPECT_EQ(quaternion_to_rotation(UnitQuaternion(1, 0, 0, 0)), Mat3::identity());
}

TEST(Quaternion, QuarterTurnAboutZ) {
    const double h = std::cos(kPi / 4);
    const auto r = quaternion_to_rotation(UnitQuaternion(h, 0, 0, std::sin(kPi / 4)));
    const Vec3 v = r * Vec3{1, 0, 0};
    EXPECT_NEAR(v.x, 0.0, 1e-15);
    EXPECT_NEAR(v.y, 1.0, 1e-15);
    EXPECT_NEAR(v.z, 0.0, 1e-15);
}

TEST(Quaternion, RandomRotationsAreOrthonormalWithUnitDeterminant) {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const auto r = quaternion_to_rotation(random_quaternion(rng));
        EXPECT_LE(max_abs_diff(r.transposed() * r, Mat3::identity()), 1e-9);
        EXPECT_NEAR(determinant(r), 1.0, 1e-9);
    }
}

TEST(Quaternion, MatchesRodriguesFormula) {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const Vec3 axis = rng.unit_vector();
        const double angle = rng.uniform(-kPi, kPi);
        const auto q = UnitQuaternion::from_axis_angle(axis, angle);
        EXPECT_LE(max_abs_diff(quaternion_to_rotation(q), rodrigues(axis, angle)), 1e-12);
    }
}

TEST(Quaternion, DoubleCoverCollapsesToOneCanonicalForm) {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        const auto r = random_quaternion(rng);
        const auto q = UnitQuaternion(r.w(), r.x(), r.y(), r.z());
        const auto neg = UnitQuaternion(-r.w(), -r.x(), -r.y(), -r.z());
        EXPECT_EQ(q, neg);
        EXPECT_GE(q.w(), 0.0);
        EXPECT_EQ(quaternion_to_rotation(q), quaternion_to_rotation(neg));
    }
}

TEST(Quaternion, ZeroScalarPartUsesFirstNonzeroComponentSign) {
    const UnitQuaternion a(0, -1, 0, 0);
    EXPECT_EQ(a.components(), (std::array<double, 4>{0, 1, 0, 0}));
    const UnitQuaternion b(0, 0, -0.6, 0.8);
    EXPECT_EQ(b.components(), (std::array<double, 4>{0, 0, 0.6, -0.8}));
    const UnitQuaternion c(-0.0, 0, 0, -1);
    EXPECT_EQ(c.components(), (std::array<double, 4>{0, 0, 0, 1}));
}

TEST(Quaternion, RejectsNonUnitComponents) {
    EXPECT_THROW(UnitQuaternion(1.1, 0, 0, 0), InvalidInput);
    EXPECT_THROW(UnitQuaternion(0, 0, 0, 0), InvalidInput);
    EXPECT_THROW(UnitQuaternion(std::nan(""), 0, 0, 0), InvalidInput);
    EXPECT_NO_THROW(UnitQuaternion(1.0 + 5e-7, 0, 0, 0));
    const UnitQuaternion q(1.0 + 5e-7, 0, 0, 0);
    EXPECT_DOUBLE_EQ(q.w(), 1.0);
}

TEST(RigidTransformTest, IdentityLeavesCloudUnchanged) {
    const PointCloud c({{1, 2, 3}, {-4, 5, 6.5}});
    EXPECT_EQ(apply_transform(RigidTransform::identity(), c), c);
}

TEST(RigidTransformTest, PureTranslation) {
    const PointCloud c({{0, 0, 0}});
    const auto out = apply_transform(RigidTransform::translation_only({1, 2, 3}), c);
    EXPECT_EQ(out[0], (Vec3{1, 2, 3}));
}

TEST(RigidTransformTest, InverseRestoresCloud) {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const RigidTransform t(random_quaternion(rng), rng.unit_vector() * rng.uniform(0, 500));
        std::vector<Point3> pts(100);
        for (auto& p : pts) p = {rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(-500, 500)};
        const PointCloud c(pts);

        // Independent inverse: (R^T, -R^T T) from the matrix itself.
        const Mat3 rt = t.rotation_matrix().transposed();
        const Vec3 back = -(rt * t.translation());
        const auto moved = apply_transform(t, c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Vec3 p = rt * moved[i] + back;
            EXPECT_NEAR(p.x, c[i].x, 1e-9);
            EXPECT_NEAR(p.y, c[i].y, 1e-9);
            EXPECT_NEAR(p.z, c[i].z, 1e-9);
        }
        const auto round_trip = apply_transform(t.inverse(), moved);
        for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(norm(round_trip[i] - c[i]), 1e-9);
    }
}

TEST(RigidTransformTest, PreservesPairwiseDistances) {
    Rng rng(22);
    const RigidTransform t(random_quaternion(rng), {100, -20, 7});
    std::vector<Point3> pts(60);
    for (auto& p : pts) p = {rng.uniform(-1000, 1000), rng.uniform(-1000, 1000), rng.uniform(-1000, 1000)};
    const PointCloud c(pts);
    const auto moved = apply_transform(t, c);
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            const double before = norm(c[i] - c[j]);
            EXPECT_NEAR(norm(moved[i] - moved[j]), before, 1e-9 * before);
        }
}

TEST(RigidTransformTest, ComposeAppliesInnerFirst) {
    Rng rng(23);
    const RigidTransform a(random_quaternion(rng), {1, 2, 3});
    const RigidTransform b(random_quaternion(rng), {-5, 0, 9});
    const Vec3 p{3, -1, 4};
    EXPECT_LE(norm(compose(a, b).apply(p) - a.apply(b.apply(p))), 1e-12);
}

TEST(RigidTransformTest, RotationAngleBetween) {
    const auto a = UnitQuaternion::from_axis_angle({0, 0, 1}, 0.3);
    const auto b = UnitQuaternion::from_axis_angle({0, 0, 1}, 0.7);
    EXPECT_NEAR(rotation_angle_between(a, b), 0.4, 1e-15);
    EXPECT_EQ(rotation_angle_between(a, a), 0.0);
}

TEST(Centroid, Examples) {
    EXPECT_EQ(centroid(PointCloud({{0, 0, 0}, {2, 0, 0}})), (Vec3{1, 0, 0}));
    EXPECT_EQ(centroid(PointCloud({{4, 5, 6}})), (Vec3{4, 5, 6}));
    EXPECT_THROW(centroid(std::span<const Point3>{}), InvalidInput);
}

TEST(Centroid, MatchesIndependentSummation) {
    Rng rng(31);
    std::vector<Point3> pts(1000);
    for (auto& p : pts) p = {rng.uniform(), rng.uniform(), rng.uniform()};
    long double sx = 0, sy = 0, sz = 0;
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
        sz += p.z;
    }
    const Vec3 c = centroid(PointCloud(pts));
    EXPECT_NEAR(c.x, static_cast<double>(sx / 1000), 1e-12);
    EXPECT_NEAR(c.y, static_cast<double>(sy / 1000), 1e-12);
    EXPECT_NEAR(c.z, static_cast<double>(sz / 1000), 1e-12);
}

TEST(Centroid, TransformsWithTheCloud) {
    Rng rng(32);
    const RigidTransform t(random_quaternion(rng), {10, 20, 30});
    std::vector<Point3> pts(200);
    for (auto& p : pts) p = {rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100)};
    const PointCloud c(pts);
    EXPECT_LE(norm(centroid(apply_transform(t, c)) - t.apply(centroid(c))), 1e-9);
}

TEST(PointCloudTest, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(PointCloud(std::vector<Point3>{}), InvalidInput);
    EXPECT_THROW(PointCloud({{0, 0, 0}, {1, std::numeric_limits<double>::infinity(), 0}}), InvalidInput);
    EXPECT_THROW(PointCloud({{std::nan(""), 0, 0}}), InvalidInput);
}

}  // namespace
}  // namespace logicp
