#include <logicp/eigen.hpp>
#include <logicp/random.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace logicp {
namespace {

Mat4 random_symmetric(Rng& rng) {
    Mat4 m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = r; c < 4; ++c) m(r, c) = m(c, r) = rng.uniform(-1.0, 1.0);
    return m;
}

double residual(const Mat4& m, const EigenPair<4>& e) {
    double s = 0.0;
    for (std::size_t r = 0; r < 4; ++r) {
        double mv = 0.0;
        for (std::size_t c = 0; c < 4; ++c) mv += m(r, c) * e.vector[c];
        s += (mv - e.value * e.vector[r]) * (mv - e.value * e.vector[r]);
    }
    return std::sqrt(s);
}

TEST(MaxEigenvector, DiagonalMatrix) {
    Mat4 m;
    m(0, 0) = 3;
    m(1, 1) = 1;
    m(2, 2) = 2;
    m(3, 3) = 0;
    const auto e = max_eigenvector(m);
    EXPECT_EQ(e.value, 3.0);
    EXPECT_EQ(std::abs(e.vector[0]), 1.0);
    EXPECT_EQ(e.vector[1], 0.0);
    EXPECT_EQ(e.vector[2], 0.0);
    EXPECT_EQ(e.vector[3], 0.0);
}

TEST(MaxEigenvector, IdentityHasDegenerateSpectrum) {
    const auto m = Mat4::identity();
    const auto e = max_eigenvector(m);
    EXPECT_DOUBLE_EQ(e.value, 1.0);
    EXPECT_LE(residual(m, e), 1e-15);
}

TEST(MaxEigenvector, ZeroMatrix) {
    const auto e = max_eigenvector(Mat4{});
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.vector[0], 1.0);
}

TEST(MaxEigenvector, RandomSymmetricResidualAndRayleighBound) {
    Rng rng(101);
    for (int i = 0; i < 1000; ++i) {
        const auto m = random_symmetric(rng);
        const auto e = max_eigenvector(m);
        EXPECT_LE(residual(m, e), 1e-9);
        double n2 = 0.0;
        for (double v : e.vector) n2 += v * v;
        EXPECT_NEAR(n2, 1.0, 1e-12);
        for (int probe = 0; probe < 100; ++probe) {
            std::array<double, 4> r{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
            double rn = 0.0;
            for (double v : r) rn += v * v;
            double quad = 0.0;
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b) quad += r[a] * m(a, b) * r[b];
            EXPECT_GE(e.value, quad / rn - 1e-12);
        }
    }
}

TEST(MaxEigenvector, RejectsAsymmetricMatrix) {
    Mat4 m = Mat4::identity();
    m(0, 1) = 1e-3;
    EXPECT_THROW(max_eigenvector(m), InvalidInput);
    m(1, 0) = 1e-3 + 1e-12;
    EXPECT_NO_THROW(max_eigenvector(m));
}

TEST(JacobiEigen, ReportsNonConvergence) {
    Rng rng(102);
    JacobiOptions opts;
    opts.max_sweeps = 1;
    EXPECT_THROW(jacobi_eigen(random_symmetric(rng), opts), NumericalError);
}

TEST(JacobiEigen, ReconstructsThreeByThree) {
    Rng rng(103);
    for (int i = 0; i < 100; ++i) {
        Mat3 m;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = r; c < 3; ++c) m(r, c) = m(c, r) = rng.uniform(-10, 10);
        const auto d = jacobi_eigen(m);
        Mat3 lambda;
        for (std::size_t k = 0; k < 3; ++k) lambda(k, k) = d.values[k];
        const Mat3 back = d.vectors * lambda * d.vectors.transposed();
        for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(back.data[k], m.data[k], 1e-10);
        const Mat3 gram = d.vectors.transposed() * d.vectors;
        for (std::size_t k = 0; k < 9; ++k) EXPECT_NEAR(gram.data[k], Mat3::identity().data[k], 1e-12);
    }
}

TEST(JacobiEigen, ToleranceIsRelativeToMatrixScale) {
    Rng rng(104);
    auto m = random_symmetric(rng);
    for (double& v : m.data) v *= 1e8;
    const auto e = max_eigenvector(m);
    EXPECT_LE(residual(m, e), 1e-9 * 1e8);
}

}  // namespace
}  // namespace logicp
