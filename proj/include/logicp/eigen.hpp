#pragma once

#include <logicp/errors.hpp>
#include <logicp/geometry.hpp>

#include <array>
#include <cmath>
#include <cstddef>

namespace logicp {

template <std::size_t N>
struct EigenDecomposition {
    std::array<double, N> values{};
    SquareMatrix<N> vectors;  ///< column j is the unit eigenvector of values[j]
    int sweeps = 0;
};

struct JacobiOptions {
    /// Converged when the off-diagonal Frobenius norm is at most
    /// `tolerance` times the Frobenius norm of the input.
    double tolerance = 1e-12;
    int max_sweeps = 100;
    double symmetry_tolerance = 1e-9;
};

template <std::size_t N>
double frobenius_norm(const SquareMatrix<N>& m) {
    double s = 0.0;
    for (double v : m.data) s += v * v;
    return std::sqrt(s);
}

template <std::size_t N>
double off_diagonal_norm(const SquareMatrix<N>& m) {
    double s = 0.0;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c)
            if (r != c) s += m(r, c) * m(r, c);
    return std::sqrt(s);
}

/// Symmetric within `tol`, relative to max(1, largest |entry|).
template <std::size_t N>
bool is_symmetric(const SquareMatrix<N>& m, double tol) {
    double scale = 1.0;
    for (double v : m.data) {
        if (!std::isfinite(v)) return false;
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = r + 1; c < N; ++c)
            if (std::abs(m(r, c) - m(c, r)) > tol * scale) return false;
    return true;
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
///
/// Each sweep zeroes every off-diagonal pair (p, q), p < q, in row order.
/// The input is symmetrized as (M + M^T) / 2 after the symmetry check.
template <std::size_t N>
EigenDecomposition<N> jacobi_eigen(const SquareMatrix<N>& m, const JacobiOptions& opts = {}) {
    if (!is_symmetric(m, opts.symmetry_tolerance))
        throw InvalidInput("jacobi_eigen: matrix is not symmetric");

    SquareMatrix<N> a;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) a(r, c) = 0.5 * (m(r, c) + m(c, r));

    EigenDecomposition<N> out;
    out.vectors = SquareMatrix<N>::identity();
    const double threshold = opts.tolerance * frobenius_norm(a);

    while (off_diagonal_norm(a) > threshold) {
        if (out.sweeps == opts.max_sweeps)
            throw NumericalError("jacobi_eigen: no convergence after " + std::to_string(opts.max_sweeps) +
                                 " sweeps");
        ++out.sweeps;
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = out.vectors(k, p), vkq = out.vectors(k, q);
                    out.vectors(k, p) = c * vkp - s * vkq;
                    out.vectors(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    for (std::size_t i = 0; i < N; ++i) out.values[i] = a(i, i);
    return out;
}

template <std::size_t N>
struct EigenPair {
    double value = 0.0;
    std::array<double, N> vector{};
};

/// Algebraically largest eigenvalue and a unit eigenvector for it.
/// Among equal maxima the lowest column index is returned.
template <std::size_t N>
EigenPair<N> max_eigenpair(const SquareMatrix<N>& m, const JacobiOptions& opts = {}) {
    const auto dec = jacobi_eigen(m, opts);
    std::size_t best = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (dec.values[i] > dec.values[best]) best = i;
    EigenPair<N> out;
    out.value = dec.values[best];
    double n2 = 0.0;
    for (std::size_t k = 0; k < N; ++k) n2 += dec.vectors(k, best) * dec.vectors(k, best);
    const double inv = 1.0 / std::sqrt(n2);
    for (std::size_t k = 0; k < N; ++k) out.vector[k] = dec.vectors(k, best) * inv;
    return out;
}

inline EigenPair<4> max_eigenvector(const Mat4& m) { return max_eigenpair(m); }

}  // namespace logicp
