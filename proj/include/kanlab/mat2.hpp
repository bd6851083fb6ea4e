// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace kanlab {

/// 2x2 integer matrix, row-major [[a,b],[c,d]]. Used for toral automorphisms.
struct Mat2i {
    long long a = 1, b = 0, c = 0, d = 1;

    long long trace() const { return a + d; }
    long long det() const { return a * d - b * c; }

    Mat2i minus_identity() const { return Mat2i{a - 1, b, c, d - 1}; }

    /// Hyperbolic toral automorphism test: |det| = 1 and no eigenvalue on the
    /// unit circle, which for integer unimodular matrices is |trace| > |det + 1|.
    bool is_hyperbolic_automorphism() const {
        if (std::llabs(det()) != 1) return false;
        return std::llabs(trace()) > std::llabs(det() + 1);
    }

    /// |lambda_u|, the spectral radius. Requires real eigenvalues.
    double eig_max_abs() const {
        double t = static_cast<double>(trace());
        double disc = t * t - 4.0 * static_cast<double>(det());
        double root = std::sqrt(disc);
        double l1 = (t + root) / 2.0;
        double l2 = (t - root) / 2.0;
        return std::fmax(std::fabs(l1), std::fabs(l2));
    }

    /// |lambda_s|; equals 1/|lambda_u| when |det| = 1.
    double eig_min_abs() const { return std::fabs(static_cast<double>(det())) / eig_max_abs(); }

    /// Largest singular value (operator 2-norm).
    double op_norm() const {
        double g11 = static_cast<double>(a * a + c * c);
        double g22 = static_cast<double>(b * b + d * d);
        double g12 = static_cast<double>(a * b + c * d);
        double tr = g11 + g22;
        double dt = g11 * g22 - g12 * g12;
        double smax_sq = (tr + std::sqrt(tr * tr - 4.0 * dt)) / 2.0;
        return std::sqrt(smax_sq);
    }

    /// ||M^{-1}||^{-1}, the smallest singular value; |det| / sigma_max.
    double op_norm_inv_inverse() const {
        return std::fabs(static_cast<double>(det())) / op_norm();
    }

    friend bool operator==(const Mat2i& x, const Mat2i& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
};

}  // namespace kanlab
