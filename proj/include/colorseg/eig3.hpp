#pragma once

#include <array>

#include "colorseg/color.hpp"

namespace colorseg {

/// Symmetric 3x3 matrix, upper triangle stored.
struct SymMat3 {
    double xx = 0.0, xy = 0.0, xz = 0.0;
    double yy = 0.0, yz = 0.0;
    double zz = 0.0;

    double trace() const { return xx + yy + zz; }

    Vec3 apply(const Vec3& v) const {
        return {xx * v.r + xy * v.g + xz * v.b,
                xy * v.r + yy * v.g + yz * v.b,
                xz * v.r + yz * v.g + zz * v.b};
    }

    SymMat3& operator+=(const SymMat3& o) {
        xx += o.xx;
        xy += o.xy;
        xz += o.xz;
        yy += o.yy;
        yz += o.yz;
        zz += o.zz;
        return *this;
    }
    friend SymMat3 operator+(SymMat3 a, const SymMat3& b) { return a += b; }

    /// Rank-1 update term k * v v^T.
    static SymMat3 outer(const Vec3& v, double k = 1.0) {
        return {k * v.r * v.r, k * v.r * v.g, k * v.r * v.b,
                k * v.g * v.g, k * v.g * v.b,
                k * v.b * v.b};
    }
};

struct Eigen3 {
    std::array<double, 3> values{};   // descending
    std::array<Vec3, 3> vectors{};    // orthonormal, values[i] <-> vectors[i]
};

/// Eigenvalues of a symmetric 3x3 matrix, sorted descending. Closed-form
/// trigonometric solution of the characteristic polynomial.
std::array<double, 3> sym3_eigenvalues(const SymMat3& m);

/// Full eigendecomposition. Eigenvectors come from the analytic cross-product
/// construction; when eigenvalues are nearly degenerate (relative gap below
/// 1e-8) the solver falls back to cyclic Jacobi iteration. Each eigenvector's
/// largest-magnitude component is made positive so output is deterministic.
Eigen3 sym3_eigen(const SymMat3& m);

}  // namespace colorseg
