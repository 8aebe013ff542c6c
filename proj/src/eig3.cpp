#include "colorseg/eig3.hpp"

#include <algorithm>
#include <cmath>

namespace colorseg {

namespace {

constexpr double kTwoPiThirds = 2.0943951023931953;

void sort_descending(std::array<double, 3>& v) {
    if (v[0] < v[1]) std::swap(v[0], v[1]);
    if (v[1] < v[2]) std::swap(v[1], v[2]);
    if (v[0] < v[1]) std::swap(v[0], v[1]);
}

/// Largest-magnitude component positive; ties broken by the first maximal
/// component, which keeps repeated runs identical.
Vec3 fix_sign(Vec3 v) {
    int imax = 0;
    double amax = std::abs(v[0]);
    for (int i = 1; i < 3; ++i) {
        if (std::abs(v[i]) > amax) {
            amax = std::abs(v[i]);
            imax = i;
        }
    }
    if (v[imax] < 0.0) {
        v.r = -v.r;
        v.g = -v.g;
        v.b = -v.b;
    }
    return v;
}

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) return {1.0, 0.0, 0.0};
    return v * (1.0 / n);
}

/// Cyclic Jacobi sweeps. Unconditionally convergent for symmetric input;
/// used when the analytic route loses accuracy on near-degenerate spectra.
Eigen3 jacobi_eigen(const SymMat3& m) {
    double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double apq = a[p][q];
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for (int k = 0; k < 3; ++k) {
                    if (k != p && k != q) {
                        const double akp = a[k][p];
                        const double akq = a[k][q];
                        a[k][p] = akp - s * (akq + tau * akp);
                        a[p][k] = a[k][p];
                        a[k][q] = akq + s * (akp - tau * akq);
                        a[q][k] = a[k][q];
                    }
                    const double vkp = v[k][p];
                    const double vkq = v[k][q];
                    v[k][p] = vkp - s * (vkq + tau * vkp);
                    v[k][q] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    Eigen3 out;
    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> d = {a[0][0], a[1][1], a[2][2]};
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] > d[j]; });
    for (int i = 0; i < 3; ++i) {
        const int c = order[i];
        out.values[i] = d[c];
        out.vectors[i] = fix_sign(normalized({v[0][c], v[1][c], v[2][c]}));
    }
    return out;
}

/// Null-space direction of (m - lambda I) via the largest row cross product.
/// Returns a zero-norm flag through ok when all cross products vanish.
Vec3 eigenvector_for(const SymMat3& m, double lambda, bool& ok) {
    const Vec3 row0 = {m.xx - lambda, m.xy, m.xz};
    const Vec3 row1 = {m.xy, m.yy - lambda, m.yz};
    const Vec3 row2 = {m.xz, m.yz, m.zz - lambda};

    const Vec3 c01 = cross(row0, row1);
    const Vec3 c02 = cross(row0, row2);
    const Vec3 c12 = cross(row1, row2);

    double n01 = norm2(c01), n02 = norm2(c02), n12 = norm2(c12);
    Vec3 best = c01;
    double nbest = n01;
    if (n02 > nbest) {
        best = c02;
        nbest = n02;
    }
    if (n12 > nbest) {
        best = c12;
        nbest = n12;
    }

    const double row_scale = norm2(row0) + norm2(row1) + norm2(row2);
    ok = nbest > 1e-24 * row_scale * row_scale + 1e-300;
    return ok ? normalized(best) : Vec3{1, 0, 0};
}

}  // namespace

std::array<double, 3> sym3_eigenvalues(const SymMat3& m) {
    const double q = m.trace() / 3.0;
    const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    const double dxx = m.xx - q, dyy = m.yy - q, dzz = m.zz - q;
    const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * p1;

    std::array<double, 3> out = {q, q, q};
    if (p2 <= 0.0) return out;  // scalar multiple of the identity

    const double p = std::sqrt(p2 / 6.0);
    // B = (m - q I) / p; r = det(B) / 2 lies in [-1, 1] up to rounding.
    const double bxx = dxx / p, byy = dyy / p, bzz = dzz / p;
    const double bxy = m.xy / p, bxz = m.xz / p, byz = m.yz / p;
    double r = 0.5 * (bxx * (byy * bzz - byz * byz) - bxy * (bxy * bzz - byz * bxz) +
                      bxz * (bxy * byz - byy * bxz));
    r = std::clamp(r, -1.0, 1.0);

    const double phi = std::acos(r) / 3.0;
    out[0] = q + 2.0 * p * std::cos(phi);
    out[2] = q + 2.0 * p * std::cos(phi + kTwoPiThirds);
    out[1] = 3.0 * q - out[0] - out[2];
    sort_descending(out);
    return out;
}

Eigen3 sym3_eigen(const SymMat3& m) {
    const auto values = sym3_eigenvalues(m);
    const double scale = std::max({std::abs(values[0]), std::abs(values[2]), 1e-300});

    const double gap01 = (values[0] - values[1]) / scale;
    const double gap12 = (values[1] - values[2]) / scale;
    if (gap01 < 1e-8 || gap12 < 1e-8) return jacobi_eigen(m);

    Eigen3 out;
    out.values = values;
    bool ok0 = false, ok2 = false;
    out.vectors[0] = eigenvector_for(m, values[0], ok0);
    out.vectors[2] = eigenvector_for(m, values[2], ok2);
    if (!ok0 || !ok2) return jacobi_eigen(m);

    // Re-orthogonalise the extremes, derive the middle vector from them.
    out.vectors[2] -= out.vectors[0] * dot(out.vectors[0], out.vectors[2]);
    out.vectors[2] = normalized(out.vectors[2]);
    out.vectors[1] = normalized(cross(out.vectors[2], out.vectors[0]));
    for (auto& v : out.vectors) v = fix_sign(v);
    return out;
}

}  // namespace colorseg
