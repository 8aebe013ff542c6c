#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "colorseg/color.hpp"
#include "colorseg/eig3.hpp"

namespace colorseg {

/// Additive sufficient statistics of a segment: pixel count, first and second
/// moments of the (transformed) pixel colours, and the brightness sum taken in
/// the original colour space before the projective transform. Merging two
/// segments is a component-wise sum, so any segment statistic is O(1) to
/// combine regardless of pixel count.
struct RegionStats {
    std::int64_t n = 0;
    Vec3 s{};        // sum of pixel vectors
    SymMat3 m{};     // sum of outer products p p^T
    double bsum = 0.0;

    void add_pixel(const ColorVec& p, const ColorVec& original) {
        n += 1;
        s += p;
        m += SymMat3::outer(p);
        bsum += brightness(original);
    }
};

RegionStats stats_from_pixels(std::span<const ColorVec> pixels,
                              std::span<const ColorVec> original_pixels);

RegionStats merge_stats(const RegionStats& a, const RegionStats& b);

/// Scatter matrix S = m - s s^T / n. Requires n >= 1.
SymMat3 scatter_matrix(const RegionStats& st);

/// Eigenstructure of the scatter matrix plus the segment mean. Eigenvalues
/// are clamped at zero (tiny negatives are rounding noise; a genuinely
/// negative eigenvalue means corrupted statistics and throws).
struct ScatterSpectrum {
    std::array<double, 3> lambda{};  // descending, >= 0
    std::array<Vec3, 3> axis{};      // orthonormal
    Vec3 mean{};
};

/// Throws std::domain_error when st.n == 0.
ScatterSpectrum spectrum(const RegionStats& st);

/// Minimal sum of squared distances from the segment's pixels to the best
/// rank-r affine model (point / line / plane): rank 0 -> l1+l2+l3,
/// rank 1 -> l2+l3, rank 2 -> l3 in terms of scatter eigenvalues.
/// Throws std::domain_error when st.n == 0.
double rank_ssd(const RegionStats& st, int rank);

}  // namespace colorseg
