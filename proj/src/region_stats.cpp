#include "colorseg/region_stats.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace colorseg {

RegionStats stats_from_pixels(std::span<const ColorVec> pixels,
                              std::span<const ColorVec> original_pixels) {
    assert(pixels.size() == original_pixels.size());
    RegionStats st;
    for (std::size_t i = 0; i < pixels.size(); ++i) st.add_pixel(pixels[i], original_pixels[i]);
    return st;
}

RegionStats merge_stats(const RegionStats& a, const RegionStats& b) {
    RegionStats out;
    out.n = a.n + b.n;
    out.s = a.s + b.s;
    out.m = a.m + b.m;
    out.bsum = a.bsum + b.bsum;
    return out;
}

SymMat3 scatter_matrix(const RegionStats& st) {
    assert(st.n >= 1);
    const double inv_n = 1.0 / static_cast<double>(st.n);
    SymMat3 s = st.m;
    s.xx -= st.s.r * st.s.r * inv_n;
    s.xy -= st.s.r * st.s.g * inv_n;
    s.xz -= st.s.r * st.s.b * inv_n;
    s.yy -= st.s.g * st.s.g * inv_n;
    s.yz -= st.s.g * st.s.b * inv_n;
    s.zz -= st.s.b * st.s.b * inv_n;
    return s;
}

namespace {

/// Forming S = m - s s^T / n cancels nearly equal moment sums, so eigenvalue
/// rounding noise scales with the moments' magnitude and the accumulation
/// length, not with trace(S). Anything below that floor means corrupted
/// statistics.
double negative_tolerance(const RegionStats& st, double trace_s) {
    const double moment_scale = std::max(st.m.trace(), 0.0);
    const double accumulation = 1e-12 * std::max(1.0, std::sqrt(static_cast<double>(st.n)));
    return 1e-7 * std::max(trace_s, 0.0) + accumulation * moment_scale + 1e-18;
}

double clamp_eigenvalue(double lambda, double tol) {
    if (lambda < -tol) throw std::domain_error("scatter matrix has a negative eigenvalue");
    return std::max(lambda, 0.0);
}

}  // namespace

ScatterSpectrum spectrum(const RegionStats& st) {
    if (st.n < 1) throw std::domain_error("spectrum of an empty segment");
    const SymMat3 s = scatter_matrix(st);
    const Eigen3 e = sym3_eigen(s);
    ScatterSpectrum out;
    const double tol = negative_tolerance(st, s.trace());
    for (int i = 0; i < 3; ++i) {
        out.lambda[i] = clamp_eigenvalue(e.values[i], tol);
        out.axis[i] = e.vectors[i];
    }
    out.mean = st.s * (1.0 / static_cast<double>(st.n));
    return out;
}

double rank_ssd(const RegionStats& st, int rank) {
    if (st.n < 1) throw std::domain_error("rank_ssd of an empty segment");
    assert(rank >= 0 && rank <= 2);
    const SymMat3 s = scatter_matrix(st);
    const double tol = negative_tolerance(st, s.trace());
    if (rank == 0) {
        // Sum of all eigenvalues is the trace; no decomposition needed.
        return clamp_eigenvalue(s.trace(), tol);
    }
    const auto lambda = sym3_eigenvalues(s);
    if (rank == 1) return clamp_eigenvalue(lambda[1], tol) + clamp_eigenvalue(lambda[2], tol);
    return clamp_eigenvalue(lambda[2], tol);
}

}  // namespace colorseg
