#include "colorseg/heuristics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace colorseg {

namespace {

SymMat3 ridged_covariance(const RegionStats& st) {
    SymMat3 c = scatter_matrix(st);
    const double inv_n = 1.0 / static_cast<double>(st.n);
    c.xx = c.xx * inv_n + kCovarianceRidge;
    c.xy *= inv_n;
    c.xz *= inv_n;
    c.yy = c.yy * inv_n + kCovarianceRidge;
    c.yz *= inv_n;
    c.zz = c.zz * inv_n + kCovarianceRidge;
    return c;
}

double det3(const SymMat3& m) {
    return m.xx * (m.yy * m.zz - m.yz * m.yz) - m.xy * (m.xy * m.zz - m.yz * m.xz) +
           m.xz * (m.xy * m.yz - m.yy * m.xz);
}

SymMat3 inverse3(const SymMat3& m, double det) {
    const double inv = 1.0 / det;
    SymMat3 out;
    out.xx = (m.yy * m.zz - m.yz * m.yz) * inv;
    out.xy = (m.xz * m.yz - m.xy * m.zz) * inv;
    out.xz = (m.xy * m.yz - m.xz * m.yy) * inv;
    out.yy = (m.xx * m.zz - m.xz * m.xz) * inv;
    out.yz = (m.xy * m.xz - m.xx * m.yz) * inv;
    out.zz = (m.xx * m.yy - m.xy * m.xy) * inv;
    return out;
}

double trace_product(const SymMat3& a, const SymMat3& b) {
    return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz + 2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

double kl_directed(const Vec3& mean_a, const SymMat3& cov_a, double det_a, const Vec3& mean_b,
                   const SymMat3& inv_b, double det_b) {
    const Vec3 d = mean_b - mean_a;
    const double quad = dot(d, inv_b.apply(d));
    const double tr = trace_product(inv_b, cov_a);
    return 0.5 * (tr + quad - 3.0 + std::log(det_b / det_a));
}

}  // namespace

double gaussian_kl(const RegionStats& a, const RegionStats& b) {
    assert(a.n >= 1 && b.n >= 1);
    const Vec3 mean_a = a.s * (1.0 / static_cast<double>(a.n));
    const Vec3 mean_b = b.s * (1.0 / static_cast<double>(b.n));
    const SymMat3 cov_a = ridged_covariance(a);
    const SymMat3 cov_b = ridged_covariance(b);
    const double det_a = det3(cov_a);
    const double det_b = det3(cov_b);
    const SymMat3 inv_a = inverse3(cov_a, det_a);
    const SymMat3 inv_b = inverse3(cov_b, det_b);
    const double kl_ab = kl_directed(mean_a, cov_a, det_a, mean_b, inv_b, det_b);
    const double kl_ba = kl_directed(mean_b, cov_b, det_b, mean_a, inv_a, det_a);
    return std::max(0.5 * (kl_ab + kl_ba), 0.0);
}

SegmentLineModel line_model(const RegionStats& st) {
    const ScatterSpectrum sp = spectrum(st);
    SegmentLineModel out;
    out.center = sp.mean;
    out.direction = sp.axis[0];
    out.half_length = std::sqrt(sp.lambda[0] / static_cast<double>(st.n));
    return out;
}

double point_segment_distance(const Vec3& p, const SegmentLineModel& seg) {
    const Vec3 d = p - seg.center;
    const double t = std::clamp(dot(d, seg.direction), -seg.half_length, seg.half_length);
    return norm(d - seg.direction * t);
}

bool lt_shape_test(const SegmentLineModel& a, const SegmentLineModel& b, double delta_l) {
    const Vec3 ends[4] = {a.center + a.direction * a.half_length,
                          a.center - a.direction * a.half_length,
                          b.center + b.direction * b.half_length,
                          b.center - b.direction * b.half_length};
    return point_segment_distance(ends[0], b) < delta_l ||
           point_segment_distance(ends[1], b) < delta_l ||
           point_segment_distance(ends[2], a) < delta_l ||
           point_segment_distance(ends[3], a) < delta_l;
}

IsolationMarks mark_isolated_rank0(const Rag& rag, double sigma_g) {
    IsolationMarks marks;
    marks.isolated.assign(static_cast<std::size_t>(rag.vertex_capacity()), 0);
    for (int id = 0; id < rag.vertex_capacity(); ++id) {
        if (!rag.alive(id)) continue;
        const auto& nbrs = rag.neighbors(id);
        if (nbrs.empty()) {
            marks.isolated[static_cast<std::size_t>(id)] = 1;
            continue;
        }
        double d_min = std::numeric_limits<double>::infinity();
        for (const std::int32_t x : nbrs) d_min = std::min(d_min, gaussian_kl(rag.stats(id), rag.stats(x)));
        if (d_min > sigma_g) marks.isolated[static_cast<std::size_t>(id)] = 1;
    }
    return marks;
}

IsolationMarks lock_non_lt_edges(const Rag& rag, double delta_l) {
    IsolationMarks marks;
    marks.isolated.assign(static_cast<std::size_t>(rag.vertex_capacity()), 0);
    std::vector<SegmentLineModel> models(static_cast<std::size_t>(rag.vertex_capacity()));
    for (int id = 0; id < rag.vertex_capacity(); ++id) {
        if (rag.alive(id)) models[static_cast<std::size_t>(id)] = line_model(rag.stats(id));
    }
    for (int id = 0; id < rag.vertex_capacity(); ++id) {
        if (!rag.alive(id)) continue;
        for (const std::int32_t x : rag.neighbors(id)) {
            if (x <= id) continue;
            if (!lt_shape_test(models[static_cast<std::size_t>(id)], models[static_cast<std::size_t>(x)],
                               delta_l)) {
                marks.locked.insert(IsolationMarks::edge_key(id, x));
            }
        }
    }
    return marks;
}

int off_scale_merge(Rag& rag, double mu_b, double delta_l, IsolationMarks* marks) {
    int merges = 0;
    for (;;) {
        struct Candidate {
            double mean_brightness;
            int id;
        };
        std::vector<Candidate> cands;
        for (int id = 0; id < rag.vertex_capacity(); ++id) {
            if (!rag.alive(id)) continue;
            const RegionStats& st = rag.stats(id);
            const double mb = st.bsum / static_cast<double>(st.n);
            if (mb > mu_b) cands.push_back({mb, id});
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.mean_brightness != b.mean_brightness) return a.mean_brightness > b.mean_brightness;
            return a.id < b.id;
        });

        bool fired = false;
        for (const Candidate& c : cands) {
            const auto& nbrs = rag.neighbors(c.id);
            if (nbrs.size() == 1) {
                rag.merge_segments(c.id, nbrs[0], 2, marks);
                ++merges;
                fired = true;
                break;
            }
            for (std::size_t i = 0; i < nbrs.size() && !fired; ++i) {
                for (std::size_t j = i + 1; j < nbrs.size() && !fired; ++j) {
                    const int x = nbrs[i], y = nbrs[j];
                    if (rag.adjacent(x, y)) continue;
                    if (!lt_shape_test(line_model(rag.stats(x)), line_model(rag.stats(y)), delta_l)) continue;
                    rag.merge_segments(c.id, x, 2, marks);
                    rag.merge_segments(std::min(c.id, x), y, 2, marks);
                    merges += 2;
                    fired = true;
                }
            }
            if (fired) break;  // adjacency changed; rescan candidates
        }
        if (!fired) break;
    }
    return merges;
}

}  // namespace colorseg
