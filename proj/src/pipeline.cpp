#include "colorseg/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "colorseg/bilateral.hpp"
#include "colorseg/heuristics.hpp"
#include "colorseg/homography.hpp"
#include "colorseg/kernels.hpp"
#include "colorseg/rag.hpp"
#include "planar.hpp"

namespace colorseg {

void PipelineConfig::validate() const {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("config: sigma0 must be > 0");
    if (!(sigma_g >= 0.0)) throw std::invalid_argument("config: sigma_g must be >= 0");
    if (!(delta_l >= 0.0)) throw std::invalid_argument("config: delta_l must be >= 0");
    if (!(mu_b > 0.0)) throw std::invalid_argument("config: mu_b must be > 0");
    if (!HomographyParams{a, b}.valid()) {
        throw std::invalid_argument("config: homography needs 0 <= a <= 1 and (2a+1)/3 < b <= 1");
    }
    if (!(f_r > 0.0)) throw std::invalid_argument("config: f_r must be > 0");
    if (!(g_s > 0.0)) throw std::invalid_argument("config: g_s must be > 0");
    if (radius < 0) throw std::invalid_argument("config: radius must be >= 0 (0 = auto)");
}

const std::map<std::string, PipelineConfig>& config_presets() {
    static const std::map<std::string, PipelineConfig> presets = {
        {"selected-sfu", {10.0, 1.0, 22.5, 230.0, 0.0, 0.4, 50.0, 50.0, 0}},
        {"iitp-close", {8.5, 1.0, 25.0, 160.0, 0.0, 0.4, 50.0, 50.0, 0}},
        {"iitp-diffuse", {6.0, 1.0, 30.0, 250.0, 0.0, 0.4, 50.0, 50.0, 0}},
    };
    return presets;
}

LabelMap compact_labels(const LabelMap& labels, int* segment_count) {
    LabelMap out(labels.width, labels.height);
    std::unordered_map<std::int32_t, std::int32_t> remap;
    remap.reserve(64);
    std::int32_t next = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] = remap.try_emplace(labels[i], next);
        if (inserted) ++next;
        out[i] = it->second;
    }
    if (segment_count) *segment_count = next;
    return out;
}

namespace {

Image<ColorVec> transform_colours(const Image<ColorVec>& filtered, const ColorHomography& h) {
    Planes in = to_planes(filtered);
    Planes out;
    out.r.resize(in.r.size());
    out.g.resize(in.r.size());
    out.b.resize(in.r.size());
    kernels::active().homography_apply(h.matrix().data(), in.r.data(), in.g.data(), in.b.data(),
                                       in.r.size(), out.r.data(), out.g.data(), out.b.data());
    return from_planes(out, filtered.width, filtered.height);
}

StageRecord record(int step, std::string name, const Rag& rag, int rank = -1,
                   double threshold = 0.0, int merges = 0) {
    StageRecord r;
    r.step = step;
    r.name = std::move(name);
    r.rank = rank;
    r.threshold = threshold;
    r.merges = merges;
    r.u_total = rag.u_total();
    r.rms = std::sqrt(std::max(rag.u_total(), 0.0) / static_cast<double>(rag.n_pixels()));
    r.segments = rag.alive_count();
    return r;
}

}  // namespace

SegmentationResult segment_image(const Image<Rgb8>& image, const PipelineConfig& config) {
    config.validate();
    if (image.empty()) throw std::invalid_argument("segment_image: empty image");

    const auto t0 = std::chrono::steady_clock::now();

    BilateralParams bp;
    bp.f_r = config.f_r / 255.0;
    bp.g_s = config.g_s;
    bp.radius = config.radius > 0 ? config.radius : default_bilateral_radius(config.g_s);

    const double s0 = config.sigma0 / 255.0;
    const double s1 = std::sqrt(2.0 / 3.0) * s0;
    const double s2 = std::sqrt(1.0 / 3.0) * s0;
    const double dl = config.delta_l / 255.0;
    const double mb = config.mu_b / 255.0;

    RunReport report;
    report.width = image.width;
    report.height = image.height;
    report.config = config;
    report.kernel = kernels::active().name;

    // Step 1: bilateral filter, then the projective colour-space transform.
    Image<ColorVec> original(image.width, image.height);
    for (std::size_t i = 0; i < image.size(); ++i) original[i] = normalize_u8(image[i]);
    const Image<ColorVec> filtered = bilateral_filter(original, bp);
    const ColorHomography h = build_homography({config.a, config.b});
    const Image<ColorVec> transformed = transform_colours(filtered, h);

    // Step 2: one vertex per pixel, 4-connected edges, SSD = 0. Brightness
    // sums come from the filtered image before the transform.
    const int n = image.width * image.height;
    LabelMap init(image.width, image.height);
    std::vector<RegionStats> stats(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        init[static_cast<std::size_t>(i)] = i;
        stats[static_cast<std::size_t>(i)].add_pixel(transformed[static_cast<std::size_t>(i)],
                                                     filtered[static_cast<std::size_t>(i)]);
    }
    Rag rag = build_rag(init, std::move(stats));
    report.stages.push_back(record(1, "bilateral+transform", rag));
    report.stages.push_back(record(2, "init-rag", rag));

    // Step 3: rank-0 merging up to sigma0.
    StageReport st3 = run_stage(rag, 0, s0);
    report.stages.push_back(record(3, "merge-rank0", rag, 0, config.sigma0, st3.merges));

    // Step 4: Gaussian-divergence isolation of rank-0 segments.
    IsolationMarks marks = mark_isolated_rank0(rag, config.sigma_g);
    report.stages.push_back(record(4, "mark-isolated", rag));

    // Steps 5-7: rank-1 budget, then two passes with loosening locks.
    reinitialise_ssd(rag, 1);
    report.stages.push_back(record(5, "reinit-rank1", rag, 1));
    StageReport st6 = run_stage(rag, 1, s1, EdgeLockRule::any_isolated, &marks);
    report.stages.push_back(
        record(6, "merge-rank1-protected", rag, 1, std::sqrt(2.0 / 3.0) * config.sigma0, st6.merges));
    StageReport st7 = run_stage(rag, 1, s1, EdgeLockRule::both_isolated, &marks);
    report.stages.push_back(
        record(7, "merge-rank1-mixed", rag, 1, std::sqrt(2.0 / 3.0) * config.sigma0, st7.merges));

    // Step 8: pairwise L/T-shape locks replace the divergence isolation.
    marks = lock_non_lt_edges(rag, dl);
    report.stages.push_back(record(8, "lt-lock", rag));

    // Steps 9-10: rank-2 budget and merging over unlocked edges.
    reinitialise_ssd(rag, 2);
    report.stages.push_back(record(9, "reinit-rank2", rag, 2));
    StageReport st10 = run_stage(rag, 2, s2, EdgeLockRule::locked_edges, &marks);
    report.stages.push_back(
        record(10, "merge-rank2", rag, 2, std::sqrt(1.0 / 3.0) * config.sigma0, st10.merges));

    // Step 11: off-scale absorption, free of the merge budget.
    const int st11 = off_scale_merge(rag, mb, dl, &marks);
    report.stages.push_back(record(11, "offscale-absorb", rag, 2, config.mu_b, st11));

    SegmentationResult result;
    result.labels = compact_labels(rag.extract_label_map(), &report.final_segments);
    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.report = std::move(report);
    return result;
}

}  // namespace colorseg
