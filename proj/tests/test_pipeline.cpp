#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>
#include <set>

#include "colorseg/eval.hpp"
#include "colorseg/pipeline.hpp"
#include "colorseg/rng.hpp"
#include "colorseg/synth.hpp"

using namespace colorseg;

namespace {

PipelineConfig synthetic_config() {
    // Settings for small noise-free or low-noise synthetic scenes: identity
    // colour transform, light smoothing, per-scene thresholds set in tests.
    PipelineConfig cfg;
    cfg.sigma0 = 2.0;
    cfg.sigma_g = 20.0;
    cfg.delta_l = 10.0;
    cfg.mu_b = 240.0;
    cfg.a = 0.0;
    cfg.b = 1.0;
    cfg.f_r = 3.0;
    cfg.g_s = 1.5;
    cfg.radius = 2;
    return cfg;
}

bool segment_is_4_connected(const LabelMap& labels, std::int32_t target) {
    int start = -1;
    int count = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == target) {
            if (start < 0) start = static_cast<int>(i);
            ++count;
        }
    }
    if (count == 0) return true;
    std::vector<char> seen(labels.size(), 0);
    std::queue<int> frontier;
    frontier.push(start);
    seen[static_cast<std::size_t>(start)] = 1;
    int reached = 0;
    while (!frontier.empty()) {
        const int i = frontier.front();
        frontier.pop();
        ++reached;
        const int x = i % labels.width, y = i / labels.width;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int k = 0; k < 4; ++k) {
            if (nx[k] < 0 || nx[k] >= labels.width || ny[k] < 0 || ny[k] >= labels.height) continue;
            const int j = ny[k] * labels.width + nx[k];
            if (!seen[static_cast<std::size_t>(j)] && labels[static_cast<std::size_t>(j)] == target) {
                seen[static_cast<std::size_t>(j)] = 1;
                frontier.push(j);
            }
        }
    }
    return reached == count;
}

}  // namespace

TEST_CASE("config validation and presets") {
    PipelineConfig bad = synthetic_config();
    bad.sigma0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = synthetic_config();
    bad.b = 0.2;  // below (2a+1)/3
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    const auto& presets = config_presets();
    CHECK(presets.size() == 3);
    CHECK(presets.at("iitp-close").sigma0 == doctest::Approx(8.5));
    CHECK(presets.at("iitp-close").mu_b == doctest::Approx(160.0));
    CHECK(presets.at("iitp-close").delta_l == doctest::Approx(25.0));
    CHECK(presets.at("selected-sfu").mu_b == doctest::Approx(230.0));
    CHECK(presets.at("selected-sfu").sigma0 == doctest::Approx(10.0));
    CHECK(presets.at("selected-sfu").delta_l == doctest::Approx(22.5));
    CHECK(presets.at("iitp-diffuse").sigma0 == doctest::Approx(6.0));
    CHECK(presets.at("iitp-diffuse").mu_b == doctest::Approx(250.0));
    for (const auto& [name, cfg] : presets) {
        CHECK(cfg.a == 0.0);
        CHECK(cfg.b == doctest::Approx(0.4));
        CHECK(cfg.f_r == doctest::Approx(50.0));
        CHECK(cfg.g_s == doctest::Approx(50.0));
        CHECK(cfg.sigma_g == doctest::Approx(1.0));
        CHECK_NOTHROW(cfg.validate());
    }
}

TEST_CASE("compact_labels uses raster first-occurrence order") {
    LabelMap raw(3, 2);
    raw.data = {7, 7, 3, 3, 9, 7};
    int count = 0;
    const LabelMap out = compact_labels(raw, &count);
    CHECK(count == 3);
    CHECK(out.data == std::vector<std::int32_t>{0, 0, 1, 1, 2, 0});
}

TEST_CASE("constant image collapses to one segment") {
    Image<Rgb8> img(24, 16, Rgb8{120, 90, 60});
    const SegmentationResult result = segment_image(img, synthetic_config());
    CHECK(result.report.final_segments == 1);
    for (const std::int32_t l : result.labels.data) CHECK(l == 0);
}

TEST_CASE("1x1 image yields a single label") {
    Image<Rgb8> img(1, 1, Rgb8{10, 20, 30});
    PipelineConfig cfg = synthetic_config();
    cfg.radius = 1;
    const SegmentationResult result = segment_image(img, cfg);
    CHECK(result.report.final_segments == 1);
    CHECK(result.labels[0] == 0);
}

TEST_CASE("two-colour mondrian with noise recovers both patches") {
    SynthSceneSpec spec;
    spec.kind = SceneKind::mondrian_rank0;
    spec.width = 48;
    spec.height = 48;
    spec.segments = 2;
    spec.noise_sigma = 3.0;
    spec.seed = 11;
    const SynthScene scene = generate_scene(spec);

    PipelineConfig cfg = synthetic_config();
    cfg.sigma0 = 10.0;
    cfg.sigma_g = 1.0;
    cfg.f_r = 10.0;
    const SegmentationResult result = segment_image(scene.image, cfg);
    CHECK(result.report.final_segments == 2);

    const GroundTruth gt{scene.gt_labels, {}};
    const ImageMatchResult match = match_shadow_first(gt, result.labels);
    REQUIRE(match.pairs.size() == 2);
    for (const MatchEntry& e : match.pairs) CHECK(e.iou >= 0.99);
}

TEST_CASE("shaded band scene becomes one segment per body colour by step 7") {
    SynthSceneSpec spec;
    spec.kind = SceneKind::shaded_rank1;
    spec.width = 64;
    spec.height = 64;
    spec.segments = 1;
    spec.noise_sigma = 0.0;
    spec.seed = 3;
    const SynthScene scene = generate_scene(spec);

    const SegmentationResult result = segment_image(scene.image, synthetic_config());
    const StageRecord& step7 = result.report.stages.at(6);
    CHECK(step7.step == 7);
    CHECK(step7.segments == 1);
    CHECK(result.report.final_segments == 1);
}

TEST_CASE("stage reports are monotone and budget-respecting") {
    SynthSceneSpec spec;
    spec.kind = SceneKind::mondrian_rank0;
    spec.width = 32;
    spec.height = 32;
    spec.segments = 4;
    spec.noise_sigma = 4.0;
    spec.seed = 5;
    const SynthScene scene = generate_scene(spec);
    PipelineConfig cfg = synthetic_config();
    cfg.sigma0 = 9.0;
    cfg.sigma_g = 1.0;
    cfg.f_r = 10.0;
    const SegmentationResult result = segment_image(scene.image, cfg);

    const auto& stages = result.report.stages;
    REQUIRE(stages.size() == 11);
    for (std::size_t i = 0; i < stages.size(); ++i) CHECK(stages[i].step == static_cast<int>(i) + 1);
    for (std::size_t i = 2; i < stages.size(); ++i) CHECK(stages[i].segments <= stages[i - 1].segments);

    // Merge stages end within their budgets (step 11 may bypass them).
    for (const int step : {3, 6, 7, 10}) {
        const StageRecord& s = stages[static_cast<std::size_t>(step - 1)];
        CHECK(s.rms <= s.threshold / 255.0 + 1e-12);
    }
}

TEST_CASE("every output segment is 4-connected") {
    SynthSceneSpec spec;
    spec.kind = SceneKind::mondrian_rank0;
    spec.width = 32;
    spec.height = 32;
    spec.segments = 4;
    spec.noise_sigma = 6.0;
    spec.seed = 17;
    const SynthScene scene = generate_scene(spec);
    PipelineConfig cfg = synthetic_config();
    cfg.sigma0 = 8.0;
    cfg.sigma_g = 1.0;
    cfg.f_r = 10.0;
    const SegmentationResult result = segment_image(scene.image, cfg);

    std::set<std::int32_t> labels(result.labels.data.begin(), result.labels.data.end());
    CHECK(static_cast<int>(labels.size()) == result.report.final_segments);
    for (const std::int32_t l : labels) CHECK(segment_is_4_connected(result.labels, l));
    // Compacted labels form 0..K-1.
    CHECK(*labels.begin() == 0);
    CHECK(*labels.rbegin() == result.report.final_segments - 1);
}

TEST_CASE("byte-identical label maps across repeated runs") {
    SynthSceneSpec spec;
    spec.kind = SceneKind::dichromatic_rank2;
    spec.width = 40;
    spec.height = 40;
    spec.segments = 2;
    spec.noise_sigma = 2.0;
    spec.seed = 23;
    const SynthScene scene = generate_scene(spec);
    PipelineConfig cfg = synthetic_config();
    cfg.sigma0 = 6.0;
    const SegmentationResult a = segment_image(scene.image, cfg);
    const SegmentationResult b = segment_image(scene.image, cfg);
    CHECK(a.labels == b.labels);
    CHECK(a.report.final_segments == b.report.final_segments);
}
