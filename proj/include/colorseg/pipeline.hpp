#pragma once

#include <map>
#include <string>
#include <vector>

#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg {

/// Pipeline thresholds and transform parameters. Colour thresholds (sigma0,
/// delta_l, mu_b, f_r) are given in 0-255 units and rescaled internally to
/// the normalised [0,1] colour space; sigma_g compares against the
/// dimensionless Gaussian divergence; mu_b applies to brightness measured
/// before the colour-space transform. The derived rank-1/rank-2 thresholds
/// sigma1 = sqrt(2/3) sigma0 and sigma2 = sqrt(1/3) sigma0 are computed,
/// never stored.
struct PipelineConfig {
    double sigma0 = 10.0;
    double sigma_g = 1.0;
    double delta_l = 22.5;
    double mu_b = 230.0;
    double a = 0.0;
    double b = 0.4;
    double f_r = 50.0;
    double g_s = 50.0;
    int radius = 0;  ///< bilateral window radius in pixels; 0 = ceil(2 g_s) capped at 16

    /// Throws std::invalid_argument with a diagnostic on any bad field.
    void validate() const;
};

struct StageRecord {
    int step = 0;            // 1..11
    std::string name;
    int rank = -1;           // -1 when not a merge/reinit step
    double threshold = 0.0;  // stage sigma in 0-255 units; 0 when n/a
    int merges = 0;
    double u_total = 0.0;    // running SSD in normalised transformed space
    double rms = 0.0;        // sqrt(U/N)
    int segments = 0;        // alive segments after the step
};

struct RunReport {
    int width = 0;
    int height = 0;
    PipelineConfig config;
    std::vector<StageRecord> stages;
    int final_segments = 0;
    double wall_ms = 0.0;
    std::string kernel;
};

struct SegmentationResult {
    LabelMap labels;  // compacted to 0..K-1 in raster first-occurrence order
    RunReport report;
};

/// Runs the full eleven-step segmentation: bilateral filter and colour-space
/// transform, per-pixel RAG initialisation, rank-0 merging, divergence-based
/// isolation, two rank-1 passes, the L/T edge lock, rank-2 merging, and
/// off-scale absorption. Deterministic: identical input and config produce
/// identical label maps.
SegmentationResult segment_image(const Image<Rgb8>& image, const PipelineConfig& config);

/// Reference parameter sets: "selected-sfu", "iitp-close", "iitp-diffuse".
const std::map<std::string, PipelineConfig>& config_presets();

/// Remaps labels to a dense 0..K-1 range ordered by first raster occurrence.
LabelMap compact_labels(const LabelMap& labels, int* segment_count = nullptr);

}  // namespace colorseg
