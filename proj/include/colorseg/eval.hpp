#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "colorseg/image.hpp"

namespace colorseg {

/// Per-pixel annotation: label 0 marks unannotated pixels (they count toward
/// neither intersections nor unions); deep-shadow areas come as separate
/// binary masks which may overlap one another.
struct GroundTruth {
    LabelMap labels;
    std::vector<Image<std::uint8_t>> shadow_masks;  // 0 / 255
};

/// Jaccard index of two pixel-index sets (sorted, duplicate-free). Throws
/// std::domain_error when both sets are empty.
double iou(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b);

struct MatchEntry {
    int gt_id = 0;     ///< ground-truth label, or shadow-mask index when shadow
    int out_id = 0;
    double iou = 0.0;  ///< >= 0.5 for every recorded match
    bool shadow = false;
};

struct ImageMatchResult {
    std::vector<MatchEntry> pairs;
    std::vector<int> unmatched_gt;      ///< ground-truth labels left unmatched
    std::vector<int> unmatched_shadow;  ///< shadow-mask indices left unmatched
    int k_total = 0;                    ///< annotated segments + shadow masks
    double miou = 0.0;                  ///< normalised: (1/K) sum 2 min(IoU, 0.5)
    double literal_sum = 0.0;           ///< sum min(IoU, 0.5) without normalisation
};

/// One-to-one matching at IoU >= 0.5. Output segments are first matched
/// against shadow masks (each output compared with the mask of maximum IoU);
/// the remaining outputs are matched against annotated segments on pixel sets
/// that exclude the already-matched shadow pixels. Throws
/// std::invalid_argument on dimension mismatch.
ImageMatchResult match_shadow_first(const GroundTruth& gt, const LabelMap& out);

struct DatasetScore {
    double miou = 0.0;         ///< normalised over all ground-truth segments
    double literal_sum = 0.0;
    long k_total = 0;
    long matched = 0;
};

DatasetScore dataset_score(std::span<const ImageMatchResult> results);

/// Normalised dataset score in [0,1]; 1.0 at perfect matching. Throws
/// std::domain_error when the dataset has no ground-truth segments.
double dataset_miou(std::span<const ImageMatchResult> results);

}  // namespace colorseg
