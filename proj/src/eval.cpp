#include "colorseg/eval.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace colorseg {

namespace {

std::size_t intersection_size(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    std::size_t i = 0, j = 0, count = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

}  // namespace

double iou(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a.empty() && b.empty()) throw std::domain_error("iou of two empty sets");
    const std::size_t inter = intersection_size(a, b);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

ImageMatchResult match_shadow_first(const GroundTruth& gt, const LabelMap& out) {
    if (gt.labels.width != out.width || gt.labels.height != out.height) {
        throw std::invalid_argument("prediction / ground-truth dimensions differ");
    }
    for (const auto& m : gt.shadow_masks) {
        if (m.width != out.width || m.height != out.height) {
            throw std::invalid_argument("shadow mask dimensions differ from the image");
        }
    }
    const std::size_t n = out.size();

    std::vector<char> annotated(n, 0);
    for (std::size_t i = 0; i < n; ++i) annotated[i] = gt.labels[i] != 0;
    std::vector<std::vector<std::int32_t>> shadow_sets(gt.shadow_masks.size());
    for (std::size_t s = 0; s < gt.shadow_masks.size(); ++s) {
        for (std::size_t i = 0; i < n; ++i) {
            if (gt.shadow_masks[s][i] >= 128) {
                shadow_sets[s].push_back(static_cast<std::int32_t>(i));
                annotated[i] = 1;
            }
        }
    }

    // Output segments restricted to the annotated domain, largest first.
    std::map<std::int32_t, std::vector<std::int32_t>> out_sets;
    for (std::size_t i = 0; i < n; ++i) {
        if (annotated[i]) out_sets[out[i]].push_back(static_cast<std::int32_t>(i));
    }
    struct OutSeg {
        std::int32_t label;
        std::size_t raw_size;
    };
    std::vector<OutSeg> out_order;
    {
        std::map<std::int32_t, std::size_t> raw_sizes;
        for (std::size_t i = 0; i < n; ++i) ++raw_sizes[out[i]];
        for (const auto& [label, set] : out_sets) out_order.push_back({label, raw_sizes[label]});
        std::sort(out_order.begin(), out_order.end(), [](const OutSeg& a, const OutSeg& b) {
            if (a.raw_size != b.raw_size) return a.raw_size > b.raw_size;
            return a.label < b.label;
        });
    }

    ImageMatchResult result;

    // Shadow phase: each output goes to the mask of maximum IoU; a match
    // needs IoU >= 0.5 and retires both sides.
    std::vector<char> shadow_matched(shadow_sets.size(), 0);
    std::map<std::int32_t, char> out_matched;
    if (!shadow_sets.empty()) {
        for (const OutSeg& seg : out_order) {
            const auto& o = out_sets[seg.label];
            if (o.empty()) continue;
            int best = -1;
            double best_iou = -1.0;
            for (std::size_t s = 0; s < shadow_sets.size(); ++s) {
                if (shadow_matched[s] || shadow_sets[s].empty()) continue;
                const double v = iou(o, shadow_sets[s]);
                if (v > best_iou) {
                    best_iou = v;
                    best = static_cast<int>(s);
                }
            }
            if (best >= 0 && best_iou >= 0.5) {
                shadow_matched[static_cast<std::size_t>(best)] = 1;
                out_matched[seg.label] = 1;
                result.pairs.push_back({best, seg.label, best_iou, true});
            }
        }
    }

    // Pixels of matched shadow segments are excluded from the normal phase.
    std::vector<char> excluded(n, 0);
    for (std::size_t s = 0; s < shadow_sets.size(); ++s) {
        if (!shadow_matched[s]) continue;
        for (const std::int32_t i : shadow_sets[s]) excluded[static_cast<std::size_t>(i)] = 1;
    }
    const auto drop_excluded = [&](const std::vector<std::int32_t>& set) {
        std::vector<std::int32_t> kept;
        kept.reserve(set.size());
        for (const std::int32_t i : set) {
            if (!excluded[static_cast<std::size_t>(i)]) kept.push_back(i);
        }
        return kept;
    };

    std::map<std::int32_t, std::vector<std::int32_t>> gt_sets;
    for (std::size_t i = 0; i < n; ++i) {
        if (gt.labels[i] != 0 && !excluded[i]) gt_sets[gt.labels[i]].push_back(static_cast<std::int32_t>(i));
    }

    std::map<std::int32_t, char> gt_matched;
    for (const OutSeg& seg : out_order) {
        if (out_matched.count(seg.label)) continue;
        const std::vector<std::int32_t> o = drop_excluded(out_sets[seg.label]);
        if (o.empty()) continue;

        // Candidate ground-truth labels are those overlapping this output.
        std::map<std::int32_t, std::size_t> overlap;
        for (const std::int32_t i : o) {
            const std::int32_t l = gt.labels[static_cast<std::size_t>(i)];
            if (l != 0) ++overlap[l];
        }
        std::int32_t best = 0;
        double best_iou = -1.0;
        for (const auto& [label, inter] : overlap) {
            if (gt_matched.count(label)) continue;
            const auto& g = gt_sets[label];
            const double v = static_cast<double>(inter) / static_cast<double>(o.size() + g.size() - inter);
            if (v > best_iou) {
                best_iou = v;
                best = label;
            }
        }
        if (best_iou >= 0.5) {
            gt_matched[best] = 1;
            result.pairs.push_back({best, seg.label, best_iou, false});
        }
    }

    // Score: every annotated segment and every shadow mask counts once.
    std::map<std::int32_t, std::vector<std::int32_t>> gt_all;
    for (std::size_t i = 0; i < n; ++i) {
        if (gt.labels[i] != 0) gt_all[gt.labels[i]];
    }
    result.k_total = static_cast<int>(gt_all.size() + shadow_sets.size());
    double capped = 0.0;
    for (const MatchEntry& e : result.pairs) capped += std::min(e.iou, 0.5);
    result.literal_sum = capped;
    result.miou = result.k_total > 0 ? 2.0 * capped / result.k_total : 0.0;

    for (const auto& [label, _] : gt_all) {
        if (!gt_matched.count(label)) result.unmatched_gt.push_back(label);
    }
    for (std::size_t s = 0; s < shadow_sets.size(); ++s) {
        if (!shadow_matched[s]) result.unmatched_shadow.push_back(static_cast<int>(s));
    }
    return result;
}

DatasetScore dataset_score(std::span<const ImageMatchResult> results) {
    DatasetScore score;
    for (const ImageMatchResult& r : results) {
        score.k_total += r.k_total;
        score.literal_sum += r.literal_sum;
        score.matched += static_cast<long>(r.pairs.size());
    }
    score.miou = score.k_total > 0 ? 2.0 * score.literal_sum / static_cast<double>(score.k_total) : 0.0;
    return score;
}

double dataset_miou(std::span<const ImageMatchResult> results) {
    const DatasetScore score = dataset_score(results);
    if (score.k_total == 0) throw std::domain_error("dataset has no ground-truth segments");
    return score.miou;
}

}  // namespace colorseg
