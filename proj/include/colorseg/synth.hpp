#pragma once

#include <cstdint>
#include <string>

#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg {

/// Desk-scale test scenes, one per cluster rank plus the overexposure case:
/// flat matte patches (rank 0), shaded matte bands (rank 1), glossy bands
/// with an additive highlight (rank 2), and a shaded body crossed by a
/// saturated stripe.
enum class SceneKind {
    mondrian_rank0,
    shaded_rank1,
    dichromatic_rank2,
    offscale_stripe,
};

SceneKind scene_kind_from_string(const std::string& name);
std::string to_string(SceneKind kind);

struct SynthSceneSpec {
    SceneKind kind = SceneKind::mondrian_rank0;
    int width = 128;
    int height = 128;
    int segments = 4;          ///< patch / band count (ignored by offscale_stripe)
    double noise_sigma = 0.0;  ///< additive Gaussian noise, 0-255 units
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument; sizes below 16x16 are rejected.
    void validate() const;
};

struct SynthScene {
    Image<Rgb8> image;
    LabelMap gt_labels;  ///< ground-truth convention: labels start at 1, 0 unused
};

/// Seed fixes the scene bit-exactly.
SynthScene generate_scene(const SynthSceneSpec& spec);

}  // namespace colorseg
