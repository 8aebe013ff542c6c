#pragma once

// Test-only references, kept independent of the library code paths they
// check: model fitting by direct numerical minimisation over explicit model
// parameters, and a direct-sum bilateral filter.

#include <cstdint>
#include <span>

#include "colorseg/bilateral.hpp"
#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg::testing {

/// Minimal sum of squared distances from `points` to the best rank-r affine
/// model (point / line / plane), found by Nelder-Mead over the model's own
/// parameters (base point and direction angles) with many restarts.
double oracle_rank_ssd(std::span<const ColorVec> points, int rank, std::uint64_t seed = 12345);

/// Bilateral filter evaluated as the naive O(n window^2) double loop.
Image<ColorVec> reference_bilateral(const Image<ColorVec>& img, const BilateralParams& p);

}  // namespace colorseg::testing
