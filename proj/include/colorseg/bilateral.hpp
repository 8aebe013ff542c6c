#pragma once

#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg {

/// Gaussian-range x Gaussian-spatial bilateral filter parameters. `f_r` is in
/// the colour units of the image being filtered, `g_s` and `radius` in
/// pixels. Borders are handled by clamping coordinates to the image.
struct BilateralParams {
    double f_r = 1.0;
    double g_s = 1.0;
    int radius = 1;

    bool valid() const { return f_r > 0.0 && g_s > 0.0 && radius >= 1; }
};

/// Truncation radius used when a configuration leaves it unset: 2 g_s rounded
/// up, capped so the paper-scale g_s = 50 does not demand a 201x201 window.
int default_bilateral_radius(double g_s, int cap = 16);

/// Each output pixel is the weighted mean of its (2r+1)^2 window with weight
/// exp(-ds^2/(2 g_s^2)) * exp(-|dc|^2/(2 f_r^2)). Throws
/// std::invalid_argument on an empty image or bad parameters.
Image<ColorVec> bilateral_filter(const Image<ColorVec>& image, const BilateralParams& params);

}  // namespace colorseg
