#pragma once

#include <stdexcept>
#include <string>

#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Decodes an 8-bit RGB image; PNG and binary PPM (P6) are recognised by
/// their magic bytes. Palette, grey and alpha PNGs are expanded to RGB.
Image<Rgb8> read_image_rgb8(const std::string& path);

/// Encodes by extension: ".ppm" writes binary PPM, anything else PNG.
void write_image_rgb8(const std::string& path, const Image<Rgb8>& image);

/// Label maps are stored as 16-bit single-channel PNG holding label + 1, so
/// stored value 0 never appears and the file round-trips losslessly with
/// read_label_map. Labels must lie in [0, 65534].
void write_label_map(const std::string& path, const LabelMap& labels);
LabelMap read_label_map(const std::string& path);

/// Ground-truth label maps keep their stored values as-is; value 0 is the
/// reserved unannotated label. Accepts 8- or 16-bit grey PNG.
LabelMap read_gt_labels(const std::string& path);
void write_gt_labels(const std::string& path, const LabelMap& labels);

/// Binary masks as 8-bit grey PNG; >= 128 reads as 255.
Image<std::uint8_t> read_mask(const std::string& path);
void write_mask(const std::string& path, const Image<std::uint8_t>& mask);

}  // namespace colorseg
