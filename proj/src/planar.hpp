#pragma once

#include <vector>

#include "colorseg/color.hpp"
#include "colorseg/image.hpp"

namespace colorseg {

/// Split into per-channel planes for the vector kernels.
struct Planes {
    std::vector<double> r, g, b;
};

inline Planes to_planes(const Image<ColorVec>& img) {
    Planes p;
    p.r.resize(img.size());
    p.g.resize(img.size());
    p.b.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
        p.r[i] = img[i].r;
        p.g[i] = img[i].g;
        p.b[i] = img[i].b;
    }
    return p;
}

inline Image<ColorVec> from_planes(const Planes& p, int width, int height) {
    Image<ColorVec> img(width, height);
    for (std::size_t i = 0; i < img.size(); ++i) img[i] = {p.r[i], p.g[i], p.b[i]};
    return img;
}

}  // namespace colorseg
