#include "colorseg/bilateral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "colorseg/kernels.hpp"
#include "planar.hpp"

namespace colorseg {

int default_bilateral_radius(double g_s, int cap) {
    const int r = static_cast<int>(std::ceil(2.0 * g_s));
    return std::clamp(r, 1, cap);
}

Image<ColorVec> bilateral_filter(const Image<ColorVec>& image, const BilateralParams& params) {
    if (image.empty()) throw std::invalid_argument("bilateral_filter: empty image");
    if (!params.valid()) throw std::invalid_argument("bilateral_filter: invalid parameters");

    const int w = image.width, h = image.height, r = params.radius;
    const int stride = w + 2 * r;
    const int padded_h = h + 2 * r;

    // Clamp-to-edge padded planes; the kernels then run bounds-check free.
    std::vector<double> pr(static_cast<std::size_t>(stride) * padded_h);
    std::vector<double> pg(pr.size()), pb(pr.size());
    for (int y = 0; y < padded_h; ++y) {
        const int sy = std::clamp(y - r, 0, h - 1);
        for (int x = 0; x < stride; ++x) {
            const int sx = std::clamp(x - r, 0, w - 1);
            const ColorVec& p = image.at(sx, sy);
            const std::size_t i = static_cast<std::size_t>(y) * stride + x;
            pr[i] = p.r;
            pg[i] = p.g;
            pb[i] = p.b;
        }
    }

    const int win = 2 * r + 1;
    std::vector<double> spatial_arg(static_cast<std::size_t>(win) * win);
    const double inv_two_gs2 = 1.0 / (2.0 * params.g_s * params.g_s);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            spatial_arg[static_cast<std::size_t>(dy + r) * win + (dx + r)] =
                -(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) * inv_two_gs2;
        }
    }

    Planes out;
    out.r.resize(image.size());
    out.g.resize(image.size());
    out.b.resize(image.size());

    kernels::BilateralArgs args;
    args.r = pr.data();
    args.g = pg.data();
    args.b = pb.data();
    args.width = w;
    args.height = h;
    args.stride = stride;
    args.radius = r;
    args.spatial_arg = spatial_arg.data();
    args.inv_two_fr2 = 1.0 / (2.0 * params.f_r * params.f_r);
    args.out_r = out.r.data();
    args.out_g = out.g.data();
    args.out_b = out.b.data();

    kernels::active().bilateral(args);
    return from_planes(out, w, h);
}

}  // namespace colorseg
