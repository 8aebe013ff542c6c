#include <cmath>

#include "colorseg/kernels.hpp"

namespace colorseg::kernels {

namespace {

void bilateral_scalar(const BilateralArgs& a) {
    const int r = a.radius;
    const int win = 2 * r + 1;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            const std::size_t c = static_cast<std::size_t>(y + r) * a.stride + (x + r);
            const double cr = a.r[c], cg = a.g[c], cb = a.b[c];
            double wsum = 0.0, sr = 0.0, sg = 0.0, sb = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const std::size_t row = c + static_cast<std::size_t>(dy) * a.stride;
                const double* sp = a.spatial_arg + static_cast<std::size_t>(dy + r) * win;
                for (int dx = -r; dx <= r; ++dx) {
                    const std::size_t i = row + dx;
                    const double dr = a.r[i] - cr;
                    const double dg = a.g[i] - cg;
                    const double db = a.b[i] - cb;
                    const double dist2 = dr * dr + dg * dg + db * db;
                    const double w = std::exp(sp[dx + r] - dist2 * a.inv_two_fr2);
                    wsum += w;
                    sr += w * a.r[i];
                    sg += w * a.g[i];
                    sb += w * a.b[i];
                }
            }
            const std::size_t o = static_cast<std::size_t>(y) * a.width + x;
            a.out_r[o] = sr / wsum;
            a.out_g[o] = sg / wsum;
            a.out_b[o] = sb / wsum;
        }
    }
}

void homography_scalar(const double* h, const double* r, const double* g, const double* b,
                       std::size_t n, double* out_r, double* out_g, double* out_b) {
    for (std::size_t i = 0; i < n; ++i) {
        const double rp = h[0] * r[i] + h[1] * g[i] + h[2] * b[i] + h[3];
        const double gp = h[4] * r[i] + h[5] * g[i] + h[6] * b[i] + h[7];
        const double bp = h[8] * r[i] + h[9] * g[i] + h[10] * b[i] + h[11];
        const double w = h[12] * r[i] + h[13] * g[i] + h[14] * b[i] + h[15];
        const double inv_w = 1.0 / w;
        out_r[i] = rp * inv_w;
        out_g[i] = gp * inv_w;
        out_b[i] = bp * inv_w;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {"scalar", bilateral_scalar, homography_scalar};
    return ops;
}

}  // namespace colorseg::kernels
