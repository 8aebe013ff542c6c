#include "colorseg/homography.hpp"

#include <stdexcept>

namespace colorseg {

ColorHomography ColorHomography::from_params(const HomographyParams& p) {
    if (!p.valid()) {
        throw std::invalid_argument("homography parameters out of range: need 0 <= a <= 1 and (2a+1)/3 < b <= 1");
    }
    const double a = p.a, b = p.b;
    const double ab = a * b;
    const double w_rgb = a - b / 2.0 + 0.5;
    const double w_one = -a + 1.5 * b - 0.5;

    ColorHomography h;
    h.h_ = {b,     ab,    ab,    0.0,
            ab,    b,     ab,    0.0,
            ab,    ab,    b,     0.0,
            w_rgb, w_rgb, w_rgb, w_one};
    return h;
}

ColorVec ColorHomography::apply(const ColorVec& p) const {
    const auto& h = h_;
    const double rp = h[0] * p.r + h[1] * p.g + h[2] * p.b + h[3];
    const double gp = h[4] * p.r + h[5] * p.g + h[6] * p.b + h[7];
    const double bp = h[8] * p.r + h[9] * p.g + h[10] * p.b + h[11];
    const double w = h[12] * p.r + h[13] * p.g + h[14] * p.b + h[15];
    if (w <= 1e-12) throw std::domain_error("degenerate colour transform: homogeneous coordinate vanished");
    return {rp / w, gp / w, bp / w};
}

bool ColorHomography::is_identity() const {
    for (int i = 0; i < 16; ++i) {
        const double expected = (i % 5 == 0) ? 1.0 : 0.0;
        if (h_[i] != expected) return false;
    }
    return true;
}

}  // namespace colorseg
