#pragma once

#include <array>

#include "colorseg/color.hpp"

namespace colorseg {

/// Parameters of the projective colour-space transform. `a` transfers
/// saturation toward the maximally saturated cube corners, `b` compresses the
/// brightness diagonal. The valid region keeps the homogeneous coordinate of
/// every unit-cube point strictly positive; at b = (2a+1)/3 the transform is
/// undefined at the origin, hence the strict lower bound.
struct HomographyParams {
    double a = 0.0;
    double b = 1.0;

    bool valid() const {
        return a >= 0.0 && a <= 1.0 && b > (2.0 * a + 1.0) / 3.0 && b <= 1.0;
    }
};

/// 4x4 homography acting on homogeneous colour coordinates (R, G, B, 1).
/// Fixes the origin, maps white (1,1,1) to (b,b,b) and each saturated primary
/// (1,0,0) to (1,a,a) and its permutations.
class ColorHomography {
public:
    /// Throws std::invalid_argument when the parameters are out of range.
    static ColorHomography from_params(const HomographyParams& p);

    /// Homogeneous multiply followed by perspective divide. Input is expected
    /// inside the unit cube; throws std::domain_error when the homogeneous
    /// coordinate W falls below 1e-12.
    ColorVec apply(const ColorVec& p) const;

    /// Row-major 4x4 coefficients.
    const std::array<double, 16>& matrix() const { return h_; }

    bool is_identity() const;

private:
    std::array<double, 16> h_{};
};

inline ColorHomography build_homography(const HomographyParams& p) {
    return ColorHomography::from_params(p);
}

inline ColorVec apply_homography(const ColorHomography& h, const ColorVec& p) {
    return h.apply(p);
}

}  // namespace colorseg
