#pragma once

#include <cmath>
#include <cstdint>

namespace colorseg {

/// A point in 3-D colour space. Raw 8-bit pixels are normalised to [0,1]
/// before any processing; after filtering and the colour-space transform the
/// components are unconstrained reals.
struct ColorVec {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double& operator[](int i) { return (&r)[i]; }
    double operator[](int i) const { return (&r)[i]; }

    ColorVec& operator+=(const ColorVec& o) {
        r += o.r;
        g += o.g;
        b += o.b;
        return *this;
    }
    ColorVec& operator-=(const ColorVec& o) {
        r -= o.r;
        g -= o.g;
        b -= o.b;
        return *this;
    }
    ColorVec& operator*=(double k) {
        r *= k;
        g *= k;
        b *= k;
        return *this;
    }

    friend ColorVec operator+(ColorVec a, const ColorVec& b) { return a += b; }
    friend ColorVec operator-(ColorVec a, const ColorVec& b) { return a -= b; }
    friend ColorVec operator*(ColorVec a, double k) { return a *= k; }
    friend ColorVec operator*(double k, ColorVec a) { return a *= k; }
    friend ColorVec operator/(ColorVec a, double k) { return a *= (1.0 / k); }
};

/// Directions and eigenvectors share the colour-space vector type.
using Vec3 = ColorVec;

inline double dot(const Vec3& a, const Vec3& b) {
    return a.r * b.r + a.g * b.g + a.b * b.b;
}

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.g * b.b - a.b * b.g, a.b * b.r - a.r * b.b, a.r * b.g - a.g * b.r};
}

inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

/// Pixel brightness l = (R+G+B)/3, always measured in the colour space the
/// vector currently lives in.
inline double brightness(const ColorVec& p) { return (p.r + p.g + p.b) / 3.0; }

/// 8-bit interleaved pixel as decoded from PNG/PPM input.
struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

inline ColorVec normalize_u8(const Rgb8& p) {
    return {p.r / 255.0, p.g / 255.0, p.b / 255.0};
}

}  // namespace colorseg
