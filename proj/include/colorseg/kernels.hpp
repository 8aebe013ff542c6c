#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace colorseg::kernels {

/// Inputs for one whole-image bilateral pass. Colour planes are padded by
/// `radius` on every side with clamped border values so the window loop needs
/// no bounds checks; `stride` is the padded row pitch. `spatial_arg` holds the
/// precomputed -(dx^2+dy^2)/(2 g_s^2) term for each of the (2r+1)^2 window
/// offsets, so a tap's weight is exp(spatial_arg[k] - |dc|^2 * inv_two_fr2).
struct BilateralArgs {
    const double* r = nullptr;
    const double* g = nullptr;
    const double* b = nullptr;
    int width = 0;
    int height = 0;
    int stride = 0;
    int radius = 0;
    const double* spatial_arg = nullptr;
    double inv_two_fr2 = 0.0;
    double* out_r = nullptr;
    double* out_g = nullptr;
    double* out_b = nullptr;
};

/// One kernel flavour: a scalar reference build plus (where the CPU allows)
/// vector builds that must agree with the scalar one to ~1e-10.
struct Ops {
    const char* name;
    void (*bilateral)(const BilateralArgs& args);
    /// Applies a row-major 4x4 homography to n colour points held as planes
    /// and performs the perspective divide. The caller guarantees the
    /// homogeneous coordinate stays positive over the input range.
    void (*homography_apply)(const double* h, const double* r, const double* g, const double* b,
                             std::size_t n, double* out_r, double* out_g, double* out_b);
};

/// Active kernel set; auto-detected from CPU features on first use.
const Ops& active();

/// Force a flavour by name ("auto", "scalar", "avx2"). Throws
/// std::invalid_argument for unknown names and std::runtime_error when the
/// CPU lacks the requested feature set.
void select(const std::string& name);

/// Flavours usable on this machine.
std::vector<std::string> available();

const Ops& scalar_ops();

}  // namespace colorseg::kernels
