#include "colorseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "colorseg/rng.hpp"

namespace colorseg {

SceneKind scene_kind_from_string(const std::string& name) {
    if (name == "mondrian-rank0") return SceneKind::mondrian_rank0;
    if (name == "shaded-rank1") return SceneKind::shaded_rank1;
    if (name == "dichromatic-rank2") return SceneKind::dichromatic_rank2;
    if (name == "offscale-stripe") return SceneKind::offscale_stripe;
    throw std::invalid_argument("unknown scene kind: " + name);
}

std::string to_string(SceneKind kind) {
    switch (kind) {
        case SceneKind::mondrian_rank0: return "mondrian-rank0";
        case SceneKind::shaded_rank1: return "shaded-rank1";
        case SceneKind::dichromatic_rank2: return "dichromatic-rank2";
        case SceneKind::offscale_stripe: return "offscale-stripe";
    }
    return "?";
}

void SynthSceneSpec::validate() const {
    if (width < 16 || height < 16) throw std::invalid_argument("scene size must be at least 16x16");
    if (noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be >= 0");
    if (segments < 1) throw std::invalid_argument("segment count must be >= 1");
    if (kind != SceneKind::offscale_stripe && segments > width / 4) {
        throw std::invalid_argument("too many segments for the image width");
    }
}

namespace {

Rgb8 quantize(const ColorVec& v) {
    const auto q = [](double c) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
    };
    return {q(v.r), q(v.g), q(v.b)};
}

ColorVec with_noise(const ColorVec& v, double sigma_norm, Rng& rng) {
    if (sigma_norm <= 0.0) return v;
    return {v.r + sigma_norm * rng.normal(), v.g + sigma_norm * rng.normal(),
            v.b + sigma_norm * rng.normal()};
}

/// Colours mutually separated by at least min_dist, components in [lo, hi].
std::vector<ColorVec> sample_palette(Rng& rng, int k, double lo, double hi, double min_dist) {
    std::vector<ColorVec> palette;
    int stale = 0;
    while (static_cast<int>(palette.size()) < k) {
        const ColorVec c = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
        bool ok = true;
        for (const ColorVec& p : palette) {
            if (norm(c - p) < min_dist) {
                ok = false;
                break;
            }
        }
        if (ok) {
            palette.push_back(c);
            stale = 0;
        } else if (++stale > 4000) {
            palette.clear();  // unlucky start; resample the whole palette
            stale = 0;
        }
    }
    return palette;
}

/// Body-colour directions with pairwise angular separation.
std::vector<ColorVec> sample_directions(Rng& rng, int k, double lo, double hi) {
    std::vector<ColorVec> palette;
    int stale = 0;
    while (static_cast<int>(palette.size()) < k) {
        const ColorVec c = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
        const double len = norm(c);
        if (len < 0.4) continue;
        bool ok = true;
        for (const ColorVec& p : palette) {
            const double cosang = dot(c, p) / (len * norm(p));
            if (cosang > 0.90 || norm(c - p) < 0.45) {
                ok = false;
                break;
            }
        }
        if (ok) {
            palette.push_back(c);
            stale = 0;
        } else if (++stale > 4000) {
            palette.clear();
            stale = 0;
        }
    }
    return palette;
}

/// Cut positions splitting `extent` into `parts` jittered stripes.
std::vector<int> jittered_cuts(Rng& rng, int extent, int parts) {
    std::vector<int> cuts(static_cast<std::size_t>(parts) + 1);
    cuts[0] = 0;
    cuts[static_cast<std::size_t>(parts)] = extent;
    const double step = static_cast<double>(extent) / parts;
    for (int i = 1; i < parts; ++i) {
        const double jitter = rng.uniform(-step / 8.0, step / 8.0);
        cuts[static_cast<std::size_t>(i)] = static_cast<int>(std::lround(i * step + jitter));
    }
    return cuts;
}

void grid_shape(int k, int& rows, int& cols) {
    rows = 1;
    for (int r = 1; r * r <= k; ++r) {
        if (k % r == 0) rows = r;
    }
    cols = k / rows;
    if (rows > cols) std::swap(rows, cols);
}

SynthScene make_mondrian(const SynthSceneSpec& spec, Rng& rng) {
    int rows = 1, cols = spec.segments;
    grid_shape(spec.segments, rows, cols);
    const auto row_cuts = jittered_cuts(rng, spec.height, rows);
    const auto col_cuts = jittered_cuts(rng, spec.width, cols);
    const auto palette = sample_palette(rng, spec.segments, 0.15, 0.85, 60.0 / 255.0);
    const double sigma = spec.noise_sigma / 255.0;

    SynthScene scene{Image<Rgb8>(spec.width, spec.height), LabelMap(spec.width, spec.height)};
    for (int y = 0; y < spec.height; ++y) {
        const int ry = static_cast<int>(std::upper_bound(row_cuts.begin(), row_cuts.end(), y) -
                                        row_cuts.begin()) - 1;
        for (int x = 0; x < spec.width; ++x) {
            const int cx = static_cast<int>(std::upper_bound(col_cuts.begin(), col_cuts.end(), x) -
                                            col_cuts.begin()) - 1;
            const int cell = ry * cols + cx;
            scene.image.at(x, y) = quantize(with_noise(palette[static_cast<std::size_t>(cell)], sigma, rng));
            scene.gt_labels.at(x, y) = cell + 1;
        }
    }
    return scene;
}

SynthScene make_shaded(const SynthSceneSpec& spec, Rng& rng, bool with_highlight) {
    const int k = spec.segments;
    const auto cuts = jittered_cuts(rng, spec.width, k);
    const auto palette = with_highlight ? sample_directions(rng, k, 0.10, 0.50)
                                        : sample_directions(rng, k, 0.05, 0.95);
    const double sigma = spec.noise_sigma / 255.0;

    struct Highlight {
        double cx, cy, s2, peak;
    };
    std::vector<Highlight> highlights;
    if (with_highlight) {
        for (int i = 0; i < k; ++i) {
            const double band_w = static_cast<double>(cuts[static_cast<std::size_t>(i) + 1] -
                                                      cuts[static_cast<std::size_t>(i)]);
            // Sized so the spot stays inside the band: the skirt is clipped
            // to zero below one quantisation step (at ~3 sigma here).
            Highlight hl;
            hl.cx = cuts[static_cast<std::size_t>(i)] + band_w * rng.uniform(0.40, 0.60);
            hl.cy = spec.height * rng.uniform(0.30, 0.70);
            const double r = band_w / 9.0;
            hl.s2 = 2.0 * r * r;
            hl.peak = rng.uniform(0.30, 0.45);
            highlights.push_back(hl);
        }
    }

    SynthScene scene{Image<Rgb8>(spec.width, spec.height), LabelMap(spec.width, spec.height)};
    for (int y = 0; y < spec.height; ++y) {
        const double t = 0.2 + 0.8 * static_cast<double>(y) / (spec.height - 1);
        for (int x = 0; x < spec.width; ++x) {
            const int band = static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) -
                                              cuts.begin()) - 1;
            ColorVec v = palette[static_cast<std::size_t>(band)] * t;
            if (with_highlight) {
                const Highlight& hl = highlights[static_cast<std::size_t>(band)];
                const double dx = x - hl.cx, dy = y - hl.cy;
                double s = hl.peak * std::exp(-(dx * dx + dy * dy) / hl.s2);
                if (s < 1.0 / 255.0) s = 0.0;
                v += ColorVec{s, s, s};
            }
            scene.image.at(x, y) = quantize(with_noise(v, sigma, rng));
            scene.gt_labels.at(x, y) = band + 1;
        }
    }
    return scene;
}

SynthScene make_offscale_stripe(const SynthSceneSpec& spec, Rng& rng) {
    const ColorVec body = {rng.uniform(0.15, 0.55), rng.uniform(0.15, 0.55), rng.uniform(0.15, 0.55)};
    const int stripe_w = std::max(4, spec.width / 16);
    const int stripe_c = static_cast<int>(std::lround(spec.width * rng.uniform(0.42, 0.58)));
    const int s0 = std::clamp(stripe_c - stripe_w / 2, 2, spec.width - stripe_w - 2);
    const int s1 = s0 + stripe_w;
    const double sigma = spec.noise_sigma / 255.0;

    SynthScene scene{Image<Rgb8>(spec.width, spec.height), LabelMap(spec.width, spec.height)};
    for (int y = 0; y < spec.height; ++y) {
        const double t = 0.3 + 0.7 * static_cast<double>(y) / (spec.height - 1);
        for (int x = 0; x < spec.width; ++x) {
            if (x >= s0 && x < s1) {
                scene.image.at(x, y) = {255, 255, 255};  // clipped highlight stripe
            } else {
                scene.image.at(x, y) = quantize(with_noise(body * t, sigma, rng));
            }
            scene.gt_labels.at(x, y) = 1;
        }
    }
    return scene;
}

}  // namespace

SynthScene generate_scene(const SynthSceneSpec& spec) {
    spec.validate();
    Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL + spec.seed);
    switch (spec.kind) {
        case SceneKind::mondrian_rank0: return make_mondrian(spec, rng);
        case SceneKind::shaded_rank1: return make_shaded(spec, rng, false);
        case SceneKind::dichromatic_rank2: return make_shaded(spec, rng, true);
        case SceneKind::offscale_stripe: return make_offscale_stripe(spec, rng);
    }
    throw std::invalid_argument("unknown scene kind");
}

}  // namespace colorseg
