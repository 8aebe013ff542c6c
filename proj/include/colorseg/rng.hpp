#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace colorseg {

/// mt19937_64 with hand-rolled distributions. The standard pins the engine's
/// output sequence but not the library distributions, so uniform/normal are
/// implemented here to keep seeded scenes bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n > 0.
    int uniform_int(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

    /// Standard normal via Box-Muller; second value cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace colorseg
