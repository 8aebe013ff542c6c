#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace colorseg {

/// Dense row-major 2-D grid.
template <class T>
struct Image {
    int width = 0;
    int height = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, T fill = T{}) : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    bool empty() const { return data.empty(); }
    std::size_t size() const { return data.size(); }

    T& at(int x, int y) {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return data[static_cast<std::size_t>(y) * width + x];
    }
    const T& at(int x, int y) const {
        assert(x >= 0 && x < width && y >= 0 && y < height);
        return data[static_cast<std::size_t>(y) * width + x];
    }

    T& operator[](std::size_t i) { return data[i]; }
    const T& operator[](std::size_t i) const { return data[i]; }

    friend bool operator==(const Image&, const Image&) = default;
};

using LabelMap = Image<std::int32_t>;

}  // namespace colorseg
