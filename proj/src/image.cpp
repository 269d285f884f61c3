#include "wavesplat/image.hpp"

#include <cmath>

#include "wavesplat/errors.hpp"

namespace wavesplat {

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
    if (!a.same_shape(b)) throw ShapeMismatchError("max_abs_diff: shapes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double total_variation(const ImageBuffer& img) {
    double tv = 0.0;
    for (int ch = 0; ch < img.channels; ++ch) {
        for (int r = 0; r < img.height; ++r)
            for (int c = 0; c + 1 < img.width; ++c)
                tv += std::abs(img.at(r, c + 1, ch) - img.at(r, c, ch));
        for (int r = 0; r + 1 < img.height; ++r)
            for (int c = 0; c < img.width; ++c)
                tv += std::abs(img.at(r + 1, c, ch) - img.at(r, c, ch));
    }
    return tv;
}

} // namespace wavesplat
