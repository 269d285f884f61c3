#ifndef WAVESPLAT_IMAGE_HPP
#define WAVESPLAT_IMAGE_HPP

#include <cstddef>
#include <vector>

namespace wavesplat {

// H x W x C raster, row-major by (row, column, channel). Ingestion maps 8-bit
// samples to [0,1]; intermediate values may leave that range.
struct ImageBuffer {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> data;

    ImageBuffer() = default;
    ImageBuffer(int h, int w, int c)
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * w * c, 0.0) {}

    double& at(int r, int c, int ch = 0) {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }
    double at(int r, int c, int ch = 0) const {
        return data[(static_cast<std::size_t>(r) * width + c) * channels + ch];
    }

    std::size_t sample_count() const { return data.size(); }
    bool same_shape(const ImageBuffer& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b);

// Sum of absolute horizontal and vertical neighbor differences, all channels.
double total_variation(const ImageBuffer& img);

} // namespace wavesplat

#endif
