#ifndef WAVESPLAT_ERRORS_HPP
#define WAVESPLAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wavesplat {

// Image height or width is odd where a stride-2 analysis step needs it even.
struct OddDimensionError : std::invalid_argument {
    explicit OddDimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Image dimension is not divisible by 2^levels; names the offending axis and level.
struct IndivisibleDimensionError : std::invalid_argument {
    IndivisibleDimensionError(const std::string& axis, int extent, int level)
        : std::invalid_argument(axis + " extent " + std::to_string(extent) +
                                " is odd at decomposition level " + std::to_string(level)),
          axis_name(axis), axis_extent(extent), offending_level(level) {}
    std::string axis_name;
    int axis_extent;
    int offending_level;
};

struct ShapeMismatchError : std::invalid_argument {
    explicit ShapeMismatchError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operation requested for the wrong filter-bank parameterization.
struct ModeMismatchError : std::logic_error {
    explicit ModeMismatchError(const std::string& msg) : std::logic_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace wavesplat

#endif
