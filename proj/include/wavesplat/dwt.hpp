#ifndef WAVESPLAT_DWT_HPP
#define WAVESPLAT_DWT_HPP

#include <vector>

#include "wavesplat/filterbank.hpp"
#include "wavesplat/image.hpp"

namespace wavesplat {

// Square 2D kernel stored row-major; built as the outer product of 1D taps,
// first factor along rows (vertical axis).
struct Kernel2D {
    int n = 0;
    std::vector<double> w;
    double at(int u, int v) const { return w[static_cast<std::size_t>(u) * n + v]; }
};

Kernel2D outer_product(const FilterTaps& rows, const FilterTaps& cols);

struct AnalysisKernels {
    Kernel2D ll, lh, hl, hh;
};

// Analysis kernels from the bank's low-pass and effective high-pass taps.
AnalysisKernels kernels2d(const FilterBank& bank);

struct Subbands {
    ImageBuffer ll, lh, hl, hh;
};

// One analysis level: each subband value is the kernel-weighted sum over the
// non-overlapping 2x2 window at rows {2i,2i+1}, cols {2j,2j+1}, per channel.
// Throws OddDimensionError when height or width is odd.
Subbands dwt_forward(const ImageBuffer& image, const FilterBank& bank);

// One synthesis level: upsample-and-filter with the synthesis taps, delay
// compensated so that a PR-satisfying bank makes this the exact inverse of
// dwt_forward. Throws ShapeMismatchError when subband dims differ.
ImageBuffer dwt_inverse(const Subbands& subbands, const FilterBank& bank);

struct DetailSet {
    ImageBuffer lh, hl, hh;
};

struct SubbandPyramid {
    int levels = 0;
    std::vector<DetailSet> details; // details[k-1] holds level-k rasters (H/2^k x W/2^k)
    ImageBuffer approx;             // deepest LL
};

// Recursive analysis of the LL chain. Throws IndivisibleDimensionError naming
// the offending axis and level when dims do not divide by 2^levels.
SubbandPyramid decompose(const ImageBuffer& image, const FilterBank& bank, int levels);

// Applies dwt_inverse from the deepest level outward.
ImageBuffer reconstruct(const SubbandPyramid& pyramid, const FilterBank& bank);

// reconstruct(decompose(image)): identity at PR, per-block means as the
// effective high-pass goes to zero. Linear in the image for a fixed bank.
ImageBuffer modulate(const ImageBuffer& image, const FilterBank& bank, int levels);

// <cotangent, d modulate / d alpha> for a Scale-mode bank.
// Throws ModeMismatchError in Whole mode (use modulate_vjp_taps instead).
double modulate_vjp(const ImageBuffer& image, const FilterBank& bank, int levels,
                    const ImageBuffer& cotangent);

// Per-tap adjoint <cotangent, d modulate / d hi_a_free[k]> for a Whole-mode bank.
FilterTaps modulate_vjp_taps(const ImageBuffer& image, const FilterBank& bank, int levels,
                             const ImageBuffer& cotangent);

} // namespace wavesplat

#endif
