#include "wavesplat/dwt.hpp"

#include <cassert>
#include <string>

#include "wavesplat/errors.hpp"

namespace wavesplat {

namespace {

// Synthesis kernels with both axes index-reversed: upsample-then-convolve,
// sampled at the delay-compensated phase, reduces to a per-block spread with
// these weights when windows do not overlap.
struct SpreadKernels {
    Kernel2D ll, lh, hl, hh;
};

Kernel2D flipped(const Kernel2D& k) {
    Kernel2D out{k.n, std::vector<double>(k.w.size())};
    for (int u = 0; u < k.n; ++u)
        for (int v = 0; v < k.n; ++v)
            out.w[static_cast<std::size_t>(u) * k.n + v] = k.at(k.n - 1 - u, k.n - 1 - v);
    return out;
}

SpreadKernels spread_kernels(const FilterBank& bank) {
    return SpreadKernels{
        flipped(outer_product(bank.lo_s, bank.lo_s)),
        flipped(outer_product(bank.lo_s, bank.hi_s)),
        flipped(outer_product(bank.hi_s, bank.lo_s)),
        flipped(outer_product(bank.hi_s, bank.hi_s)),
    };
}

void require_even(const ImageBuffer& image) {
    if (image.height % 2 != 0 || image.width % 2 != 0)
        throw OddDimensionError("dwt_forward: dims " + std::to_string(image.height) + "x" +
                                std::to_string(image.width) + " must both be even");
}

// Stride-2 window correlation with an n x n kernel; windows tile the image.
ImageBuffer correlate_windows(const ImageBuffer& image, const Kernel2D& k) {
    assert(k.n == 2);
    const int h = image.height / 2, w = image.width / 2;
    ImageBuffer out(h, w, image.channels);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j)
            for (int ch = 0; ch < image.channels; ++ch) {
                double acc = 0.0;
                for (int u = 0; u < k.n; ++u)
                    for (int v = 0; v < k.n; ++v)
                        acc += k.at(u, v) * image.at(2 * i + u, 2 * j + v, ch);
                out.at(i, j, ch) = acc;
            }
    return out;
}

void spread_accumulate(ImageBuffer& out, const ImageBuffer& subband, const Kernel2D& k) {
    for (int i = 0; i < subband.height; ++i)
        for (int j = 0; j < subband.width; ++j)
            for (int ch = 0; ch < subband.channels; ++ch) {
                const double s = subband.at(i, j, ch);
                for (int u = 0; u < k.n; ++u)
                    for (int v = 0; v < k.n; ++v)
                        out.at(2 * i + u, 2 * j + v, ch) += k.at(u, v) * s;
            }
}

double inner(const ImageBuffer& a, const ImageBuffer& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += a.data[i] * b.data[i];
    return acc;
}

void check_levels_divisibility(const ImageBuffer& image, int levels) {
    if (levels < 1) throw std::invalid_argument("decompose: levels must be >= 1");
    int h = image.height, w = image.width;
    for (int level = 1; level <= levels; ++level) {
        if (h % 2 != 0) throw IndivisibleDimensionError("height", h, level);
        if (w % 2 != 0) throw IndivisibleDimensionError("width", w, level);
        h /= 2;
        w /= 2;
    }
}

// LL chain under the low-pass analysis route only; chain[0] is the input,
// chain[k] the level-k LL. Independent of the high-pass parameters.
std::vector<ImageBuffer> lowpass_chain(const ImageBuffer& image, const FilterBank& bank,
                                       int levels) {
    const Kernel2D k_ll = outer_product(bank.lo_a, bank.lo_a);
    std::vector<ImageBuffer> chain;
    chain.reserve(static_cast<std::size_t>(levels) + 1);
    chain.push_back(image);
    for (int k = 1; k <= levels; ++k) chain.push_back(correlate_windows(chain.back(), k_ll));
    return chain;
}

// Shared reverse sweep for the modulator adjoints: pushes the cotangent
// through the synthesis levels and hands each level's detail cotangents plus
// the matching low-pass source to a sink.
template <typename Sink>
void sweep_detail_cotangents(const ImageBuffer& image, const FilterBank& bank, int levels,
                             const ImageBuffer& cotangent, Sink&& sink) {
    if (!cotangent.same_shape(image))
        throw ShapeMismatchError("modulate_vjp: cotangent dims must equal image dims");
    check_levels_divisibility(image, levels);
    const std::vector<ImageBuffer> chain = lowpass_chain(image, bank, levels);
    const SpreadKernels spread = spread_kernels(bank);
    ImageBuffer cz = cotangent;
    for (int k = 1; k <= levels; ++k) {
        DetailSet cdet{correlate_windows(cz, spread.lh), correlate_windows(cz, spread.hl),
                       correlate_windows(cz, spread.hh)};
        sink(chain[static_cast<std::size_t>(k) - 1], cdet);
        cz = correlate_windows(cz, spread.ll);
    }
}

} // namespace

Kernel2D outer_product(const FilterTaps& rows, const FilterTaps& cols) {
    assert(rows.size() == cols.size());
    const int n = static_cast<int>(rows.size());
    Kernel2D k{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            k.w[static_cast<std::size_t>(u) * n + v] = rows[u] * cols[v];
    return k;
}

AnalysisKernels kernels2d(const FilterBank& bank) {
    const FilterTaps lo = bank.lo_a;
    const FilterTaps hi = bank.effective_high_pass();
    return AnalysisKernels{outer_product(lo, lo), outer_product(lo, hi),
                           outer_product(hi, lo), outer_product(hi, hi)};
}

Subbands dwt_forward(const ImageBuffer& image, const FilterBank& bank) {
    require_even(image);
    const AnalysisKernels k = kernels2d(bank);
    return Subbands{correlate_windows(image, k.ll), correlate_windows(image, k.lh),
                    correlate_windows(image, k.hl), correlate_windows(image, k.hh)};
}

ImageBuffer dwt_inverse(const Subbands& subbands, const FilterBank& bank) {
    if (!subbands.ll.same_shape(subbands.lh) || !subbands.ll.same_shape(subbands.hl) ||
        !subbands.ll.same_shape(subbands.hh))
        throw ShapeMismatchError("dwt_inverse: subband dims differ");
    const SpreadKernels spread = spread_kernels(bank);
    ImageBuffer out(subbands.ll.height * 2, subbands.ll.width * 2, subbands.ll.channels);
    spread_accumulate(out, subbands.ll, spread.ll);
    spread_accumulate(out, subbands.lh, spread.lh);
    spread_accumulate(out, subbands.hl, spread.hl);
    spread_accumulate(out, subbands.hh, spread.hh);
    return out;
}

SubbandPyramid decompose(const ImageBuffer& image, const FilterBank& bank, int levels) {
    check_levels_divisibility(image, levels);
    SubbandPyramid pyramid;
    pyramid.levels = levels;
    ImageBuffer current = image;
    for (int k = 1; k <= levels; ++k) {
        Subbands sub = dwt_forward(current, bank);
        pyramid.details.push_back(DetailSet{std::move(sub.lh), std::move(sub.hl), std::move(sub.hh)});
        current = std::move(sub.ll);
    }
    pyramid.approx = std::move(current);
    return pyramid;
}

ImageBuffer reconstruct(const SubbandPyramid& pyramid, const FilterBank& bank) {
    ImageBuffer current = pyramid.approx;
    for (int k = pyramid.levels; k >= 1; --k) {
        const DetailSet& det = pyramid.details[static_cast<std::size_t>(k) - 1];
        current = dwt_inverse(Subbands{std::move(current), det.lh, det.hl, det.hh}, bank);
    }
    return current;
}

ImageBuffer modulate(const ImageBuffer& image, const FilterBank& bank, int levels) {
    return reconstruct(decompose(image, bank, levels), bank);
}

double modulate_vjp(const ImageBuffer& image, const FilterBank& bank, int levels,
                    const ImageBuffer& cotangent) {
    if (bank.mode != FilterMode::Scale)
        throw ModeMismatchError("modulate_vjp: scalar adjoint requires Scale mode");
    // Detail subbands are polynomial in alpha (LH, HL linear; HH quadratic)
    // while the LL chain is alpha-free, so the derivative reconstructs from
    // the base-filter details alone.
    const Kernel2D k_lh = outer_product(bank.lo_a, bank.hi_a_base);
    const Kernel2D k_hl = outer_product(bank.hi_a_base, bank.lo_a);
    const Kernel2D k_hh = outer_product(bank.hi_a_base, bank.hi_a_base);
    double d_alpha = 0.0;
    sweep_detail_cotangents(image, bank, levels, cotangent,
                            [&](const ImageBuffer& source, const DetailSet& cdet) {
                                d_alpha += inner(cdet.lh, correlate_windows(source, k_lh));
                                d_alpha += inner(cdet.hl, correlate_windows(source, k_hl));
                                d_alpha += 2.0 * bank.alpha *
                                           inner(cdet.hh, correlate_windows(source, k_hh));
                            });
    return d_alpha;
}

FilterTaps modulate_vjp_taps(const ImageBuffer& image, const FilterBank& bank, int levels,
                             const ImageBuffer& cotangent) {
    if (bank.mode != FilterMode::Whole)
        throw ModeMismatchError("modulate_vjp_taps: per-tap adjoint requires Whole mode");
    const std::size_t n = bank.hi_a_free.size();
    FilterTaps grads(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        FilterTaps basis(n, 0.0);
        basis[t] = 1.0;
        const Kernel2D k_lh = outer_product(bank.lo_a, basis);
        const Kernel2D k_hl = outer_product(basis, bank.lo_a);
        Kernel2D k_hh = outer_product(basis, bank.hi_a_free);
        const Kernel2D k_hh2 = outer_product(bank.hi_a_free, basis);
        for (std::size_t i = 0; i < k_hh.w.size(); ++i) k_hh.w[i] += k_hh2.w[i];
        sweep_detail_cotangents(image, bank, levels, cotangent,
                                [&](const ImageBuffer& source, const DetailSet& cdet) {
                                    grads[t] += inner(cdet.lh, correlate_windows(source, k_lh));
                                    grads[t] += inner(cdet.hl, correlate_windows(source, k_hl));
                                    grads[t] += inner(cdet.hh, correlate_windows(source, k_hh));
                                });
    }
    return grads;
}

} // namespace wavesplat
