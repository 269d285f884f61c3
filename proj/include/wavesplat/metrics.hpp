#ifndef WAVESPLAT_METRICS_HPP
#define WAVESPLAT_METRICS_HPP

#include "wavesplat/image.hpp"

namespace wavesplat {

// 10*log10(1/MSE) for unit dynamic range, capped at 99 (the cap also covers
// MSE below 1e-10). Throws ShapeMismatchError on shape differences.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

// Mean structural similarity over valid 11x11 Gaussian windows (sigma 1.5,
// standard stabilization constants for unit dynamic range), channels
// processed independently. The window shrinks to the largest odd size that
// fits when an image is smaller than 11 on a side.
double ssim(const ImageBuffer& a, const ImageBuffer& b);

struct SsimResult {
    double value = 0.0;
    ImageBuffer d_a; // d(mean ssim)/d(a), filled when requested
    ImageBuffer d_b; // d(mean ssim)/d(b), filled when requested
};

SsimResult ssim_with_grad(const ImageBuffer& a, const ImageBuffer& b, bool want_da,
                          bool want_db);

// (1-lambda) * mean-absolute-error + lambda * (1 - ssim)/2.
double recon_loss(const ImageBuffer& rendered, const ImageBuffer& target, double lambda);

struct ReconLossGrads {
    double loss = 0.0;
    double l1 = 0.0;
    double dssim = 0.0;
    ImageBuffer d_rendered;
    ImageBuffer d_target; // filled when requested
};

ReconLossGrads recon_loss_grad(const ImageBuffer& rendered, const ImageBuffer& target,
                               double lambda, bool want_d_target);

} // namespace wavesplat

#endif
