#ifndef WAVESPLAT_SPLAT_HPP
#define WAVESPLAT_SPLAT_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "wavesplat/image.hpp"
#include "wavesplat/rng.hpp"

namespace wavesplat {

// Anisotropic 2D Gaussian primitive. Covariance is realized as
// R(rotation) * diag(exp(log_scale))^2 * R(rotation)^T; mean is in pixel
// units with x along columns and y along rows.
struct Gaussian2D {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> log_scale{0.0, 0.0};
    double rotation = 0.0;
    std::array<double, 3> color{0.0, 0.0, 0.0};
    double opacity_logit = 0.0;
};

// Per-parameter gradients, same layout as Gaussian2D.
using GaussianGrads = std::vector<Gaussian2D>;

struct GaussianCloud {
    std::vector<Gaussian2D> gaussians;
    std::vector<double> grad_accum; // accumulated positional-gradient magnitude
    std::vector<int> grad_count;
    int channels = 3;
    int peak_count = 0;

    int size() const { return static_cast<int>(gaussians.size()); }
    void accumulate_gradients(const GaussianGrads& grads);
};

// n0 Gaussians with means uniform over the raster, isotropic scale
// diagonal/sqrt(n0), colors looked up from the target at the mean pixel,
// opacity logit zero. Deterministic for a fixed seed.
GaussianCloud init_cloud(const ImageBuffer& target, int n0, std::uint64_t seed);

// Additive accumulation: sigmoid(opacity) * color * exp(-mahalanobis^2 / 2)
// per channel. Contributions are truncated to exactly zero beyond three
// standard deviations (mahalanobis^2 > 9).
ImageBuffer render(const GaussianCloud& cloud, int h, int w);

// d<cotangent, render>/d(params); analytic, mirrors render's truncation.
GaussianGrads render_backward(const GaussianCloud& cloud, int h, int w,
                              const ImageBuffer& cotangent);

struct DensifyParams {
    double grad_threshold = 2e-4;       // on the mean accumulated positional grad
    double scale_split_threshold = 4.0; // px; larger Gaussians split, smaller clone
    double opacity_floor = 0.005;
    double split_scale_shrink = 1.6;
};

struct DensifyOutcome {
    int cloned = 0;
    int split = 0;
    int pruned = 0;
    // parent[i] = index of the pre-call Gaussian whose optimizer state the
    // post-call Gaussian i inherits, or -1 for a fresh one.
    std::vector<int> parent;
};

// Clone-or-split over-threshold Gaussians, prune transparent ones, reset
// gradient accumulators, update peak_count. Split positions are sampled from
// the parent Gaussian via rng.
DensifyOutcome densify_and_prune(GaussianCloud& cloud, const DensifyParams& params, Rng& rng);

struct AdamRates {
    double mean = 2e-3;
    double scale_rotation = 5e-3;
    double color = 2.5e-3;
    double opacity = 5e-2;
};

// Adam with per-parameter-class step sizes. Moment arrays follow the cloud
// through densification via DensifyOutcome::parent.
class CloudAdam {
  public:
    void step(GaussianCloud& cloud, const GaussianGrads& grads, const AdamRates& rates);
    void remap(const DensifyOutcome& outcome);

  private:
    void ensure_size(std::size_t n);
    std::vector<Gaussian2D> m_, v_;
    long t_ = 0;
};

double sigmoid(double x);

} // namespace wavesplat

#endif
