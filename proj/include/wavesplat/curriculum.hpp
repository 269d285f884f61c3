#ifndef WAVESPLAT_CURRICULUM_HPP
#define WAVESPLAT_CURRICULUM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wavesplat/filterbank.hpp"
#include "wavesplat/image.hpp"
#include "wavesplat/splat.hpp"

namespace wavesplat {

struct DensifySchedule {
    double grad_threshold = 2e-4;
    int interval = 100;
    int start_iter = 300;
    double end_fraction = 0.7; // of the iteration count
    double scale_split_threshold = 4.0;
    double opacity_floor = 0.005;
};

struct TrainConfig {
    int levels = 2; // 0 disables modulation entirely (plain fitting baseline)
    FilterMode mode = FilterMode::Scale;
    int iterations = 3000;
    double lambda_pr = 0.05;
    double alpha_lr = 1e-4;
    double lambda_ssim = 0.2; // trade-off inside the reconstruction loss
    double init_alpha = 0.0;
    DensifySchedule densify;
    int n0 = 150;
    std::uint64_t seed = 0;
    bool pr_only = false;      // drop the reconstruction adjoint into the wavelet parameters
    bool disable_splat = false; // skip Gaussian fitting (wavelet dynamics only)
    int pr_stride = 1;          // apply the wavelet update every pr_stride iterations
};

struct IterationRow {
    int iter = 0;
    double loss_total = 0.0;
    double loss_recon = 0.0;
    double loss_pr = 0.0;
    double alpha = 0.0;
    int gaussian_count = 0;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct TrainReport {
    std::vector<IterationRow> rows;
    int peak_count = 0; // max over rows of gaussian_count
    double final_psnr = 0.0;
    double final_ssim = 0.0;
    double final_alpha = 0.0;
    ImageBuffer final_render;
};

// One curriculum run: the Gaussians fit the modulated target while the PR
// residual losses (plus, unless pr_only, the reconstruction adjoint) pull the
// wavelet parameters toward perfect reconstruction. Deterministic per seed.
TrainReport train(const TrainConfig& config, const ImageBuffer& target);

struct AblationRow {
    std::string target;
    int levels = 0;
    std::string mode; // "scale", "whole", or "-" for the levels-0 baseline
    std::int64_t seed = 0;
    int peak_gaussians = 0;
    double final_psnr = 0.0;
    double final_ssim = 0.0;
    double final_alpha = 0.0;
};

struct AblationSummary {
    int levels = 0;
    std::string mode;
    int runs = 0;
    double mean_peak = 0.0;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
    double mean_alpha = 0.0;
};

struct AblationTable {
    std::vector<AblationRow> rows;
    std::vector<AblationSummary> summaries; // per (levels, mode), row order
};

struct NamedImage {
    std::string name;
    ImageBuffer image;
};

// Cartesian sweep over targets x levels x modes x seeds. levels = 0 ignores
// the mode axis and is emitted once per (target, seed). Runs execute on up to
// `jobs` workers; the table order is independent of scheduling.
AblationTable ablate(const TrainConfig& base, const std::vector<NamedImage>& targets,
                     const std::vector<int>& levels_set, const std::vector<FilterMode>& modes,
                     const std::vector<std::uint64_t>& seeds, int jobs = 1);

} // namespace wavesplat

#endif
