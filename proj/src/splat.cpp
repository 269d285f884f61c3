#include "wavesplat/splat.hpp"

#include <algorithm>
#include <cmath>

#include "wavesplat/parallel.hpp"

namespace wavesplat {

namespace {

constexpr double kMahalanobisCutoffSq = 9.0; // 3 sigma

struct GaussianFrame {
    double mx, my;     // mean
    double c, s;       // cos/sin of rotation
    double inv_s1_sq, inv_s2_sq;
    double weight;     // sigmoid(opacity_logit)
    int col_lo, col_hi, row_lo, row_hi;
    bool empty;
};

GaussianFrame make_frame(const Gaussian2D& g, int h, int w) {
    GaussianFrame f{};
    f.mx = g.mean[0];
    f.my = g.mean[1];
    f.c = std::cos(g.rotation);
    f.s = std::sin(g.rotation);
    const double s1 = std::exp(g.log_scale[0]);
    const double s2 = std::exp(g.log_scale[1]);
    f.inv_s1_sq = 1.0 / (s1 * s1);
    f.inv_s2_sq = 1.0 / (s2 * s2);
    f.weight = sigmoid(g.opacity_logit);
    // Axis-aligned extent of the 3-sigma ellipse.
    const double ex = 3.0 * std::sqrt(f.c * f.c * s1 * s1 + f.s * f.s * s2 * s2);
    const double ey = 3.0 * std::sqrt(f.s * f.s * s1 * s1 + f.c * f.c * s2 * s2);
    f.col_lo = std::max(0, static_cast<int>(std::floor(f.mx - ex - 0.5)));
    f.col_hi = std::min(w - 1, static_cast<int>(std::ceil(f.mx + ex - 0.5)));
    f.row_lo = std::max(0, static_cast<int>(std::floor(f.my - ey - 0.5)));
    f.row_hi = std::min(h - 1, static_cast<int>(std::ceil(f.my + ey - 0.5)));
    f.empty = f.col_lo > f.col_hi || f.row_lo > f.row_hi;
    return f;
}

} // namespace

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

void GaussianCloud::accumulate_gradients(const GaussianGrads& grads) {
    for (std::size_t i = 0; i < gaussians.size(); ++i) {
        const double gx = grads[i].mean[0], gy = grads[i].mean[1];
        grad_accum[i] += std::sqrt(gx * gx + gy * gy);
        grad_count[i] += 1;
    }
}

GaussianCloud init_cloud(const ImageBuffer& target, int n0, std::uint64_t seed) {
    Rng rng(seed);
    GaussianCloud cloud;
    cloud.channels = target.channels;
    const double diag = std::hypot(static_cast<double>(target.height),
                                   static_cast<double>(target.width));
    const double scale0 = diag / std::sqrt(static_cast<double>(n0));
    cloud.gaussians.reserve(static_cast<std::size_t>(n0));
    for (int i = 0; i < n0; ++i) {
        Gaussian2D g;
        g.mean[0] = rng.uniform(0.0, static_cast<double>(target.width));
        g.mean[1] = rng.uniform(0.0, static_cast<double>(target.height));
        g.log_scale = {std::log(scale0), std::log(scale0)};
        g.rotation = 0.0;
        const int r = std::min(target.height - 1, static_cast<int>(g.mean[1]));
        const int c = std::min(target.width - 1, static_cast<int>(g.mean[0]));
        for (int ch = 0; ch < target.channels; ++ch) g.color[static_cast<std::size_t>(ch)] = target.at(r, c, ch);
        g.opacity_logit = 0.0;
        cloud.gaussians.push_back(g);
    }
    cloud.grad_accum.assign(static_cast<std::size_t>(n0), 0.0);
    cloud.grad_count.assign(static_cast<std::size_t>(n0), 0);
    cloud.peak_count = n0;
    return cloud;
}

ImageBuffer render(const GaussianCloud& cloud, int h, int w) {
    ImageBuffer out(h, w, cloud.channels);
    std::vector<GaussianFrame> frames(cloud.gaussians.size());
    for (std::size_t i = 0; i < cloud.gaussians.size(); ++i)
        frames[i] = make_frame(cloud.gaussians[i], h, w);
    // Row-parallel; each pixel accumulates in Gaussian index order, so the
    // result does not depend on the thread partitioning.
    parallel_for(0, static_cast<std::size_t>(h), [&](std::size_t r_lo, std::size_t r_hi) {
        for (std::size_t r = r_lo; r < r_hi; ++r) {
            const int row = static_cast<int>(r);
            const double py = row + 0.5;
            for (std::size_t i = 0; i < frames.size(); ++i) {
                const GaussianFrame& f = frames[i];
                if (f.empty || row < f.row_lo || row > f.row_hi) continue;
                const Gaussian2D& g = cloud.gaussians[i];
                const double dy = py - f.my;
                for (int col = f.col_lo; col <= f.col_hi; ++col) {
                    const double dx = col + 0.5 - f.mx;
                    const double e1 = f.c * dx + f.s * dy;
                    const double e2 = -f.s * dx + f.c * dy;
                    const double q = e1 * e1 * f.inv_s1_sq + e2 * e2 * f.inv_s2_sq;
                    if (q > kMahalanobisCutoffSq) continue;
                    const double contrib = f.weight * std::exp(-0.5 * q);
                    for (int ch = 0; ch < cloud.channels; ++ch)
                        out.at(row, col, ch) += contrib * g.color[static_cast<std::size_t>(ch)];
                }
            }
        }
    });
    return out;
}

GaussianGrads render_backward(const GaussianCloud& cloud, int h, int w,
                              const ImageBuffer& cotangent) {
    GaussianGrads grads(cloud.gaussians.size());
    // Gaussian-parallel; each worker writes only its own gradient slots.
    parallel_for(0, cloud.gaussians.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Gaussian2D& g = cloud.gaussians[i];
            const GaussianFrame f = make_frame(g, h, w);
            if (f.empty) continue;
            Gaussian2D acc; // zero-initialized gradient slot
            double d_weight = 0.0;
            for (int row = f.row_lo; row <= f.row_hi; ++row) {
                const double dy = row + 0.5 - f.my;
                for (int col = f.col_lo; col <= f.col_hi; ++col) {
                    const double dx = col + 0.5 - f.mx;
                    const double e1 = f.c * dx + f.s * dy;
                    const double e2 = -f.s * dx + f.c * dy;
                    const double q = e1 * e1 * f.inv_s1_sq + e2 * e2 * f.inv_s2_sq;
                    if (q > kMahalanobisCutoffSq) continue;
                    const double kernel = std::exp(-0.5 * q);
                    double cot_dot_color = 0.0;
                    for (int ch = 0; ch < cloud.channels; ++ch) {
                        const double cot = cotangent.at(row, col, ch);
                        acc.color[static_cast<std::size_t>(ch)] += cot * f.weight * kernel;
                        cot_dot_color += cot * g.color[static_cast<std::size_t>(ch)];
                    }
                    d_weight += cot_dot_color * kernel;
                    const double d_kernel = cot_dot_color * f.weight * kernel; // dL/dE / E * E
                    // dL/dq = -0.5 * dL/dE * E
                    const double dq = -0.5 * d_kernel;
                    const double u1 = e1 * f.inv_s1_sq, u2 = e2 * f.inv_s2_sq;
                    acc.mean[0] += dq * (-2.0) * (u1 * f.c - u2 * f.s);
                    acc.mean[1] += dq * (-2.0) * (u1 * f.s + u2 * f.c);
                    acc.log_scale[0] += dq * (-2.0) * e1 * e1 * f.inv_s1_sq;
                    acc.log_scale[1] += dq * (-2.0) * e2 * e2 * f.inv_s2_sq;
                    acc.rotation += dq * 2.0 * e1 * e2 * (f.inv_s1_sq - f.inv_s2_sq);
                }
            }
            acc.opacity_logit = d_weight * f.weight * (1.0 - f.weight);
            grads[i] = acc;
        }
    });
    return grads;
}

DensifyOutcome densify_and_prune(GaussianCloud& cloud, const DensifyParams& params, Rng& rng) {
    DensifyOutcome outcome;
    std::vector<Gaussian2D> grown;
    std::vector<int> grown_parent;
    grown.reserve(cloud.gaussians.size() * 2);
    for (std::size_t i = 0; i < cloud.gaussians.size(); ++i) {
        const Gaussian2D& g = cloud.gaussians[i];
        const double mean_grad =
            cloud.grad_count[i] > 0 ? cloud.grad_accum[i] / cloud.grad_count[i] : 0.0;
        if (mean_grad <= params.grad_threshold) {
            grown.push_back(g);
            grown_parent.push_back(static_cast<int>(i));
            continue;
        }
        const double max_scale = std::exp(std::max(g.log_scale[0], g.log_scale[1]));
        if (max_scale < params.scale_split_threshold) {
            grown.push_back(g);
            grown_parent.push_back(static_cast<int>(i));
            grown.push_back(g);
            grown_parent.push_back(-1);
            ++outcome.cloned;
        } else {
            const double shrink = std::log(params.split_scale_shrink);
            const double s1 = std::exp(g.log_scale[0]), s2 = std::exp(g.log_scale[1]);
            const double c = std::cos(g.rotation), s = std::sin(g.rotation);
            for (int child = 0; child < 2; ++child) {
                Gaussian2D n = g;
                const double a = rng.normal() * s1, b = rng.normal() * s2;
                n.mean[0] = g.mean[0] + c * a - s * b;
                n.mean[1] = g.mean[1] + s * a + c * b;
                n.log_scale[0] -= shrink;
                n.log_scale[1] -= shrink;
                grown.push_back(n);
                grown_parent.push_back(-1);
            }
            ++outcome.split;
        }
    }
    cloud.peak_count = std::max(cloud.peak_count, static_cast<int>(grown.size()));

    std::vector<Gaussian2D> kept;
    kept.reserve(grown.size());
    outcome.parent.clear();
    for (std::size_t i = 0; i < grown.size(); ++i) {
        if (sigmoid(grown[i].opacity_logit) < params.opacity_floor) {
            ++outcome.pruned;
            continue;
        }
        kept.push_back(grown[i]);
        outcome.parent.push_back(grown_parent[i]);
    }
    cloud.gaussians = std::move(kept);
    cloud.grad_accum.assign(cloud.gaussians.size(), 0.0);
    cloud.grad_count.assign(cloud.gaussians.size(), 0);
    cloud.peak_count = std::max(cloud.peak_count, cloud.size());
    return outcome;
}

void CloudAdam::ensure_size(std::size_t n) {
    if (m_.size() != n) {
        m_.assign(n, Gaussian2D{});
        v_.assign(n, Gaussian2D{});
    }
}

void CloudAdam::remap(const DensifyOutcome& outcome) {
    std::vector<Gaussian2D> new_m(outcome.parent.size()), new_v(outcome.parent.size());
    for (std::size_t i = 0; i < outcome.parent.size(); ++i) {
        const int p = outcome.parent[i];
        if (p >= 0 && static_cast<std::size_t>(p) < m_.size()) {
            new_m[i] = m_[static_cast<std::size_t>(p)];
            new_v[i] = v_[static_cast<std::size_t>(p)];
        }
    }
    m_ = std::move(new_m);
    v_ = std::move(new_v);
}

void CloudAdam::step(GaussianCloud& cloud, const GaussianGrads& grads, const AdamRates& rates) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    ensure_size(cloud.gaussians.size());
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    auto update = [&](double& p, double& m, double& v, double g, double lr) {
        m = kBeta1 * m + (1.0 - kBeta1) * g;
        v = kBeta2 * v + (1.0 - kBeta2) * g * g;
        p -= lr * (m / bc1) / (std::sqrt(v / bc2) + kEps);
    };
    for (std::size_t i = 0; i < cloud.gaussians.size(); ++i) {
        Gaussian2D& p = cloud.gaussians[i];
        Gaussian2D& m = m_[i];
        Gaussian2D& v = v_[i];
        const Gaussian2D& g = grads[i];
        update(p.mean[0], m.mean[0], v.mean[0], g.mean[0], rates.mean);
        update(p.mean[1], m.mean[1], v.mean[1], g.mean[1], rates.mean);
        update(p.log_scale[0], m.log_scale[0], v.log_scale[0], g.log_scale[0], rates.scale_rotation);
        update(p.log_scale[1], m.log_scale[1], v.log_scale[1], g.log_scale[1], rates.scale_rotation);
        update(p.rotation, m.rotation, v.rotation, g.rotation, rates.scale_rotation);
        for (std::size_t ch = 0; ch < 3; ++ch)
            update(p.color[ch], m.color[ch], v.color[ch], g.color[ch], rates.color);
        update(p.opacity_logit, m.opacity_logit, v.opacity_logit, g.opacity_logit, rates.opacity);
    }
}

} // namespace wavesplat
