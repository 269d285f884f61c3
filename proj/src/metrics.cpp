#include "wavesplat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavesplat/errors.hpp"

namespace wavesplat {

namespace {

constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* who) {
    if (!a.same_shape(b)) throw ShapeMismatchError(std::string(who) + ": shapes differ");
}

struct Plane {
    int h = 0, w = 0;
    std::vector<double> v;
    Plane() = default;
    Plane(int h_, int w_) : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0.0) {}
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * w + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * w + c]; }
};

Plane channel_plane(const ImageBuffer& img, int ch) {
    Plane p(img.height, img.width);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) p.at(r, c) = img.at(r, c, ch);
    return p;
}

std::vector<double> gaussian_window(int size, double sigma) {
    std::vector<double> g(static_cast<std::size_t>(size));
    const double mid = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        g[static_cast<std::size_t>(i)] = std::exp(-(i - mid) * (i - mid) / (2.0 * sigma * sigma));
        sum += g[static_cast<std::size_t>(i)];
    }
    for (double& x : g) x /= sum;
    return g;
}

int window_size_for(const ImageBuffer& img) {
    int size = std::min({11, img.height, img.width});
    if (size % 2 == 0) --size;
    return std::max(size, 1);
}

// Separable valid correlation: output (h-win+1) x (w-win+1).
Plane valid_filter(const Plane& p, const std::vector<double>& g) {
    const int win = static_cast<int>(g.size());
    Plane rows(p.h, p.w - win + 1);
    for (int r = 0; r < p.h; ++r)
        for (int c = 0; c < rows.w; ++c) {
            double acc = 0.0;
            for (int k = 0; k < win; ++k) acc += g[static_cast<std::size_t>(k)] * p.at(r, c + k);
            rows.at(r, c) = acc;
        }
    Plane out(p.h - win + 1, rows.w);
    for (int r = 0; r < out.h; ++r)
        for (int c = 0; c < out.w; ++c) {
            double acc = 0.0;
            for (int k = 0; k < win; ++k) acc += g[static_cast<std::size_t>(k)] * rows.at(r + k, c);
            out.at(r, c) = acc;
        }
    return out;
}

// Adjoint of valid_filter: scatters a valid-size map back to image size.
Plane valid_filter_adjoint(const Plane& m, const std::vector<double>& g, int out_h, int out_w) {
    const int win = static_cast<int>(g.size());
    Plane rows(out_h, m.w);
    for (int r = 0; r < m.h; ++r)
        for (int c = 0; c < m.w; ++c) {
            const double s = m.at(r, c);
            for (int k = 0; k < win; ++k) rows.at(r + k, c) += g[static_cast<std::size_t>(k)] * s;
        }
    Plane out(out_h, out_w);
    for (int r = 0; r < out_h; ++r)
        for (int c = 0; c < m.w; ++c) {
            const double s = rows.at(r, c);
            for (int k = 0; k < win; ++k) out.at(r, c + k) += g[static_cast<std::size_t>(k)] * s;
        }
    return out;
}

Plane hadamard(const Plane& a, const Plane& b) {
    Plane out(a.h, a.w);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

struct ChannelStats {
    Plane mu_x, mu_y, sigma_x2, sigma_y2, sigma_xy, s_map;
};

ChannelStats channel_ssim_stats(const Plane& x, const Plane& y, const std::vector<double>& g) {
    ChannelStats st;
    st.mu_x = valid_filter(x, g);
    st.mu_y = valid_filter(y, g);
    const Plane x2 = valid_filter(hadamard(x, x), g);
    const Plane y2 = valid_filter(hadamard(y, y), g);
    const Plane xy = valid_filter(hadamard(x, y), g);
    const int h = st.mu_x.h, w = st.mu_x.w;
    st.sigma_x2 = Plane(h, w);
    st.sigma_y2 = Plane(h, w);
    st.sigma_xy = Plane(h, w);
    st.s_map = Plane(h, w);
    for (std::size_t i = 0; i < st.s_map.v.size(); ++i) {
        const double mx = st.mu_x.v[i], my = st.mu_y.v[i];
        const double sx = x2.v[i] - mx * mx;
        const double sy = y2.v[i] - my * my;
        const double sxy = xy.v[i] - mx * my;
        st.sigma_x2.v[i] = sx;
        st.sigma_y2.v[i] = sy;
        st.sigma_xy.v[i] = sxy;
        const double a1 = 2.0 * mx * my + kC1, a2 = 2.0 * sxy + kC2;
        const double b1 = mx * mx + my * my + kC1, b2 = sx + sy + kC2;
        st.s_map.v[i] = (a1 * a2) / (b1 * b2);
    }
    return st;
}

// d(sum of s_map)/d(x) for one channel; swap roles for the y side.
Plane channel_ssim_grad(const Plane& x, const Plane& y, const ChannelStats& st,
                        const std::vector<double>& g) {
    const int h = st.s_map.h, w = st.s_map.w;
    Plane f_mu(h, w), f_var(h, w), f_cov(h, w);
    Plane f_var_mu(h, w), f_cov_mu(h, w);
    for (std::size_t i = 0; i < st.s_map.v.size(); ++i) {
        const double mx = st.mu_x.v[i], my = st.mu_y.v[i];
        const double a1 = 2.0 * mx * my + kC1, a2 = 2.0 * st.sigma_xy.v[i] + kC2;
        const double b1 = mx * mx + my * my + kC1;
        const double b2 = st.sigma_x2.v[i] + st.sigma_y2.v[i] + kC2;
        const double s = st.s_map.v[i];
        const double inv_bb = 1.0 / (b1 * b2);
        f_mu.v[i] = 2.0 * my * a2 * inv_bb - 2.0 * mx * s / b1;
        f_var.v[i] = -s / b2;
        f_cov.v[i] = 2.0 * a1 * inv_bb;
        f_var_mu.v[i] = f_var.v[i] * mx;
        f_cov_mu.v[i] = f_cov.v[i] * my;
    }
    const Plane t_mu = valid_filter_adjoint(f_mu, g, x.h, x.w);
    const Plane t_var = valid_filter_adjoint(f_var, g, x.h, x.w);
    const Plane t_var_mu = valid_filter_adjoint(f_var_mu, g, x.h, x.w);
    const Plane t_cov = valid_filter_adjoint(f_cov, g, x.h, x.w);
    const Plane t_cov_mu = valid_filter_adjoint(f_cov_mu, g, x.h, x.w);
    Plane out(x.h, x.w);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.v[i] = t_mu.v[i] + 2.0 * (x.v[i] * t_var.v[i] - t_var_mu.v[i]) +
                   (y.v[i] * t_cov.v[i] - t_cov_mu.v[i]);
    }
    return out;
}

ChannelStats swapped(const ChannelStats& st) {
    ChannelStats out;
    out.mu_x = st.mu_y;
    out.mu_y = st.mu_x;
    out.sigma_x2 = st.sigma_y2;
    out.sigma_y2 = st.sigma_x2;
    out.sigma_xy = st.sigma_xy;
    out.s_map = st.s_map;
    return out;
}

} // namespace

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    require_same_shape(a, b, "psnr");
    double mse = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        mse += d * d;
    }
    mse /= static_cast<double>(a.data.size());
    if (mse < 1e-10) return 99.0;
    return std::min(10.0 * std::log10(1.0 / mse), 99.0);
}

double ssim(const ImageBuffer& a, const ImageBuffer& b) {
    return ssim_with_grad(a, b, false, false).value;
}

SsimResult ssim_with_grad(const ImageBuffer& a, const ImageBuffer& b, bool want_da,
                          bool want_db) {
    require_same_shape(a, b, "ssim");
    const std::vector<double> g = gaussian_window(window_size_for(a), 1.5);
    SsimResult result;
    if (want_da) result.d_a = ImageBuffer(a.height, a.width, a.channels);
    if (want_db) result.d_b = ImageBuffer(a.height, a.width, a.channels);
    double sum = 0.0;
    std::size_t count = 0;
    for (int ch = 0; ch < a.channels; ++ch) {
        const Plane x = channel_plane(a, ch);
        const Plane y = channel_plane(b, ch);
        const ChannelStats st = channel_ssim_stats(x, y, g);
        for (double s : st.s_map.v) sum += s;
        count += st.s_map.v.size();
        if (want_da) {
            const Plane gx = channel_ssim_grad(x, y, st, g);
            for (int r = 0; r < a.height; ++r)
                for (int c = 0; c < a.width; ++c) result.d_a.at(r, c, ch) = gx.at(r, c);
        }
        if (want_db) {
            const Plane gy = channel_ssim_grad(y, x, swapped(st), g);
            for (int r = 0; r < a.height; ++r)
                for (int c = 0; c < a.width; ++c) result.d_b.at(r, c, ch) = gy.at(r, c);
        }
    }
    result.value = sum / static_cast<double>(count);
    const double inv_count = 1.0 / static_cast<double>(count);
    if (want_da)
        for (double& v : result.d_a.data) v *= inv_count;
    if (want_db)
        for (double& v : result.d_b.data) v *= inv_count;
    return result;
}

double recon_loss(const ImageBuffer& rendered, const ImageBuffer& target, double lambda) {
    require_same_shape(rendered, target, "recon_loss");
    double l1 = 0.0;
    for (std::size_t i = 0; i < rendered.data.size(); ++i)
        l1 += std::abs(rendered.data[i] - target.data[i]);
    l1 /= static_cast<double>(rendered.data.size());
    const double dssim = (1.0 - ssim(rendered, target)) / 2.0;
    return (1.0 - lambda) * l1 + lambda * dssim;
}

ReconLossGrads recon_loss_grad(const ImageBuffer& rendered, const ImageBuffer& target,
                               double lambda, bool want_d_target) {
    require_same_shape(rendered, target, "recon_loss");
    ReconLossGrads out;
    const SsimResult s = ssim_with_grad(rendered, target, true, want_d_target);
    out.dssim = (1.0 - s.value) / 2.0;
    out.d_rendered = ImageBuffer(rendered.height, rendered.width, rendered.channels);
    if (want_d_target) out.d_target = ImageBuffer(rendered.height, rendered.width, rendered.channels);
    const double inv_n = 1.0 / static_cast<double>(rendered.data.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < rendered.data.size(); ++i) {
        const double d = rendered.data[i] - target.data[i];
        l1 += std::abs(d);
        const double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
        out.d_rendered.data[i] = (1.0 - lambda) * sgn * inv_n - 0.5 * lambda * s.d_a.data[i];
        if (want_d_target)
            out.d_target.data[i] = -(1.0 - lambda) * sgn * inv_n - 0.5 * lambda * s.d_b.data[i];
    }
    out.l1 = l1 * inv_n;
    out.loss = (1.0 - lambda) * out.l1 + lambda * out.dssim;
    return out;
}

} // namespace wavesplat
