#include "wavesplat/filterbank.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

namespace wavesplat {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

FilterTaps poly_add(const FilterTaps& a, const FilterTaps& b) {
    FilterTaps out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

FilterTaps scaled(const FilterTaps& a, double s) {
    FilterTaps out(a);
    for (double& v : out) v *= s;
    return out;
}

double dot(const FilterTaps& a, const FilterTaps& b) {
    const std::size_t n = std::min(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

// Unit impulse at the given delay.
FilterTaps delta(std::size_t delay, std::size_t length) {
    FilterTaps out(length, 0.0);
    out[delay] = 1.0;
    return out;
}

} // namespace

const char* to_string(FilterMode mode) {
    return mode == FilterMode::Scale ? "scale" : "whole";
}

FilterTaps FilterBank::effective_high_pass() const {
    if (mode == FilterMode::Scale) return scaled(hi_a_base, alpha);
    return hi_a_free;
}

FilterBank haar_bank(FilterMode mode, double init_alpha) {
    const double s = kInvSqrt2;
    FilterBank bank;
    bank.lo_a = {s, s};
    bank.hi_a_base = {s, -s};
    bank.lo_s = {s, s};
    bank.hi_s = {-s, s};
    bank.mode = mode;
    if (mode == FilterMode::Scale) {
        bank.alpha = init_alpha;
    } else {
        bank.alpha = 1.0;
        bank.hi_a_free = FilterTaps(bank.hi_a_base.size(), 0.0);
    }
    return bank;
}

FilterTaps poly_conv(const FilterTaps& a, const FilterTaps& b) {
    assert(!a.empty() && !b.empty());
    FilterTaps out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

FilterTaps alternate_signs(const FilterTaps& a) {
    FilterTaps out(a);
    for (std::size_t n = 1; n < out.size(); n += 2) out[n] = -out[n];
    return out;
}

double squared_norm(const FilterTaps& a) {
    double acc = 0.0;
    for (double v : a) acc += v * v;
    return acc;
}

FilterTaps alias_residual(const FilterBank& bank) {
    return poly_add(poly_conv(bank.lo_s, alternate_signs(bank.lo_a)),
                    poly_conv(bank.hi_s, alternate_signs(bank.effective_high_pass())));
}

FilterTaps dist_residual(const FilterBank& bank) {
    FilterTaps r = poly_add(poly_conv(bank.lo_s, bank.lo_a),
                            poly_conv(bank.hi_s, bank.effective_high_pass()));
    r[static_cast<std::size_t>(bank.reconstruction_delay())] -= 2.0;
    return r;
}

double pr_loss(const FilterBank& bank) {
    return squared_norm(alias_residual(bank)) + squared_norm(dist_residual(bank));
}

PrGradient pr_grad(const FilterBank& bank) {
    PrGradient grad;
    grad.mode = bank.mode;
    const FilterTaps alias = alias_residual(bank);
    const FilterTaps dist = dist_residual(bank);
    if (bank.mode == FilterMode::Scale) {
        // alias = A0 + alpha * Hs*Hb(-z), dist = D0 + alpha * Hs*Hb.
        const FilterTaps da = poly_conv(bank.hi_s, alternate_signs(bank.hi_a_base));
        const FilterTaps dd = poly_conv(bank.hi_s, bank.hi_a_base);
        grad.d_alpha = 2.0 * dot(alias, da) + 2.0 * dot(dist, dd);
    } else {
        const std::size_t n = bank.hi_a_free.size();
        grad.d_taps.assign(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const FilterTaps basis = delta(k, n);
            const FilterTaps da = poly_conv(bank.hi_s, alternate_signs(basis));
            const FilterTaps dd = poly_conv(bank.hi_s, basis);
            grad.d_taps[k] = 2.0 * dot(alias, da) + 2.0 * dot(dist, dd);
        }
    }
    return grad;
}

} // namespace wavesplat
