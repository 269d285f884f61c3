#ifndef WAVESPLAT_FILTERBANK_HPP
#define WAVESPLAT_FILTERBANK_HPP

#include <vector>

namespace wavesplat {

// Coefficient sequence indexed by delay: taps[n] is the coefficient of z^-n.
using FilterTaps = std::vector<double>;

enum class FilterMode {
    Scale, // learn a single scalar multiplying the base high-pass analysis taps
    Whole  // learn the high-pass analysis taps themselves
};

const char* to_string(FilterMode mode);

// Two-channel analysis/synthesis bank with a learnable high-pass analysis side.
// The four fixed tap sequences share one length (2 for the Haar bank). In
// Scale mode the effective analysis high-pass is alpha * hi_a_base and
// hi_a_base stays untouched; in Whole mode it is hi_a_free.
struct FilterBank {
    FilterTaps lo_a;      // analysis low-pass
    FilterTaps hi_a_base; // frozen base analysis high-pass
    FilterTaps lo_s;      // synthesis low-pass
    FilterTaps hi_s;      // synthesis high-pass
    FilterMode mode = FilterMode::Scale;
    double alpha = 0.0;   // Scale mode parameter
    FilterTaps hi_a_free; // Whole mode parameters

    FilterTaps effective_high_pass() const;
    int tap_length() const { return static_cast<int>(lo_a.size()); }
    // Group delay of the analysis/synthesis cascade                (tap_length - 1).
    int reconstruction_delay() const { return tap_length() - 1; }
};

// Orthonormal Haar bank (taps of magnitude 1/sqrt(2)), synthesis pair chosen
// so both residuals below vanish at alpha = 1. Whole mode starts from
// all-zero high-pass taps.
FilterBank haar_bank(FilterMode mode, double init_alpha);

// Coefficient sequence of the polynomial product a(z) * b(z).
FilterTaps poly_conv(const FilterTaps& a, const FilterTaps& b);

// Realizes the substitution z -> -z: tap at delay n multiplied by (-1)^n.
FilterTaps alternate_signs(const FilterTaps& a);

double squared_norm(const FilterTaps& a);

// Coefficients of Ls(z) * La(-z) + Hs(z) * Heff(-z); all-zero iff the alias
// term introduced by downsampling cancels.
FilterTaps alias_residual(const FilterBank& bank);

// Coefficients of Ls(z) * La(z) + Hs(z) * Heff(z) - 2 z^-d with
// d = reconstruction_delay(); all-zero iff the cascade is a pure delay.
FilterTaps dist_residual(const FilterBank& bank);

// ||alias_residual||^2 + ||dist_residual||^2. One bank is shared by every
// decomposition level, so this is evaluated once per bank.
double pr_loss(const FilterBank& bank);

struct PrGradient {
    FilterMode mode = FilterMode::Scale;
    double d_alpha = 0.0; // Scale mode
    FilterTaps d_taps;    // Whole mode, one entry per hi_a_free tap
};

// Analytic derivative of pr_loss with respect to the learnable parameters.
// Both residuals are affine in the parameters, so the derivative is exact.
PrGradient pr_grad(const FilterBank& bank);

} // namespace wavesplat

#endif
