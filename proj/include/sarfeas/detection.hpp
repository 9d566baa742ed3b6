#pragma once

// ============================================================================
// detection.hpp -- pixel- and ship-level detection mathematics
//
// Threshold and false-alarm budgeting, conditional and lognormal-averaged
// detection probability, detection-window sizing, binary-integration
// probabilities and the optimal-m rule.
// ============================================================================

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "sarfeas/errors.hpp"
#include "sarfeas/sigmath.hpp"

namespace sarfeas {

/// Detection requirements; exactly one false-alarm specification must be
/// supplied: either the pixel-level p_fa directly, or the AOI-level budget
/// (p_fa_overall together with aoi_area_m2) from which the pixel p_fa is
/// derived per resolution cell.
struct DetectionRequirements {
    std::optional<double> p_fa_pixel;
    std::optional<double> p_fa_overall;
    std::optional<double> aoi_area_m2;
    double p_d_target = 0.0;

    void validate() const {
        const bool direct = p_fa_pixel.has_value();
        const bool budget = p_fa_overall.has_value() && aoi_area_m2.has_value();
        if (p_fa_overall.has_value() != aoi_area_m2.has_value())
            throw DomainError("detection: p_fa_overall and aoi_area_m2 must be supplied together");
        if (direct == budget)
            throw DomainError("detection: supply exactly one of p_fa_pixel or "
                              "(p_fa_overall + aoi_area_m2)");
        const double pfa = direct ? *p_fa_pixel : *p_fa_overall;
        if (!(pfa > 0.0) || !(pfa < 1.0))
            throw DomainError("detection: false-alarm probability must be in (0, 1)");
        if (budget && !(*aoi_area_m2 > 0.0))
            throw DomainError("detection: aoi_area_m2 must be > 0");
        if (!(p_d_target > 0.0) || !(p_d_target < 1.0))
            throw DomainError("detection: p_d_target must be in (0, 1)");
    }
};

/// Window bookkeeping for the binary-integration step.
struct WindowCounts {
    std::int64_t p_w = 0;      ///< detection-window side, pixels
    std::int64_t n_pw = 0;     ///< pixels in the window (= p_w^2)
    std::int64_t n_ps = 0;     ///< ship pixels in the image
    std::int64_t n_ps_w = 0;   ///< max ship pixels in one window
    std::int64_t m = 0;        ///< binary-integration threshold

    void validate() const {
        if (p_w < 1 || n_pw != p_w * p_w)
            throw DomainError("window counts: require p_w >= 1 and n_pw = p_w^2");
        if (n_ps_w < 1 || n_ps_w > std::min(n_ps, n_pw))
            throw DomainError("window counts: require 1 <= n_ps_w <= min(n_ps, n_pw)");
        if (m < 1 || m > n_ps_w)
            throw DomainError("window counts: require 1 <= m <= n_ps_w");
    }
};

namespace detail {

// Ceil/floor with a small relative snap so quotients that land on an integer
// up to roundoff (e.g. a window side dividing the cell size exactly) do not
// flicker across the boundary.
inline std::int64_t snapped_ceil(double v) {
    const double r = std::round(v);
    if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v)))
        return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

inline std::int64_t snapped_floor(double v) {
    const double r = std::round(v);
    if (std::fabs(v - r) <= 1e-9 * std::max(1.0, std::fabs(v)))
        return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(v));
}

}  // namespace detail

/// Pixel-level false-alarm probability from an AOI-level budget: the budget
/// divided by the number of resolution cells in the AOI (ceiling).
inline double pixel_pfa_from_aoi(double p_fa_overall, double aoi_area_m2, double a_res_m2) {
    if (!(p_fa_overall > 0.0) || !(p_fa_overall < 1.0))
        throw DomainError("pixel_pfa_from_aoi: p_fa_overall must be in (0, 1)");
    if (!(aoi_area_m2 > 0.0) || !(a_res_m2 > 0.0))
        throw DomainError("pixel_pfa_from_aoi: areas must be > 0");
    const double n_aoi = static_cast<double>(detail::snapped_ceil(aoi_area_m2 / a_res_m2));
    return p_fa_overall / n_aoi;
}

/// Global detection threshold for unit-power noise: T = -ln p_fa.
inline double threshold_from_pfa(double p_fa) {
    if (!(p_fa > 0.0) || !(p_fa <= 1.0))
        throw DomainError("threshold_from_pfa: p_fa must be in (0, 1]");
    return -std::log(p_fa);
}

/// Conditional pixel detection probability at fixed SNR chi:
/// Q1(sqrt(2 chi), sqrt(-2 ln p_fa)).
inline double pd_conditional(double chi, double p_fa) {
    if (!(chi >= 0.0) || !std::isfinite(chi))
        throw DomainError("pd_conditional: chi must be finite and >= 0");
    const double t = threshold_from_pfa(p_fa);
    return marcum_q1(std::sqrt(2.0 * chi), std::sqrt(2.0 * t));
}

/// Unconditional pixel detection probability: pd_conditional averaged over
/// the lognormal SNR law LN(alpha_prime, beta). Lies in (p_fa, 1).
inline double pd_lognormal(double alpha_prime, double beta, double p_fa) {
    const double b = std::sqrt(2.0 * threshold_from_pfa(p_fa));
    return lognormal_expectation(
        [b](double chi) { return marcum_q1(std::sqrt(2.0 * chi), b); },
        LogNormalParams{alpha_prime, beta});
}

/// Detection-window side in pixels: ceil(window side / min resolution).
inline std::int64_t tdw_side_pixels(double l_w_m, double delta_min_m) {
    if (!(l_w_m > 0.0) || !(delta_min_m > 0.0))
        throw DomainError("tdw_side_pixels: lengths must be > 0");
    return std::max<std::int64_t>(1, detail::snapped_ceil(l_w_m / delta_min_m));
}

/// Ship pixels in the image: floor(ship area / cell area).
inline std::int64_t ship_pixels(double ship_area_m2, double a_res_m2) {
    if (!(ship_area_m2 > 0.0) || !(a_res_m2 > 0.0))
        throw DomainError("ship_pixels: areas must be > 0");
    return detail::snapped_floor(ship_area_m2 / a_res_m2);
}

/// Maximum ship pixels a single window can contain.
inline std::int64_t window_ship_pixels(std::int64_t n_ps, std::int64_t n_pw) {
    if (n_ps < 0 || n_pw < 1)
        throw DomainError("window_ship_pixels: require n_ps >= 0 and n_pw >= 1");
    return std::min(n_ps, n_pw);
}

/// Binary-integration probability: P(at least m of n Bernoulli(p) trials
/// succeed) = I_p(m, n-m+1). Stable for n up to 1e6 and beyond; no binomial
/// coefficients are formed.
inline double binint_prob(double p, std::int64_t m, std::int64_t n) {
    if (m < 1 || n < m)
        throw DomainError("binint_prob: require 1 <= m <= n");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw DomainError("binint_prob: p must be in [0, 1]");
    return reg_inc_beta(p, static_cast<double>(m), static_cast<double>(n - m + 1));
}

/// Inverse of binint_prob in p: the per-trial probability that produces the
/// given m-of-n cumulative probability.
inline double binint_inv(double cum_prob, std::int64_t m, std::int64_t n) {
    if (m < 1 || n < m)
        throw DomainError("binint_inv: require 1 <= m <= n");
    return reg_inc_beta_inv(cum_prob, static_cast<double>(m), static_cast<double>(n - m + 1));
}

/// Smallest threshold m >= 2 whose m-of-n false-alarm probability stays below
/// the single-pixel p_fa. Throws DomainError when no m in {2..n} satisfies
/// the constraint (never silently falls back).
inline std::int64_t optimal_m(double p_fa, std::int64_t n) {
    if (n < 2)
        throw DomainError("optimal_m: require n >= 2");
    if (!(p_fa > 0.0) || !(p_fa < 1.0))
        throw DomainError("optimal_m: p_fa must be in (0, 1)");
    for (std::int64_t k = 2; k <= n; ++k) {
        if (binint_prob(p_fa, k, n) < p_fa) return k;
    }
    throw DomainError("optimal_m: no feasible m in {2.." + std::to_string(n)
                      + "} meets the false-alarm constraint");
}

}  // namespace sarfeas
