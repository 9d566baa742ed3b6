#pragma once

// ============================================================================
// feasibility.hpp -- end-to-end evaluation and minimum-detectable-RCS search
//
// run_pipeline executes the full analytic chain for one (sigma0, delta_r)
// point; min_sigma0 root-finds the backscattering coefficient that meets the
// required ship-level detection probability; sweep maps that over a set of
// slant-range resolutions and picks the optimum.
// ============================================================================

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sarfeas/detection.hpp"
#include "sarfeas/errors.hpp"
#include "sarfeas/geometry.hpp"
#include "sarfeas/parallel.hpp"
#include "sarfeas/radar.hpp"
#include "sarfeas/scenario.hpp"

namespace sarfeas {

/// Every intermediate of one pipeline evaluation, kept for audit output.
struct PipelineResult {
    double slant_range_m = 0.0;
    double grazing_deg = 0.0;
    double v_orbital_ms = 0.0;
    double ship_area_m2 = 0.0;
    double a = 0.0;            ///< SNR constant
    double mean_snr = 0.0;     ///< a * sigma0
    double alpha_prime = 0.0;
    double delta_r_m = 0.0;
    double delta_gr_m = 0.0;
    double a_res_m2 = 0.0;
    double delta_min_m = 0.0;
    WindowCounts counts;
    double threshold = 0.0;    ///< -ln p_fa
    double p_fa = 0.0;
    double p_d = 0.0;
    double p_d_ship = 0.0;     ///< m-of-n detection probability
    double p_fa_ship = 0.0;    ///< m-of-n false-alarm probability
};

/// One point of the minimum-detectable-RCS curve.
struct FeasibilityPoint {
    double delta_r_m = 0.0;
    double min_sigma0 = 0.0;     ///< linear
    double min_sigma0_db = 0.0;
    double rcs_min_m2 = 0.0;
    std::int64_t m = 0;
    double p_d_at_solution = 0.0;
    double p_d_ship = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string status;          ///< failure reason when not converged
};

struct SweepResult {
    std::vector<FeasibilityPoint> points;      ///< one per delta_r, input order
    std::optional<std::size_t> optimum_index;  ///< argmin rcs over converged points
};

namespace detail {

template <class Fn>
auto pipeline_block(const char* block, Fn&& fn) {
    try {
        return fn();
    } catch (const DomainError& e) {
        throw DomainError(std::string("pipeline[") + block + "]: " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string("pipeline[") + block + "]: " + e.what());
    }
}

inline std::int64_t window_ship_pixels_for(const ScenarioConfig& sc, std::int64_t n_ps,
                                           std::int64_t n_pw, double a_res_m2) {
    if (sc.options.window_overlap_model == WindowModel::kMin)
        return window_ship_pixels(n_ps, n_pw);
    // clipped: ship footprint intersected with an Lw x Lw window, pixelized
    const double lw = sc.ship.tdw_side_m;
    const double overlap = std::min(sc.ship.length_m, lw) * std::min(sc.ship.width_m, lw);
    const std::int64_t clipped = sarfeas::detail::snapped_floor(overlap / a_res_m2);
    return std::max<std::int64_t>(1, std::min({n_ps, n_pw, clipped}));
}

}  // namespace detail

/// Executes the analytic chain for one band at a given mean backscattering
/// coefficient and slant-range resolution. The target sits at the far swath
/// edge (worst case). Errors carry the failing block in their message.
inline PipelineResult run_pipeline(const ScenarioConfig& scenario, const SarSystem& band,
                                   double mean_sigma0, double delta_r_m) {
    if (!(mean_sigma0 > 0.0) || !std::isfinite(mean_sigma0))
        throw DomainError("pipeline[input]: mean_sigma0 must be finite and > 0");
    if (!(delta_r_m > 0.0) || !std::isfinite(delta_r_m))
        throw DomainError("pipeline[input]: delta_r must be finite and > 0");

    PipelineResult r;
    const SurveillanceGeometry geo =
        detail::pipeline_block("geometry", [&] { return derive_geometry(scenario.geometry); });
    r.slant_range_m = geo.r_slant_max_m;
    r.grazing_deg = geo.grazing_far_deg;
    r.v_orbital_ms = scenario.options.v_orbital_ms.value_or(geo.v_orbital_ms);
    r.delta_r_m = delta_r_m;

    r.ship_area_m2 = scenario.ship.area_m2();
    r.a = detail::pipeline_block("snr-constant", [&] {
        return snr_constant(band, r.slant_range_m, r.grazing_deg, r.v_orbital_ms, delta_r_m);
    });
    r.mean_snr = mean_snr(r.a, mean_sigma0);
    r.alpha_prime = alpha_from_mean(r.mean_snr, scenario.ship.beta);

    r.delta_gr_m = ground_res(delta_r_m, r.grazing_deg);
    r.a_res_m2 = resolution_cell_area(band.azimuth_res_m, r.delta_gr_m);
    r.delta_min_m = std::min(band.azimuth_res_m, r.delta_gr_m);

    r.counts.n_ps = ship_pixels(r.ship_area_m2, r.a_res_m2);
    if (r.counts.n_ps < 1)
        throw DomainError("pipeline[counts]: ship spans less than one resolution cell");
    r.counts.p_w = tdw_side_pixels(scenario.ship.tdw_side_m, r.delta_min_m);
    r.counts.n_pw = r.counts.p_w * r.counts.p_w;
    r.counts.n_ps_w =
        detail::window_ship_pixels_for(scenario, r.counts.n_ps, r.counts.n_pw, r.a_res_m2);

    r.p_fa = scenario.detection.p_fa_pixel
                 ? *scenario.detection.p_fa_pixel
                 : pixel_pfa_from_aoi(*scenario.detection.p_fa_overall,
                                      *scenario.detection.aoi_area_m2, r.a_res_m2);
    r.threshold = threshold_from_pfa(r.p_fa);

    r.counts.m = detail::pipeline_block("optimal-m",
                                        [&] { return optimal_m(r.p_fa, r.counts.n_ps_w); });
    r.p_d = detail::pipeline_block("pd-integral", [&] {
        return pd_lognormal(r.alpha_prime, scenario.ship.beta, r.p_fa);
    });
    r.p_d_ship = binint_prob(r.p_d, r.counts.m, r.counts.n_ps_w);
    r.p_fa_ship = binint_prob(r.p_fa, r.counts.m, r.counts.n_ps_w);
    return r;
}

/// Finds the mean backscattering coefficient at which the ship-level
/// detection probability reaches p_d_target, by bisection in log sigma0
/// (p_d_ship is monotone in sigma0; m does not depend on sigma0). Converges
/// when |p_d_ship - target| / target <= 1e-6. Throws NumericError with
/// "target-above-bracket" / "target-below-bracket" when the bracket cannot
/// contain the solution, and a distinct message on iteration exhaustion.
inline FeasibilityPoint min_sigma0(const ScenarioConfig& scenario, const SarSystem& band,
                                   double delta_r_m, double p_d_target,
                                   double bracket_lo, double bracket_hi) {
    if (!(bracket_lo > 0.0) || !(bracket_hi > bracket_lo))
        throw DomainError("min_sigma0: require 0 < bracket_lo < bracket_hi");
    if (!(p_d_target > 0.0) || !(p_d_target < 1.0))
        throw DomainError("min_sigma0: p_d_target must be in (0, 1)");
    constexpr double kTol = 1e-6;

    FeasibilityPoint pt;
    pt.delta_r_m = delta_r_m;
    int evals = 0;
    const auto eval = [&](double sigma0) {
        ++evals;
        return run_pipeline(scenario, band, sigma0, delta_r_m);
    };
    const auto finish = [&](double sigma0, const PipelineResult& pr) {
        pt.min_sigma0 = sigma0;
        pt.min_sigma0_db = linear_to_db(sigma0);
        pt.rcs_min_m2 = sigma0 * scenario.ship.area_m2();
        pt.m = pr.counts.m;
        pt.p_d_at_solution = pr.p_d;
        pt.p_d_ship = pr.p_d_ship;
        pt.converged = true;
        pt.iterations = evals;
        return pt;
    };

    const PipelineResult at_lo = eval(bracket_lo);
    if (std::fabs(at_lo.p_d_ship - p_d_target) <= kTol * p_d_target)
        return finish(bracket_lo, at_lo);
    if (at_lo.p_d_ship > p_d_target)
        throw NumericError("min_sigma0: target-below-bracket (p_d_ship at bracket_lo "
                           "already exceeds the target)");
    const PipelineResult at_hi = eval(bracket_hi);
    if (std::fabs(at_hi.p_d_ship - p_d_target) <= kTol * p_d_target)
        return finish(bracket_hi, at_hi);
    if (at_hi.p_d_ship < p_d_target)
        throw NumericError("min_sigma0: target-above-bracket (p_d_ship at bracket_hi "
                           "falls short of the target)");

    double lo = std::log(bracket_lo);
    double hi = std::log(bracket_hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double sigma0 = std::exp(mid);
        const PipelineResult pr = eval(sigma0);
        if (std::fabs(pr.p_d_ship - p_d_target) <= kTol * p_d_target)
            return finish(sigma0, pr);
        (pr.p_d_ship < p_d_target ? lo : hi) = mid;
    }
    throw NumericError("min_sigma0: iteration cap exhausted without meeting tolerance");
}

/// One FeasibilityPoint per delta_r. Points are independent and evaluated in
/// parallel; the output preserves input order and non-converged points are
/// flagged, never dropped. Throws only if every point fails.
inline SweepResult sweep(const ScenarioConfig& scenario, const SarSystem& band,
                         const std::vector<double>& delta_r_set, unsigned threads = 0) {
    if (delta_r_set.empty())
        throw DomainError("sweep: empty delta_r set");
    SweepResult out;
    out.points.resize(delta_r_set.size());
    detail::parallel_for_index(delta_r_set.size(), threads, [&](std::uint64_t i) {
        const double dr = delta_r_set[i];
        try {
            out.points[i] = min_sigma0(scenario, band, dr, scenario.detection.p_d_target,
                                       scenario.options.sigma0_bracket_lo,
                                       scenario.options.sigma0_bracket_hi);
        } catch (const std::exception& e) {
            out.points[i] = FeasibilityPoint{};
            out.points[i].delta_r_m = dr;
            out.points[i].converged = false;
            out.points[i].status = e.what();
        }
    });
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        if (!out.points[i].converged) continue;
        if (!out.optimum_index
            || out.points[i].rcs_min_m2 < out.points[*out.optimum_index].rcs_min_m2)
            out.optimum_index = i;
    }
    if (!out.optimum_index)
        throw NumericError("sweep: every delta_r point failed");
    return out;
}

/// Minimum detectable radar cross-section for a solved backscattering level.
inline double rcs_min(double min_sigma0_linear, const ShipModel& ship) {
    if (!(min_sigma0_linear > 0.0))
        throw DomainError("rcs_min: min_sigma0 must be > 0");
    ship.validate();
    return min_sigma0_linear * ship.area_m2();
}

}  // namespace sarfeas
