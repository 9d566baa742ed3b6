#pragma once

// ============================================================================
// geometry.hpp -- spherical-Earth surveillance geometry
//
// Derives slant/ground ranges, far-edge grazing angle and orbital/ground
// speeds from satellite altitude, mid-swath look angle and swath width.
// ============================================================================

#include <cmath>
#include <numbers>

#include "sarfeas/errors.hpp"

namespace sarfeas {

struct GeometryInputs {
    double altitude_m = 0.0;       ///< satellite altitude above the sphere
    double look_angle_deg = 0.0;   ///< boresight off-nadir angle to mid-swath
    double swath_m = 0.0;          ///< ground-range extent of the swath
    double earth_radius_m = 6'371'000.0;
    double mu_m3s2 = 3.986004418e14;  ///< gravitational parameter

    void validate() const {
        if (!(altitude_m > 0.0) || !std::isfinite(altitude_m))
            throw DomainError("geometry: altitude_m must be finite and > 0");
        if (!(look_angle_deg > 0.0) || !(look_angle_deg < 90.0))
            throw DomainError("geometry: look_angle_deg must be in (0, 90)");
        if (!(swath_m > 0.0) || !std::isfinite(swath_m))
            throw DomainError("geometry: swath_m must be finite and > 0");
        if (!(earth_radius_m > 0.0) || !(mu_m3s2 > 0.0))
            throw DomainError("geometry: earth_radius_m and mu_m3s2 must be > 0");
    }
};

struct SurveillanceGeometry {
    double r_slant_min_m = 0.0;
    double r_slant_max_m = 0.0;
    double r_ground_min_m = 0.0;
    double r_ground_max_m = 0.0;
    double grazing_far_deg = 0.0;   ///< grazing angle at the far swath edge
    double grazing_near_deg = 0.0;  ///< grazing angle at the near swath edge
    double v_orbital_ms = 0.0;
    double v_ground_ms = 0.0;
};

namespace detail {

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Grazing angle at a target seen at slant range R from orbit radius d on a
/// sphere of radius re. Rejects degenerate (nadir/horizon) triangles.
inline double grazing_deg_from_slant(double R, double re, double d) {
    if (!(R > 0.0) || R <= d - re || R >= d + re)
        throw DomainError("grazing angle: slant range violates the orbit triangle");
    const double sin_psi = (d * d - re * re - R * R) / (2.0 * re * R);
    if (!(sin_psi > 0.0) || !(sin_psi < 1.0))
        throw DomainError("grazing angle: degenerate geometry (nadir or below horizon)");
    return rad2deg(std::asin(sin_psi));
}

}  // namespace detail

/// Derive the full surveillance geometry. The look angle aims the boresight
/// at mid-swath; the swath is split symmetrically in ground range and the
/// near/far slant ranges are recomputed from the corresponding Earth-central
/// angles. Throws DomainError when the look angle misses the Earth
/// ("no-intersection") or a swath edge degenerates.
inline SurveillanceGeometry derive_geometry(const GeometryInputs& in) {
    in.validate();
    const double re = in.earth_radius_m;
    const double d = re + in.altitude_m;
    const double theta = detail::deg2rad(in.look_angle_deg);

    const double s = d * std::sin(theta) / re;
    if (s > 1.0)
        throw DomainError("derive_geometry: no-intersection (look angle misses the Earth)");
    const double gamma_mid = std::asin(s) - theta;  // Earth-central angle to mid-swath
    const double g_mid = re * gamma_mid;
    const double g_near = g_mid - 0.5 * in.swath_m;
    const double g_far = g_mid + 0.5 * in.swath_m;
    if (!(g_near > 0.0))
        throw DomainError("derive_geometry: near swath edge reaches past nadir");

    const auto slant = [&](double g) {
        const double gamma = g / re;
        return std::sqrt(re * re + d * d - 2.0 * re * d * std::cos(gamma));
    };
    SurveillanceGeometry out;
    out.r_ground_min_m = g_near;
    out.r_ground_max_m = g_far;
    out.r_slant_min_m = slant(g_near);
    out.r_slant_max_m = slant(g_far);
    out.grazing_far_deg = detail::grazing_deg_from_slant(out.r_slant_max_m, re, d);
    out.grazing_near_deg = detail::grazing_deg_from_slant(out.r_slant_min_m, re, d);
    out.v_orbital_ms = std::sqrt(in.mu_m3s2 / d);
    out.v_ground_ms = out.v_orbital_ms * re / d;
    return out;
}

/// Grazing angle at an arbitrary slant range within (or near) the swath.
/// Values outside [r_slant_min, r_slant_max] are extrapolations of the same
/// spherical triangle; degenerate triangles are rejected.
inline double grazing_at_slant_range(double slant_range_m, const GeometryInputs& in) {
    in.validate();
    if (!(slant_range_m > 0.0) || !std::isfinite(slant_range_m))
        throw DomainError("grazing_at_slant_range: slant range must be finite and > 0");
    return detail::grazing_deg_from_slant(slant_range_m, in.earth_radius_m,
                                          in.earth_radius_m + in.altitude_m);
}

}  // namespace sarfeas
