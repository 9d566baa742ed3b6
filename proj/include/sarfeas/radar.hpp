#pragma once

// ============================================================================
// radar.hpp -- SAR system parameters and the radar-equation chain
// ============================================================================

#include <cmath>
#include <numbers>
#include <string>

#include "sarfeas/errors.hpp"

namespace sarfeas {

/// One SAR band. Gains and figures are stored in dB and converted with the
/// power convention (factor 10) where they enter linear expressions.
struct SarSystem {
    double center_freq_hz = 0.0;
    double peak_power_w = 0.0;
    double duty_factor = 0.0;       ///< in (0, 1]
    double prf_hz = 0.0;
    double bandwidth_hz = 0.0;
    double pulse_widening = 1.0;    ///< >= 1
    double antenna_gain_dbi = 0.0;
    double azimuth_res_m = 0.0;
    double noise_figure_db = 0.0;
    double system_loss_db = 0.0;
    double system_temp_k = 290.0;
    double boltzmann = 1.380e-23;   ///< J/K
    double light_speed = 3.0e8;     ///< m/s

    void validate() const {
        const auto pos = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw DomainError(std::string("sar: ") + name + " must be finite and > 0");
        };
        pos(center_freq_hz, "center_freq_hz");
        pos(peak_power_w, "peak_power_w");
        pos(prf_hz, "prf_hz");
        pos(bandwidth_hz, "bandwidth_hz");
        pos(azimuth_res_m, "azimuth_res_m");
        pos(system_temp_k, "system_temp_k");
        if (!(duty_factor > 0.0) || !(duty_factor <= 1.0))
            throw DomainError("sar: duty_factor must be in (0, 1]");
        if (!(pulse_widening >= 1.0))
            throw DomainError("sar: pulse_widening must be >= 1");
        if (!std::isfinite(antenna_gain_dbi) || !std::isfinite(noise_figure_db)
            || !std::isfinite(system_loss_db))
            throw DomainError("sar: dB figures must be finite");
    }
};

/// Ship class under consideration.
struct ShipModel {
    double length_m = 0.0;
    double width_m = 0.0;
    double beta = 0.0;        ///< lognormal shape of the backscatter law
    double tdw_side_m = 0.0;  ///< detection-window side, meters

    void validate() const {
        if (!(width_m > 0.0) || !(length_m >= width_m))
            throw DomainError("ship: require length_m >= width_m > 0");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw DomainError("ship: beta must be finite and > 0");
        if (!(tdw_side_m > 0.0) || !std::isfinite(tdw_side_m))
            throw DomainError("ship: tdw_side_m must be finite and > 0");
    }

    double area_m2() const { return length_m * width_m; }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Average transmit power, peak power times duty factor.
inline double avg_power(const SarSystem& sys) {
    return sys.peak_power_w * sys.duty_factor;
}

/// Slant-range resolution from the waveform bandwidth and widening constant.
inline double slant_res(const SarSystem& sys) {
    return sys.pulse_widening * sys.light_speed / (2.0 * sys.bandwidth_hz);
}

/// Ground-range resolution at the given grazing angle.
inline double ground_res(double delta_r_m, double grazing_deg) {
    return delta_r_m / std::cos(grazing_deg * std::numbers::pi / 180.0);
}

/// Resolution-cell area.
inline double resolution_cell_area(double delta_az_m, double delta_gr_m) {
    return delta_az_m * delta_gr_m;
}

/// Dimensionless SNR constant: the mean pixel SNR per unit mean
/// backscattering coefficient at slant range R and grazing angle psi.
inline double snr_constant(const SarSystem& sys, double slant_range_m,
                           double grazing_deg, double v_orbital_ms, double delta_r_m) {
    sys.validate();
    if (!(slant_range_m > 0.0) || !(v_orbital_ms > 0.0) || !(delta_r_m > 0.0))
        throw DomainError("snr_constant: range, speed and delta_r must be > 0");
    if (!(grazing_deg > 0.0) || !(grazing_deg < 90.0))
        throw DomainError("snr_constant: grazing angle must be in (0, 90) deg");
    const double gain = db_to_linear(sys.antenna_gain_dbi);
    const double lambda = sys.light_speed / sys.center_freq_hz;
    const double noise_factor = db_to_linear(sys.noise_figure_db);
    const double loss = db_to_linear(sys.system_loss_db);
    const double four_pi_cubed = std::pow(4.0 * std::numbers::pi, 3);
    const double num = avg_power(sys) * gain * gain * lambda * lambda * lambda * delta_r_m;
    const double den = 2.0 * four_pi_cubed * slant_range_m * slant_range_m * slant_range_m
                       * sys.boltzmann * sys.system_temp_k * noise_factor * loss
                       * v_orbital_ms * std::cos(grazing_deg * std::numbers::pi / 180.0);
    return num / den;
}

/// Mean pixel SNR for a given mean backscattering coefficient.
inline double mean_snr(double a, double mean_sigma0) { return a * mean_sigma0; }

/// Lognormal log-scale location from the distribution mean: ln(mean) - beta^2/2.
inline double alpha_from_mean(double mean, double beta) {
    if (!(mean > 0.0) || !(beta > 0.0))
        throw DomainError("alpha_from_mean: mean and beta must be > 0");
    return std::log(mean) - 0.5 * beta * beta;
}

/// Distribution mean from the lognormal log-scale location: exp(alpha + beta^2/2).
inline double mean_from_alpha(double alpha, double beta) {
    if (!std::isfinite(alpha) || !(beta > 0.0))
        throw DomainError("mean_from_alpha: alpha must be finite, beta > 0");
    return std::exp(alpha + 0.5 * beta * beta);
}

/// Maximum unambiguous range for a given PRF.
inline double unambiguous_range(double prf_hz) {
    if (!(prf_hz > 0.0)) throw DomainError("unambiguous_range: prf_hz must be > 0");
    return 3.0e8 / (2.0 * prf_hz);
}

}  // namespace sarfeas
