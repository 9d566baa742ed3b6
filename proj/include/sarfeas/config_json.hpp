#pragma once

// ============================================================================
// config_json.hpp -- strict JSON loading of ScenarioConfig
//
// Validation is fail-closed: unknown keys are rejected at every level, types
// are checked and all type invariants are enforced before any computation.
// dB-valued keys carry an explicit _db/_dbi suffix; linear values never share
// a key name with dB values.
// ============================================================================

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sarfeas/errors.hpp"
#include "sarfeas/scenario.hpp"

namespace sarfeas {

using json = nlohmann::ordered_json;

namespace cfg_detail {

inline void expect_object(const json& j, const std::string& path) {
    if (!j.is_object())
        throw ConfigError(path + ": expected an object");
}

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError(path + ": unknown key '" + item.key() + "'");
    }
}

inline double get_num(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key))
        throw ConfigError(path + ": missing required key '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline double get_num_or(const json& obj, const char* key, const std::string& path,
                         double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path + "." + key + ": expected a number");
    return v.get<double>();
}

inline std::uint64_t get_uint_or(const json& obj, const char* key, const std::string& path,
                                 std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError(path + "." + key + ": expected a non-negative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw ConfigError(path + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

}  // namespace cfg_detail

inline ScenarioConfig scenario_from_json(const json& root) {
    using namespace cfg_detail;
    ScenarioConfig sc;
    expect_object(root, "config");
    reject_unknown(root, "config", {"geometry", "sar", "ship", "detection", "sweep", "options"});
    for (const char* req : {"geometry", "sar", "ship", "detection", "sweep"})
        if (!root.contains(req))
            throw ConfigError(std::string("config: missing required section '") + req + "'");

    {
        const json& g = root.at("geometry");
        expect_object(g, "geometry");
        reject_unknown(g, "geometry",
                       {"altitude_m", "look_angle_deg", "swath_m", "earth_radius_m", "mu_m3s2"});
        sc.geometry.altitude_m = get_num(g, "altitude_m", "geometry");
        sc.geometry.look_angle_deg = get_num(g, "look_angle_deg", "geometry");
        sc.geometry.swath_m = get_num(g, "swath_m", "geometry");
        sc.geometry.earth_radius_m =
            get_num_or(g, "earth_radius_m", "geometry", sc.geometry.earth_radius_m);
        sc.geometry.mu_m3s2 = get_num_or(g, "mu_m3s2", "geometry", sc.geometry.mu_m3s2);
    }
    {
        const json& bands = root.at("sar");
        expect_object(bands, "sar");
        if (bands.empty())
            throw ConfigError("sar: at least one named band required");
        for (const auto& item : bands.items()) {
            const std::string path = "sar." + item.key();
            const json& b = item.value();
            expect_object(b, path);
            reject_unknown(b, path,
                           {"center_freq_hz", "peak_power_w", "duty_factor", "prf_hz",
                            "bandwidth_hz", "pulse_widening", "antenna_gain_dbi",
                            "azimuth_res_m", "noise_figure_db", "system_loss_db",
                            "system_temp_k"});
            SarSystem s;
            s.center_freq_hz = get_num(b, "center_freq_hz", path);
            s.peak_power_w = get_num(b, "peak_power_w", path);
            s.duty_factor = get_num(b, "duty_factor", path);
            s.prf_hz = get_num(b, "prf_hz", path);
            s.bandwidth_hz = get_num(b, "bandwidth_hz", path);
            s.pulse_widening = get_num(b, "pulse_widening", path);
            s.antenna_gain_dbi = get_num(b, "antenna_gain_dbi", path);
            s.azimuth_res_m = get_num(b, "azimuth_res_m", path);
            s.noise_figure_db = get_num(b, "noise_figure_db", path);
            s.system_loss_db = get_num(b, "system_loss_db", path);
            s.system_temp_k = get_num_or(b, "system_temp_k", path, s.system_temp_k);
            sc.bands.push_back(NamedBand{item.key(), s});
        }
    }
    {
        const json& s = root.at("ship");
        expect_object(s, "ship");
        reject_unknown(s, "ship", {"length_m", "width_m", "beta", "tdw_side_m"});
        sc.ship.length_m = get_num(s, "length_m", "ship");
        sc.ship.width_m = get_num(s, "width_m", "ship");
        sc.ship.beta = get_num(s, "beta", "ship");
        sc.ship.tdw_side_m = get_num(s, "tdw_side_m", "ship");
    }
    {
        const json& d = root.at("detection");
        expect_object(d, "detection");
        reject_unknown(d, "detection",
                       {"p_d_target", "p_fa_pixel", "p_fa_overall", "aoi_area_m2"});
        sc.detection.p_d_target = get_num(d, "p_d_target", "detection");
        if (d.contains("p_fa_pixel"))
            sc.detection.p_fa_pixel = get_num(d, "p_fa_pixel", "detection");
        if (d.contains("p_fa_overall"))
            sc.detection.p_fa_overall = get_num(d, "p_fa_overall", "detection");
        if (d.contains("aoi_area_m2"))
            sc.detection.aoi_area_m2 = get_num(d, "aoi_area_m2", "detection");
    }
    {
        const json& w = root.at("sweep");
        expect_object(w, "sweep");
        reject_unknown(w, "sweep", {"delta_r_start_m", "delta_r_step_m", "delta_r_stop_m"});
        sc.sweep.delta_r_start_m = get_num(w, "delta_r_start_m", "sweep");
        sc.sweep.delta_r_step_m = get_num(w, "delta_r_step_m", "sweep");
        sc.sweep.delta_r_stop_m = get_num(w, "delta_r_stop_m", "sweep");
    }
    if (root.contains("options")) {
        const json& o = root.at("options");
        expect_object(o, "options");
        reject_unknown(o, "options",
                       {"window_overlap_model", "sigma0_bracket", "v_orbital_ms", "mc"});
        if (o.contains("window_overlap_model")) {
            const json& v = o.at("window_overlap_model");
            if (!v.is_string())
                throw ConfigError("options.window_overlap_model: expected \"min\" or \"clipped\"");
            const std::string s = v.get<std::string>();
            if (s == "min")
                sc.options.window_overlap_model = WindowModel::kMin;
            else if (s == "clipped")
                sc.options.window_overlap_model = WindowModel::kClipped;
            else
                throw ConfigError("options.window_overlap_model: expected \"min\" or \"clipped\"");
        }
        if (o.contains("sigma0_bracket")) {
            const json& v = o.at("sigma0_bracket");
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
                throw ConfigError("options.sigma0_bracket: expected [lo, hi]");
            sc.options.sigma0_bracket_lo = v[0].get<double>();
            sc.options.sigma0_bracket_hi = v[1].get<double>();
        }
        if (o.contains("v_orbital_ms"))
            sc.options.v_orbital_ms = get_num(o, "v_orbital_ms", "options");
        if (o.contains("mc")) {
            const json& m = o.at("mc");
            expect_object(m, "options.mc");
            reject_unknown(m, "options.mc", {"n_trials", "seed", "chunk_size"});
            sc.options.mc.n_trials =
                get_uint_or(m, "n_trials", "options.mc", sc.options.mc.n_trials);
            sc.options.mc.seed = get_uint_or(m, "seed", "options.mc", sc.options.mc.seed);
            sc.options.mc.chunk_size =
                get_uint_or(m, "chunk_size", "options.mc", sc.options.mc.chunk_size);
        }
    }
    try {
        sc.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config validation: ") + e.what());
    }
    return sc;
}

/// Loads and validates a scenario file. All failures map to ConfigError.
inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("JSON parse error in ") + path + ": " + e.what());
    }
    return scenario_from_json(root);
}

/// FNV-1a 64-bit hash of a file's bytes, for output provenance headers.
inline std::string file_fnv1a64(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

}  // namespace sarfeas
