#pragma once

// ============================================================================
// scenario.hpp -- the full input bundle for one feasibility study
// ============================================================================

#include <optional>
#include <string>
#include <vector>

#include "sarfeas/detection.hpp"
#include "sarfeas/errors.hpp"
#include "sarfeas/geometry.hpp"
#include "sarfeas/montecarlo.hpp"
#include "sarfeas/radar.hpp"

namespace sarfeas {

/// How many ship pixels a single detection window may contain.
enum class WindowModel {
    kMin,      ///< min(n_ps, n_pw)
    kClipped,  ///< ship footprint clipped to the window side, then pixelized
};

struct SweepSpec {
    double delta_r_start_m = 0.0;
    double delta_r_step_m = 0.0;
    double delta_r_stop_m = 0.0;

    void validate() const {
        if (!(delta_r_start_m > 0.0) || !(delta_r_stop_m >= delta_r_start_m)
            || !(delta_r_step_m > 0.0))
            throw DomainError("sweep: require 0 < start <= stop and step > 0");
    }

    std::vector<double> values() const {
        validate();
        std::vector<double> v;
        for (int i = 0;; ++i) {
            const double dr = delta_r_start_m + i * delta_r_step_m;
            if (dr > delta_r_stop_m * (1.0 + 1e-9)) break;
            v.push_back(dr);
        }
        return v;
    }
};

struct ScenarioOptions {
    WindowModel window_overlap_model = WindowModel::kMin;
    double sigma0_bracket_lo = 0.01;
    double sigma0_bracket_hi = 100.0;
    std::optional<double> v_orbital_ms;  ///< pins the orbital speed when set
    McConfig mc;

    void validate() const {
        if (!(sigma0_bracket_lo > 0.0) || !(sigma0_bracket_hi > sigma0_bracket_lo))
            throw DomainError("options: require 0 < sigma0_bracket_lo < sigma0_bracket_hi");
        if (v_orbital_ms && !(*v_orbital_ms > 0.0))
            throw DomainError("options: v_orbital_ms must be > 0");
        mc.validate();
    }
};

struct NamedBand {
    std::string name;
    SarSystem sys;
};

struct ScenarioConfig {
    GeometryInputs geometry;
    std::vector<NamedBand> bands;
    ShipModel ship;
    DetectionRequirements detection;
    SweepSpec sweep;
    ScenarioOptions options;

    void validate() const {
        geometry.validate();
        if (bands.empty()) throw DomainError("scenario: at least one sar band required");
        for (const auto& b : bands) b.sys.validate();
        ship.validate();
        detection.validate();
        sweep.validate();
        options.validate();
    }

    const NamedBand& band(const std::string& name) const {
        for (const auto& b : bands)
            if (b.name == name) return b;
        throw DomainError("scenario: unknown band '" + name + "'");
    }
};

}  // namespace sarfeas
