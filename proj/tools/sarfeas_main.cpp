// ============================================================================
// sarfeas -- feasibility analysis CLI for spaceborne SAR ship detection
//
// Subcommands:
//   geometry  <config>   derived surveillance geometry report
//   validate  <config>   pixel-level detection theory vs Monte Carlo (CSV)
//   sweep     <config>   minimum detectable RCS vs slant-range resolution (CSV)
//   pipeline  <config>   full single-point evaluation dump
//
// Exit codes: 0 success, 2 config/schema error, 3 domain/geometry error,
// 4 numerical non-convergence. SARFEAS_THREADS caps worker threads (0 = auto).
// ============================================================================

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sarfeas/config_json.hpp"
#include "sarfeas/detection.hpp"
#include "sarfeas/feasibility.hpp"
#include "sarfeas/geometry.hpp"
#include "sarfeas/montecarlo.hpp"
#include "sarfeas/parallel.hpp"
#include "sarfeas/version.hpp"

namespace {

using sarfeas::ScenarioConfig;

unsigned env_threads() {
    const char* v = std::getenv("SARFEAS_THREADS");
    if (!v || !*v) return 0;
    const long n = std::strtol(v, nullptr, 10);
    return n > 0 ? static_cast<unsigned>(n) : 0;
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string g12(double v) { return fmt("%.12g", v); }

/// Output sink: stdout or a file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw sarfeas::ConfigError("cannot open output file: " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_preamble(std::ostream& os, const std::string& command,
                    const std::string& config_path, const std::string& extra = "") {
    os << "# " << sarfeas::kToolName << " " << sarfeas::kToolVersion << "\n";
    os << "# command: " << command << "\n";
    os << "# config: " << config_path << "\n";
    os << "# config_hash: fnv1a64:" << sarfeas::file_fnv1a64(config_path) << "\n";
    if (!extra.empty()) os << extra;
}

const sarfeas::NamedBand& pick_band(const ScenarioConfig& sc, const std::string& name) {
    if (!name.empty()) return sc.band(name);
    return sc.bands.front();
}

// ----------------------------------------------------------------- geometry
int cmd_geometry(const std::string& config_path, const std::string& out_path,
                 const std::string& format) {
    const ScenarioConfig sc = sarfeas::load_scenario(config_path);
    const sarfeas::SurveillanceGeometry g = sarfeas::derive_geometry(sc.geometry);
    Sink sink(out_path);
    std::ostream& os = sink.out();
    if (format == "csv") {
        write_preamble(os, "geometry", config_path);
        os << "# columns: quantity,value,units\n";
        os << "quantity,value,units\n";
        os << "r_slant_min_m," << g12(g.r_slant_min_m) << ",m\n";
        os << "r_slant_max_m," << g12(g.r_slant_max_m) << ",m\n";
        os << "r_ground_min_m," << g12(g.r_ground_min_m) << ",m\n";
        os << "r_ground_max_m," << g12(g.r_ground_max_m) << ",m\n";
        os << "grazing_far_deg," << g12(g.grazing_far_deg) << ",deg\n";
        os << "grazing_near_deg," << g12(g.grazing_near_deg) << ",deg\n";
        os << "v_orbital_ms," << g12(g.v_orbital_ms) << ",m/s\n";
        os << "v_ground_ms," << g12(g.v_ground_ms) << ",m/s\n";
        if (sc.options.v_orbital_ms)
            os << "v_orbital_pinned_ms," << g12(*sc.options.v_orbital_ms) << ",m/s\n";
    } else {
        os << "surveillance geometry (derived)\n";
        os << "  slant range min/max   : " << fmt("%.3f", g.r_slant_min_m) << " / "
           << fmt("%.3f", g.r_slant_max_m) << " m\n";
        os << "  ground range min/max  : " << fmt("%.3f", g.r_ground_min_m) << " / "
           << fmt("%.3f", g.r_ground_max_m) << " m\n";
        os << "  grazing far/near edge : " << fmt("%.4f", g.grazing_far_deg) << " / "
           << fmt("%.4f", g.grazing_near_deg) << " deg\n";
        os << "  orbital / ground speed: " << fmt("%.3f", g.v_orbital_ms) << " / "
           << fmt("%.3f", g.v_ground_ms) << " m/s\n";
        if (sc.options.v_orbital_ms)
            os << "  orbital speed (pinned): " << fmt("%.3f", *sc.options.v_orbital_ms)
               << " m/s (config override)\n";
    }
    return 0;
}

// ----------------------------------------------------------------- validate
int cmd_validate(const std::string& config_path, const std::string& out_path,
                 std::optional<std::uint64_t> nmc, std::optional<std::uint64_t> seed,
                 double pfa, std::vector<double> betas, double snr_min_db,
                 double snr_max_db, double snr_step_db) {
    const ScenarioConfig sc = sarfeas::load_scenario(config_path);
    sarfeas::McConfig mc = sc.options.mc;
    if (nmc) mc.n_trials = *nmc;
    if (seed) mc.seed = *seed;
    if (betas.empty()) betas = {1.5, 2.0, 2.5};
    const unsigned threads = env_threads();

    Sink sink(out_path);
    std::ostream& os = sink.out();
    std::ostringstream extra;
    extra << "# seed: " << mc.seed << "\n# n_trials: " << mc.n_trials << "\n# rng: "
          << sarfeas::kRngName << "\n# p_fa: " << g12(pfa) << "\n";
    write_preamble(os, "validate", config_path, extra.str());
    os << "# columns: beta,mean_snr_db,pd_theory,pd_mc,std_err,rel_err_pct\n";
    os << "beta,mean_snr_db,pd_theory,pd_mc,std_err,rel_err_pct\n";

    std::uint32_t stream = 0;
    std::ostringstream summary;
    double overall_max = 0.0;
    for (double beta : betas) {
        double max_rel = 0.0;
        for (double snr_db = snr_min_db; snr_db <= snr_max_db + 1e-9; snr_db += snr_step_db) {
            const double xbar = sarfeas::db_to_linear(snr_db);
            const double alpha_prime = sarfeas::alpha_from_mean(xbar, beta);
            const double pd_theory = sarfeas::pd_lognormal(alpha_prime, beta, pfa);
            const sarfeas::McEstimate est =
                sarfeas::mc_pixel_pd(alpha_prime, beta, pfa, mc, threads, stream++);
            const double rel_pct = 100.0 * std::fabs(pd_theory - est.estimate) / pd_theory;
            max_rel = std::max(max_rel, rel_pct);
            os << g12(beta) << "," << g12(snr_db) << "," << g12(pd_theory) << ","
               << g12(est.estimate) << "," << g12(est.std_err) << "," << g12(rel_pct) << "\n";
        }
        summary << "# max_rel_err_pct beta=" << g12(beta) << ": " << g12(max_rel) << "\n";
        overall_max = std::max(overall_max, max_rel);
    }
    os << summary.str();
    os << "# max_rel_err_pct overall: " << g12(overall_max) << "\n";
    return 0;
}

// -------------------------------------------------------------------- sweep
void write_sweep_csv(std::ostream& os, const std::string& config_path,
                     const ScenarioConfig& sc, const sarfeas::NamedBand& band,
                     const sarfeas::SweepResult& res) {
    std::ostringstream extra;
    extra << "# band: " << band.name << "\n";
    write_preamble(os, "sweep", config_path, extra.str());
    os << "# columns: delta_r_m,min_sigma0_db,rcs_min_m2,m,p_d,converged\n";
    os << "delta_r_m,min_sigma0_db,rcs_min_m2,m,p_d,converged\n";
    for (const auto& p : res.points) {
        if (p.converged) {
            os << g12(p.delta_r_m) << "," << g12(p.min_sigma0_db) << "," << g12(p.rcs_min_m2)
               << "," << p.m << "," << g12(p.p_d_at_solution) << ",1\n";
        } else {
            os << g12(p.delta_r_m) << ",,,,," << "0\n";
        }
    }
    const auto& first = res.points.front();
    const auto& last = res.points.back();
    if (res.optimum_index) {
        const auto& opt = res.points[*res.optimum_index];
        os << "# optimum: delta_r_m=" << g12(opt.delta_r_m) << " min_sigma0_db="
           << g12(opt.min_sigma0_db) << " rcs_min_m2=" << g12(opt.rcs_min_m2)
           << " m=" << opt.m << "\n";
    }
    for (const auto* p : {&first, &last}) {
        os << "# endpoint: delta_r_m=" << g12(p->delta_r_m);
        if (p->converged)
            os << " min_sigma0_db=" << g12(p->min_sigma0_db) << " rcs_min_m2="
               << g12(p->rcs_min_m2);
        else
            os << " converged=0 status=\"" << p->status << "\"";
        os << "\n";
    }
}

std::string band_out_path(const std::string& out_path, const std::string& band_name) {
    const auto dot = out_path.find_last_of('.');
    const auto slash = out_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + "_" + band_name;
    return out_path.substr(0, dot) + "_" + band_name + out_path.substr(dot);
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& band_name) {
    const ScenarioConfig sc = sarfeas::load_scenario(config_path);
    const unsigned threads = env_threads();
    const std::vector<double> drs = sc.sweep.values();

    std::vector<const sarfeas::NamedBand*> bands;
    if (!band_name.empty()) {
        bands.push_back(&sc.band(band_name));
    } else {
        for (const auto& b : sc.bands) bands.push_back(&b);
    }
    for (const auto* b : bands) {
        const sarfeas::SweepResult res = sarfeas::sweep(sc, b->sys, drs, threads);
        if (bands.size() == 1) {
            Sink sink(out_path);
            write_sweep_csv(sink.out(), config_path, sc, *b, res);
        } else if (!out_path.empty()) {
            Sink sink(band_out_path(out_path, b->name));
            write_sweep_csv(sink.out(), config_path, sc, *b, res);
        } else {
            write_sweep_csv(std::cout, config_path, sc, *b, res);
        }
    }
    return 0;
}

// ----------------------------------------------------------------- pipeline
int cmd_pipeline(const std::string& config_path, const std::string& out_path,
                 const std::string& band_name, double sigma0_db,
                 std::optional<double> delta_r) {
    const ScenarioConfig sc = sarfeas::load_scenario(config_path);
    const sarfeas::NamedBand& band = pick_band(sc, band_name);
    const double dr = delta_r ? *delta_r : sarfeas::slant_res(band.sys);
    const double sigma0 = sarfeas::db_to_linear(sigma0_db);
    const sarfeas::PipelineResult r = sarfeas::run_pipeline(sc, band.sys, sigma0, dr);
    Sink sink(out_path);
    std::ostream& os = sink.out();
    os << "pipeline evaluation\n";
    os << "  band           : " << band.name << "\n";
    os << "  sigma0         : " << g12(sigma0_db) << " dB (" << g12(sigma0) << " linear)\n";
    os << "  delta_r        : " << g12(r.delta_r_m) << " m\n";
    os << "  slant_range    : " << g12(r.slant_range_m) << " m (far swath edge)\n";
    os << "  grazing        : " << g12(r.grazing_deg) << " deg\n";
    os << "  v_orbital      : " << g12(r.v_orbital_ms) << " m/s\n";
    os << "  ship_area      : " << g12(r.ship_area_m2) << " m^2\n";
    os << "  a              : " << g12(r.a) << " (" << g12(sarfeas::linear_to_db(r.a))
       << " dB)\n";
    os << "  mean_snr       : " << g12(r.mean_snr) << " ("
       << g12(sarfeas::linear_to_db(r.mean_snr)) << " dB)\n";
    os << "  alpha_prime    : " << g12(r.alpha_prime) << "\n";
    os << "  delta_gr       : " << g12(r.delta_gr_m) << " m\n";
    os << "  a_res          : " << g12(r.a_res_m2) << " m^2\n";
    os << "  delta_min      : " << g12(r.delta_min_m) << " m\n";
    os << "  counts         : P_w=" << r.counts.p_w << " N_pw=" << r.counts.n_pw
       << " N_ps=" << r.counts.n_ps << " N_ps_w=" << r.counts.n_ps_w
       << " m=" << r.counts.m << "\n";
    os << "  threshold      : " << g12(r.threshold) << "\n";
    os << "  p_fa           : " << g12(r.p_fa) << "\n";
    os << "  p_d            : " << g12(r.p_d) << "\n";
    os << "  p_d_ship       : " << g12(r.p_d_ship) << "\n";
    os << "  p_fa_ship      : " << g12(r.p_fa_ship) << "\n";
    return 0;
}

int cmd_pipeline_csv(const std::string& config_path, const std::string& out_path,
                     const std::string& band_name, double sigma0_db,
                     std::optional<double> delta_r) {
    const ScenarioConfig sc = sarfeas::load_scenario(config_path);
    const sarfeas::NamedBand& band = pick_band(sc, band_name);
    const double dr = delta_r ? *delta_r : sarfeas::slant_res(band.sys);
    const double sigma0 = sarfeas::db_to_linear(sigma0_db);
    const sarfeas::PipelineResult r = sarfeas::run_pipeline(sc, band.sys, sigma0, dr);
    Sink sink(out_path);
    std::ostream& os = sink.out();
    std::ostringstream extra;
    extra << "# band: " << band.name << "\n";
    write_preamble(os, "pipeline", config_path, extra.str());
    os << "# columns: band,sigma0_db,delta_r_m,slant_range_m,grazing_deg,v_orbital_ms,"
          "ship_area_m2,a,mean_snr,alpha_prime,delta_gr_m,a_res_m2,delta_min_m,p_w,n_pw,"
          "n_ps,n_ps_w,m,threshold,p_fa,p_d,p_d_ship,p_fa_ship\n";
    os << "band,sigma0_db,delta_r_m,slant_range_m,grazing_deg,v_orbital_ms,ship_area_m2,a,"
          "mean_snr,alpha_prime,delta_gr_m,a_res_m2,delta_min_m,p_w,n_pw,n_ps,n_ps_w,m,"
          "threshold,p_fa,p_d,p_d_ship,p_fa_ship\n";
    os << band.name << "," << g12(sigma0_db) << "," << g12(r.delta_r_m) << ","
       << g12(r.slant_range_m) << "," << g12(r.grazing_deg) << "," << g12(r.v_orbital_ms)
       << "," << g12(r.ship_area_m2) << "," << g12(r.a) << "," << g12(r.mean_snr) << ","
       << g12(r.alpha_prime) << "," << g12(r.delta_gr_m) << "," << g12(r.a_res_m2) << ","
       << g12(r.delta_min_m) << "," << r.counts.p_w << "," << r.counts.n_pw << ","
       << r.counts.n_ps << "," << r.counts.n_ps_w << "," << r.counts.m << ","
       << g12(r.threshold) << "," << g12(r.p_fa) << "," << g12(r.p_d) << ","
       << g12(r.p_d_ship) << "," << g12(r.p_fa_ship) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spaceborne SAR ship-detection feasibility analysis"};
    app.require_subcommand(1);

    std::string config_path, out_path, band, format = "text";
    std::optional<std::uint64_t> nmc, seed;
    double pfa = 1e-10;
    std::vector<double> betas;
    double snr_min = 0.0, snr_max = 50.0, snr_step = 2.0;
    double sigma0_db = 0.0;
    std::optional<double> delta_r;

    CLI::App* c_geo = app.add_subcommand("geometry", "derived surveillance geometry");
    c_geo->add_option("config", config_path, "scenario JSON")->required();
    c_geo->add_option("--out", out_path, "output path (default stdout)");
    c_geo->add_option("--format", format, "text|csv")
        ->check(CLI::IsMember({"text", "csv"}));

    CLI::App* c_val = app.add_subcommand("validate", "detection theory vs Monte Carlo");
    c_val->add_option("config", config_path, "scenario JSON")->required();
    c_val->add_option("--out", out_path, "output CSV path (default stdout)");
    c_val->add_option("--nmc", nmc, "Monte Carlo trials per grid point");
    c_val->add_option("--seed", seed, "RNG seed override");
    c_val->add_option("--pfa", pfa, "pixel false-alarm probability (default 1e-10)");
    c_val->add_option("--betas", betas, "lognormal shape values (default 1.5 2 2.5)");
    c_val->add_option("--snr-min", snr_min, "grid start, dB (default 0)");
    c_val->add_option("--snr-max", snr_max, "grid stop, dB (default 50)");
    c_val->add_option("--snr-step", snr_step, "grid step, dB (default 2)");

    CLI::App* c_swp = app.add_subcommand("sweep", "minimum detectable RCS vs delta_r");
    c_swp->add_option("config", config_path, "scenario JSON")->required();
    c_swp->add_option("--band", band, "band name (default: all bands)");
    c_swp->add_option("--out", out_path, "output CSV path (suffixed per band)");

    CLI::App* c_pip = app.add_subcommand("pipeline", "single-point pipeline dump");
    c_pip->add_option("config", config_path, "scenario JSON")->required();
    c_pip->add_option("--band", band, "band name (default: first)");
    c_pip->add_option("--sigma0-db", sigma0_db, "mean backscatter, dB (default 0)");
    c_pip->add_option("--delta-r", delta_r, "slant-range resolution, m "
                                            "(default: from bandwidth)");
    c_pip->add_option("--out", out_path, "output path (default stdout)");
    c_pip->add_option("--format", format, "text|csv")
        ->check(CLI::IsMember({"text", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_geo->parsed()) return cmd_geometry(config_path, out_path, format);
        if (c_val->parsed())
            return cmd_validate(config_path, out_path, nmc, seed, pfa, betas, snr_min,
                                snr_max, snr_step);
        if (c_swp->parsed()) return cmd_sweep(config_path, out_path, band);
        if (c_pip->parsed()) {
            if (format == "csv")
                return cmd_pipeline_csv(config_path, out_path, band, sigma0_db, delta_r);
            return cmd_pipeline(config_path, out_path, band, sigma0_db, delta_r);
        }
    } catch (const sarfeas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const sarfeas::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const sarfeas::NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
