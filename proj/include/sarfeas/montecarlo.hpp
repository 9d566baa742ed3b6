#pragma once

// ============================================================================
// montecarlo.hpp -- stochastic oracles for the detection pipeline
//
// Counter-based RNG (Philox4x32-10) keyed by (seed, trial index), so results
// are bit-identical for a fixed seed regardless of chunking or worker count.
// Per-trial draw layout is fixed and documented next to each estimator.
// ============================================================================

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <thread>
#include <vector>

#include "sarfeas/detection.hpp"
#include "sarfeas/errors.hpp"
#include "sarfeas/parallel.hpp"

namespace sarfeas {

struct McConfig {
    std::uint64_t n_trials = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t chunk_size = 1u << 16;  ///< work-partition granularity only

    void validate() const {
        if (n_trials < 1) throw DomainError("mc: n_trials must be >= 1");
        if (chunk_size < 1) throw DomainError("mc: chunk_size must be >= 1");
    }
};

struct McEstimate {
    double estimate = 0.0;
    double std_err = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

struct ShipTrialResult {
    McEstimate detection;    ///< target-window detection rate
    McEstimate false_alarm;  ///< noise-only-window detection rate
};

namespace rng {

/// Philox4x32-10 block cipher (Random123 constants and round structure).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

/// Uniform double in (0, 1) from 64 bits (53-bit mantissa, half-ulp offset).
inline double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t v = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

/// One keyed block: counter = {lane, trial_lo, trial_hi, stream}.
inline std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t trial,
                                          std::uint32_t lane, std::uint32_t stream) {
    return philox4x32({lane, static_cast<std::uint32_t>(trial),
                       static_cast<std::uint32_t>(trial >> 32), stream},
                      {static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32)});
}

}  // namespace rng

namespace detail {

/// Runs fn(chunk_begin, chunk_end) over [0, n) in chunks; returns the sum of
/// the per-chunk success counts. Integer accumulation, order-independent.
template <class Fn>
std::uint64_t run_chunked(std::uint64_t n, std::uint64_t chunk, unsigned threads, Fn&& fn) {
    const std::uint64_t n_chunks = (n + chunk - 1) / chunk;
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> total{0};
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), n_chunks));
    auto worker = [&] {
        std::uint64_t local = 0;
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::uint64_t lo = c * chunk;
            const std::uint64_t hi = std::min(n, lo + chunk);
            local += fn(lo, hi);
        }
        total.fetch_add(local);
    };
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return total.load();
}

inline McEstimate to_estimate(std::uint64_t successes, std::uint64_t trials) {
    McEstimate e;
    e.successes = successes;
    e.trials = trials;
    e.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials));
    return e;
}

}  // namespace detail

/// Pixel-level detection-rate estimate under the lognormal-SNR pixel model.
///
/// Per trial t (streams: ctr.stream = `stream`, lanes 0..2):
///   lane 0 -> Box-Muller normal g: Y = alpha_prime + beta*g, X = exp(Y)
///   lane 1 -> phase Phi = 2*pi*u
///   lane 2 -> complex noise, components Normal(0, 1/2)
///   success iff |sqrt(X) e^{i Phi} + noise|^2 >= -ln(p_fa)
///
/// alpha_prime = -inf models the signal-free (X = 0) limit, where the success
/// rate reduces to p_fa. Deterministic for fixed (seed, stream) regardless of
/// chunk size or thread count.
inline McEstimate mc_pixel_pd(double alpha_prime, double beta, double p_fa,
                              const McConfig& cfg, unsigned threads = 0,
                              std::uint32_t stream = 0) {
    cfg.validate();
    if (!(beta >= 0.0) || std::isnan(alpha_prime))
        throw DomainError("mc_pixel_pd: beta must be >= 0 and alpha_prime not NaN");
    const double t_thresh = threshold_from_pfa(p_fa);
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    const std::uint64_t hits = detail::run_chunked(
        cfg.n_trials, cfg.chunk_size, threads,
        [&](std::uint64_t lo, std::uint64_t hi) {
            std::uint64_t k = 0;
            for (std::uint64_t t = lo; t < hi; ++t) {
                const auto b0 = rng::block(cfg.seed, t, 0, stream);
                const auto b1 = rng::block(cfg.seed, t, 1, stream);
                const auto b2 = rng::block(cfg.seed, t, 2, stream);
                const double u_y1 = rng::uniform53(b0[0], b0[1]);
                const double u_y2 = rng::uniform53(b0[2], b0[3]);
                const double g = std::sqrt(-2.0 * std::log(u_y1)) * std::cos(kTwoPi * u_y2);
                const double x = std::exp(alpha_prime + beta * g);
                const double phi = kTwoPi * rng::uniform53(b1[0], b1[1]);
                const double u_n1 = rng::uniform53(b2[0], b2[1]);
                const double u_n2 = rng::uniform53(b2[2], b2[3]);
                const double r = std::sqrt(-std::log(u_n1));  // sqrt(-2 ln u) / sqrt(2)
                const double n_re = r * std::cos(kTwoPi * u_n2);
                const double n_im = r * std::sin(kTwoPi * u_n2);
                const double amp = std::sqrt(x);
                const double re = amp * std::cos(phi) + n_re;
                const double im = amp * std::sin(phi) + n_im;
                k += (re * re + im * im >= t_thresh);
            }
            return k;
        });
    return detail::to_estimate(hits, cfg.n_trials);
}

/// Ship-level two-step detector trial. Each trial simulates one target window
/// (n_ps_w ship pixels surviving with probability p_d, the remaining
/// n_pw - n_ps_w with probability p_fa) and one noise-only window (n_pw
/// pixels at p_fa); detection is declared when survivors >= m.
///
/// Pixel i of window w draws one uniform from
/// ctr = {i, w_lo, w_hi, stream_base + 1 (target) / + 2 (noise)}.
inline ShipTrialResult mc_ship_trial(const WindowCounts& counts, double p_d, double p_fa,
                                     const McConfig& cfg, unsigned threads = 0,
                                     std::uint32_t stream_base = 0) {
    counts.validate();
    cfg.validate();
    if (!(p_d >= 0.0) || !(p_d <= 1.0) || !(p_fa >= 0.0) || !(p_fa <= 1.0))
        throw DomainError("mc_ship_trial: probabilities must be in [0, 1]");
    const auto window_hits = [&](std::uint32_t stream, bool target) {
        return detail::run_chunked(
            cfg.n_trials, cfg.chunk_size, threads,
            [&, stream, target](std::uint64_t lo, std::uint64_t hi) {
                std::uint64_t k = 0;
                for (std::uint64_t w = lo; w < hi; ++w) {
                    std::int64_t survivors = 0;
                    for (std::int64_t i = 0; i < counts.n_pw; ++i) {
                        const auto b =
                            rng::block(cfg.seed, w, static_cast<std::uint32_t>(i), stream);
                        const double p = (target && i < counts.n_ps_w) ? p_d : p_fa;
                        survivors += (rng::uniform53(b[0], b[1]) < p);
                        if (survivors >= counts.m) break;
                    }
                    k += (survivors >= counts.m);
                }
                return k;
            });
    };
    ShipTrialResult out;
    out.detection = detail::to_estimate(window_hits(stream_base + 1, true), cfg.n_trials);
    out.false_alarm = detail::to_estimate(window_hits(stream_base + 2, false), cfg.n_trials);
    return out;
}

}  // namespace sarfeas
