#pragma once

// ============================================================================
// sigmath.hpp -- special functions and quadrature for detection statistics
//
// Marcum Q1, regularized incomplete beta and its inverse, and expectation of
// a bounded function over a lognormal random variable via Gauss-Hermite
// quadrature with node-count escalation. All functions are pure and
// thread-safe.
// ============================================================================

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "sarfeas/errors.hpp"

namespace sarfeas {

/// Parameters of a lognormal law: if X ~ LN(alpha, beta) then
/// ln X ~ Normal(alpha, beta^2).
struct LogNormalParams {
    double alpha = 0.0;  ///< log-scale location
    double beta = 1.0;   ///< log-scale standard deviation, > 0

    void validate() const {
        if (!std::isfinite(alpha))
            throw DomainError("LogNormalParams: alpha must be finite");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw DomainError("LogNormalParams: beta must be finite and > 0");
    }
};

namespace detail {

/// P(Poisson(x) >= j), computed without subtractive cancellation in either
/// tail. Exact 1 for j <= 0, exact 0 for x <= 0 (and j >= 1).
inline double poisson_sf(std::int64_t j, double x) {
    if (j <= 0) return 1.0;
    if (x <= 0.0) return 0.0;
    if (j == 1) return -std::expm1(-x);
    const double dj = static_cast<double>(j);
    if (x >= dj) {
        // left region: 1 - P(N <= j-1); the cdf here is <= ~0.5 so the final
        // subtraction costs at most one bit. Sum downward from the largest
        // term at i = j-1.
        double lt = (dj - 1.0) * std::log(x) - x - std::lgamma(dj);
        double term = std::exp(lt);
        if (term == 0.0) return 1.0;
        double sum = term;
        for (std::int64_t i = j - 1; i >= 1; --i) {
            term *= static_cast<double>(i) / x;
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return 1.0 - sum;
    }
    // right tail directly: term ratio x/(j+1) < 1
    double lt = dj * std::log(x) - x - std::lgamma(dj + 1.0);
    double term = std::exp(lt);
    if (term == 0.0) return 0.0;
    double sum = term;
    for (std::int64_t i = j + 1; i < j + 200000; ++i) {
        term *= x / static_cast<double>(i);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

}  // namespace detail

/// Marcum Q function of order 1: Q1(a,b) = P(|a e^{j phi} + n|^2 >= b^2) for
/// circular complex noise of per-component variance 1.
///
/// Evaluated as the Poisson mixture Q1(a,b) = sum_j P(N_y = j) P(N_x >= j)
/// with x = a^2/2, y = b^2/2; the sum runs over the significant mass of
/// Poisson(y), so the term count is governed by b (small here) and the result
/// stays accurate for arbitrarily large a, where conventional a-side series
/// summation degrades. Full precision for b up to ~37 (y below the exp
/// underflow knee); monotone nondecreasing in a, nonincreasing in b.
inline double marcum_q1(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("marcum_q1: arguments must be finite and >= 0");
    if (b == 0.0) return 1.0;
    const double x = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (a == 0.0) return std::exp(-y);

    const double margin = 12.0 * std::sqrt(y) + 30.0;
    const std::int64_t j_hi = static_cast<std::int64_t>(y + margin);
    std::int64_t j_lo = 0;
    double w;  // Poisson(y) weight at j_lo
    if (y > 700.0) {
        // exp(-y) underflows; start at the smaller of the bulk of Poisson(y)
        // and the product peak near sqrt(x*y), with a log-space first weight.
        const double start = std::min(y, std::sqrt(x * y));
        j_lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(start - margin));
        const double dj = static_cast<double>(j_lo);
        w = std::exp(dj * std::log(y) - y - std::lgamma(dj + 1.0));
    } else {
        w = std::exp(-y);
    }

    // survival S = P(N_x >= j), advanced by subtraction while it stays large;
    // small values are rebuilt by direct tail sums to avoid cancellation.
    double q = 0.0;
    double s = detail::poisson_sf(j_lo, x);
    double pj = 0.0;  // P(N_x = j), maintained alongside s
    {
        const double dj = static_cast<double>(j_lo);
        pj = (x > 0.0) ? std::exp(dj * std::log(x) - x - std::lgamma(dj + 1.0)) : 0.0;
    }
    double wsum = 0.0;
    bool tail_added = false;
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        q += w * s;
        wsum += w;
        if (wsum >= 1.0 || (1.0 - wsum) * s < q * 1e-17) {
            // remaining terms are bounded by (1-wsum)*s; adding the bound
            // keeps values adjacent to 1 from losing their last ulp
            q += (1.0 - wsum) * s;
            tail_added = true;
            break;
        }
        // advance to j+1
        const double dj1 = static_cast<double>(j + 1);
        w *= y / dj1;
        double s_next = s - pj;
        pj *= x / dj1;
        if (s_next < 0.25 && dj1 > x) {
            s = detail::poisson_sf(j + 1, x);
            pj = (x > 0.0) ? std::exp(dj1 * std::log(x) - x - std::lgamma(dj1 + 1.0)) : 0.0;
        } else {
            s = s_next;
        }
    }
    if (!tail_added) q += (1.0 - wsum) * s;
    return std::min(std::max(q, 0.0), 1.0);
}

namespace detail {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_cf(double a, double b, double x) {
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;
    constexpr int kMaxIter = 20000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= kEps) return h;
    }
    throw NumericError("reg_inc_beta: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b). Exact 0 at x = 0 and
/// exact 1 at x = 1; strictly increasing in x.
inline double reg_inc_beta(double x, double a, double b) {
    if (!(x >= 0.0) || !(x <= 1.0))
        throw DomainError("reg_inc_beta: x must be in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("reg_inc_beta: a and b must be finite and > 0");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_pre = a * std::log(x) + b * std::log1p(-x) - detail::log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_pre) * detail::beta_cf(a, b, x) / a;
    return 1.0 - std::exp(ln_pre) * detail::beta_cf(b, a, 1.0 - x) / b;
}

/// Inverse of I_x(a, b) in x: returns x with I_x(a,b) = p to 1e-12 relative
/// (or to the width of one representable step where the function is steeper
/// than that). Safeguarded Newton bracketed by bisection; throws NumericError
/// if the iteration cap is exhausted without meeting either criterion.
inline double reg_inc_beta_inv(double p, double a, double b) {
    if (!(p >= 0.0) || !(p <= 1.0))
        throw DomainError("reg_inc_beta_inv: p must be in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("reg_inc_beta_inv: a and b must be finite and > 0");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (p > 0.5) return 1.0 - reg_inc_beta_inv(1.0 - p, b, a);

    // small-x series start: I_x ~ x^a / (a B(a,b))
    double x = std::exp((std::log(p) + std::log(a) + detail::log_beta(a, b)) / a);
    if (!(x > 0.0) || !(x < 0.75)) x = 0.5;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double f = reg_inc_beta(x, a, b) - p;
        if (std::fabs(f) <= 1e-13 * p) return x;
        if (f > 0.0) hi = x; else lo = x;
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(hi, 1e-300))
            return x;  // bracket collapsed to adjacent representables
        const double ln_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x)
                              - detail::log_beta(a, b);
        double next = std::numeric_limits<double>::quiet_NaN();
        if (ln_pdf > -700.0) next = x - f / std::exp(ln_pdf);
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw NumericError("reg_inc_beta_inv: iteration cap exhausted");
}

// ============================================================================
// Gauss-Hermite quadrature (weight e^{-t^2}), used for lognormal expectations
// ============================================================================
namespace detail {

struct GhRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
/// method. diag has length n, off has length n (last entry ignored).
inline std::vector<double> tridiag_eigenvalues(std::vector<double> diag,
                                               std::vector<double> off) {
    const int n = static_cast<int>(diag.size());
    off.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
                if (std::fabs(off[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw NumericError("tridiag_eigenvalues: too many QL iterations");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * off[i];
                    const double bb = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * bb;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - bb;
                }
                if (r == 0.0 && i >= l) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

/// Orthonormal Hermite recurrence (weight e^{-t^2}) evaluated with dynamic
/// rescaling: returns p_n, p_{n-1} and sum of squares p_0..p_{n-1}, all as
/// value * exp(log_scale).
struct HermiteEval {
    double p_n;
    double p_nm1;
    double sumsq;      // sum_{k<n} p_k^2 scaled by exp(2*log_scale)
    double log_scale;  // common log factor of p_n, p_nm1
    double log_scale_sq;
};

inline HermiteEval hermite_ortho(int n, double t) {
    constexpr double kPi025 = 0.7511255444649425;  // pi^{-1/4}
    double pm = 0.0, pc = kPi025;
    double ls = 0.0;
    double sumsq = pc * pc;
    double ls_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double pn = t * std::sqrt(2.0 / (k + 1)) * pc
                          - std::sqrt(static_cast<double>(k) / (k + 1)) * pm;
        pm = pc;
        pc = pn;
        const double mag = std::fabs(pc);
        if (mag > 1e120) {
            pm *= 1e-120;
            pc *= 1e-120;
            ls += std::log(1e120);
            const double adj = std::exp(2.0 * (ls_sq - ls));
            sumsq = sumsq * adj;  // rebase sumsq to the new scale
            ls_sq = ls;
        }
        if (k + 1 < n) sumsq += pc * pc * std::exp(2.0 * (ls - ls_sq));
    }
    return {pc, pm, sumsq, ls, ls_sq};
}

inline GhRule make_gauss_hermite(int n) {
    std::vector<double> diag(n, 0.0), off(n, 0.0);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
    std::vector<double> nodes = tridiag_eigenvalues(std::move(diag), std::move(off));

    GhRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = nodes[i];
        for (int it = 0; it < 12; ++it) {  // Newton polish
            const HermiteEval h = hermite_ortho(n, t);
            const double deriv = std::sqrt(2.0 * n) * h.p_nm1;
            if (deriv == 0.0) break;
            const double dt = h.p_n / deriv;
            t -= dt;
            if (std::fabs(dt) <= 1e-15 * std::max(1.0, std::fabs(t))) break;
        }
        const HermiteEval h = hermite_ortho(n, t);
        rule.nodes[i] = t;
        rule.weights[i] = std::exp(-2.0 * h.log_scale_sq) / h.sumsq;
    }
    // internal consistency: weights must reproduce the measure mass sqrt(pi)
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    if (std::fabs(wsum - std::sqrt(std::acos(-1.0))) > 1e-9)
        throw NumericError("make_gauss_hermite: weight-normalization check failed");
    return rule;
}

inline const GhRule& gauss_hermite(int n) {
    switch (n) {  // lazily built, cached per size (thread-safe magic statics)
        case 32: { static const GhRule r = make_gauss_hermite(32); return r; }
        case 64: { static const GhRule r = make_gauss_hermite(64); return r; }
        case 128: { static const GhRule r = make_gauss_hermite(128); return r; }
        case 256: { static const GhRule r = make_gauss_hermite(256); return r; }
        case 512: { static const GhRule r = make_gauss_hermite(512); return r; }
        case 1024: { static const GhRule r = make_gauss_hermite(1024); return r; }
        case 2048: { static const GhRule r = make_gauss_hermite(2048); return r; }
        case 4096: { static const GhRule r = make_gauss_hermite(4096); return r; }
        case 8192: { static const GhRule r = make_gauss_hermite(8192); return r; }
        default: break;
    }
    throw DomainError("gauss_hermite: unsupported rule size");
}

}  // namespace detail

/// Expectation E[f(X)] for X ~ LN(params), computed after the substitution
/// u = (ln x - alpha)/beta as a Gauss-Hermite sum. Node count doubles
/// 32 -> 8192 until two successive estimates agree to 1e-8 relative;
/// escalation exhaustion throws NumericError.
template <class F>
double lognormal_expectation(F&& f, const LogNormalParams& params) {
    params.validate();
    const double sqrt_pi = std::sqrt(std::acos(-1.0));
    const double root2_beta = std::sqrt(2.0) * params.beta;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int n : {32, 64, 128, 256, 512, 1024, 2048, 4096, 8192}) {
        const detail::GhRule& rule = detail::gauss_hermite(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = rule.weights[i];
            if (w == 0.0) continue;
            acc += w * f(std::exp(params.alpha + root2_beta * rule.nodes[i]));
        }
        const double cur = acc / sqrt_pi;
        if (!std::isnan(prev) && std::fabs(cur - prev) <= 1e-8 * std::fabs(cur) + 1e-300)
            return cur;
        prev = cur;
    }
    throw NumericError("lognormal_expectation: quadrature tolerance not met at 8192 nodes");
}

}  // namespace sarfeas
