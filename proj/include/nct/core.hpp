// Noncentral t-distribution by direct quadrature.
//
// Lower tail for 0 < x <= delta:
//     F(x) = Phi(-delta) + integral over (-delta, inf) of
//            Gamma_u(nu/2, nu (z+delta)^2 / (2 x^2)) * phi(z) dz,
// truncated to a finite window [A,B] chosen so the discarded integrand mass
// stays below a per-call absolute bound eps_A; the excluded head is added in
// closed form.  For x > delta the mirrored construction integrates the upper
// tail with Gamma_l in place of Gamma_u, which keeps the smaller tail at full
// relative precision all the way into the extreme-tail regime (1e-270 scale).
// x = 0 is exactly Phi(-delta); x < 0 reflects to (-x, -delta) with the tails
// swapped.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nct/quadrature.hpp"
#include "nct/specfun.hpp"

namespace nct {

// ---------------------------------------------------------------- domain types
struct NctParams {
    double x;
    double nu;
    double delta;
    NctParams(double x, double nu, double delta) : x(x), nu(nu), delta(delta) {
        if (!std::isfinite(x) || !std::isfinite(delta) || !(nu > 0.0) || !std::isfinite(nu))
            throw std::domain_error("NctParams: need finite x, delta and finite nu > 0");
    }
};

struct ToleranceConfig {
    double eps_r;         // relative tolerance eps_R
    double r_eps0;        // smallest positive normalized double (as printed)
    double z_floor;       // norm_inv(r_eps0), caps every window at +-37.52
    int n_subs;           // uniform panel count
    double quantile_tol;  // quantile(): residual tolerance (relative to the smaller tail)
    double solver_tol;    // solve_delta/solve_nu: |cdf - prob| target
    explicit ToleranceConfig(double eps_r = 1e-16, int n_subs = 16)
        : eps_r(eps_r),
          r_eps0(2.2251e-308),
          z_floor(norm_inv(2.2251e-308)),
          n_subs(n_subs),
          quantile_tol(1e-13),
          solver_tol(1e-12) {
        if (!(eps_r > 0.0 && eps_r < 1.0)) throw std::domain_error("ToleranceConfig: eps_r outside (0,1)");
        if (n_subs < 1) throw std::domain_error("ToleranceConfig: n_subs must be >= 1");
    }
};

enum class TailSide { Lower, Upper, Exact };

inline const char* to_string(TailSide t) {
    switch (t) {
        case TailSide::Lower: return "Lower";
        case TailSide::Upper: return "Upper";
        default: return "Exact";
    }
}

struct IntegrationWindow {
    double a = 0.0;
    double b = 0.0;
    TailSide tail = TailSide::Lower;  // which tail the quadrature over [a,b] produces
    double analytic_head = 0.0;       // closed-form mass outside the window
    double head_err = 0.0;            // bracket width of the head approximation
    double eps_a = 0.0;               // derived absolute tolerance bound
    bool degenerate = false;          // empty window resolved to a minimal one around z_mod
    bool graded = false;              // left edge snapped to the -delta cusp; grade the panels
};

struct TailProbability {
    double lower = 0.0;
    double upper = 0.0;
    TailSide native_tail = TailSide::Exact;
    double quad_error = 0.0;
};

// ---------------------------------------------------------------- integrand pieces
inline double integrand_g(double z, const NctParams& p) {
    if (!(p.x > 0.0)) throw std::domain_error("integrand_g: need x > 0");
    double w = p.nu * (z + p.delta) * (z + p.delta) / (p.x * p.x);
    return reg_gamma_upper(0.5 * p.nu, 0.5 * w) * norm_pdf(z);
}

inline double integrand_g_upper(double z, const NctParams& p) {
    if (!(p.x > 0.0)) throw std::domain_error("integrand_g_upper: need x > 0");
    double w = p.nu * (z + p.delta) * (z + p.delta) / (p.x * p.x);
    return reg_gamma_lower(0.5 * p.nu, 0.5 * w) * norm_pdf(z);
}

// h(z): log of the chi-square tail lower bound times phi(z); an order-of-
// magnitude proxy for ln g used to calibrate eps_A and the window solve.
// Substitutes (nu-2) -> 1 when nu <= 2.
inline double log_integrand_h(double z, const NctParams& p) {
    if (!(p.x > 0.0)) throw std::domain_error("log_integrand_h: need x > 0");
    double q = p.nu * (z + p.delta) * (z + p.delta) / (p.x * p.x);
    if (q == 0.0) return -std::numeric_limits<double>::infinity();
    double nm2 = (p.nu <= 2.0) ? 1.0 : p.nu - 2.0;
    return -std::log(2.0) - 0.5 * (q - p.nu - nm2 * std::log(q / p.nu) + std::log(p.nu) +
                                   std::log(2.0 * std::numbers::pi) + z * z);
}

namespace detail {

// Golden-section maximization with a coarse 64-point pre-scan to land in the
// right basin (the objective can be bimodal near the window edges).
template <class F>
double golden_max(F&& f, double a, double b, int iters = 60) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double best = a;
    double bv = f(a);
    const int n = 64;
    for (int i = 0; i <= n; ++i) {
        double z = a + (b - a) * i / n;
        double v = f(z);
        if (v > bv) {
            bv = v;
            best = z;
        }
    }
    double w = (b - a) / n;
    double lo = std::max(a, best - w);
    double hi = std::min(b, best + w);
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Single root of f = target on [lo, hi], f monotone on this side of its peak.
// descending=true expects f(lo) >= target >= f(hi); returns the outer-side
// endpoint of the final bracket (conservative: window edge stays outside).
template <class F>
double bisect_crossing(F&& f, double target, double lo, double hi, bool descending, int iters = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (descending) {
        if (fhi >= target) return hi;
        if (flo <= target) return lo;
    } else {
        if (flo >= target) return lo;
        if (fhi <= target) return hi;
    }
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        bool above = f(mid) >= target;
        if (above == descending)
            lo = mid;
        else
            hi = mid;
    }
    return descending ? hi : lo;
}

}  // namespace detail

// Closed-form estimate of the integrand's maximizer, clamped into the window;
// falls back to numerical maximization of h when the formula degenerates.
inline double mode_zmod(const NctParams& p, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (!(p.x > 0.0)) throw std::domain_error("mode_zmod: need x > 0");
    double nm2 = (p.nu <= 2.0) ? 1.0 : p.nu - 2.0;
    double a0 = std::max(-p.delta, cfg.z_floor);
    double b0 = -cfg.z_floor;
    double disc = 4.0 * p.nu * nm2 + p.x * p.x * (p.delta * p.delta + 4.0 * nm2);
    double zm = std::numeric_limits<double>::quiet_NaN();
    if (disc >= 0.0)
        zm = (-p.delta * (p.x * p.x + 2.0 * p.nu) + p.x * std::sqrt(disc)) / (2.0 * (p.x * p.x + p.nu));
    if (!std::isfinite(zm))
        zm = detail::golden_max([&](double z) { return log_integrand_h(z, p); }, a0, b0);
    return std::min(std::max(zm, a0), b0);
}

namespace detail {

inline IntegrationWindow window_lower(const NctParams& p, const ToleranceConfig& cfg) {
    const double x = p.x, nu = p.nu, delta = p.delta;
    double a0 = std::max(-delta, cfg.z_floor);
    double b0 = -cfg.z_floor;
    double qeps = chi2_quantile_approx_inglot(cfg.eps_r, nu);
    // the quantile approximation is asymptotic in nu and returns garbage for
    // small nu (it can even land above the median); one cheap CDF evaluation
    // validates it, and the safe fallback is the q -> 0 escape (a1 = a0)
    if (qeps <= 0.0 || chi2_cdf(qeps, nu) > cfg.eps_r) qeps = 0.0;
    double a1 = std::sqrt(x * x * qeps / nu) - delta;
    a1 = std::max(a0, a1);
    double b1 = b0;
    double zm = mode_zmod(p, cfg);
    double ln_eps_a = log_integrand_h(zm, p) + std::log(cfg.eps_r);
    auto hfun = [&](double z) { return log_integrand_h(z, p); };
    // h is unimodal on [a0, b0] (the domain never crosses -delta, where h
    // diverges to -inf), so the eps_a crossings can be bisected directly on
    // h itself.  A local quadratic expansion is not safe here: the integrand's
    // support has width O(x), which for small x is far below any fixed
    // finite-difference step, and an overestimated curvature truncates B
    // inside live mass.
    double a = std::max(a1, bisect_crossing(hfun, ln_eps_a, a0, zm, /*descending=*/false));
    double b = std::min(b1, bisect_crossing(hfun, ln_eps_a, zm, b1, /*descending=*/true));
    bool degenerate = a > b;
    if (degenerate) {
        a = std::max(a0, zm - 5e-4);
        b = std::min(b0, zm + 5e-4);
    }
    // if A lands within one panel width of the integrand's algebraic
    // singularity at -delta, snap it there: the head collapses to the exact
    // Phi(-delta) constant and graded edge panels absorb the cusp
    bool graded = false;
    if (!degenerate && a - a0 < (b - a) / cfg.n_subs) {
        a = a0;
        graded = true;
    }
    // mass left of A: Phi(-delta) (all of it, z < -delta) plus the strip
    // (-delta, A) where the gamma factor runs from 1 down to gu(A); the two
    // endpoint weightings bracket it, and the lower (tight in every realizable
    // geometry) end is gu(A)*Phi(A) + (1-gu(A))*Phi(-delta); the bracket width
    // goes into the error estimate
    double gu_a = reg_gamma_upper(0.5 * nu, 0.5 * nu * (a + delta) * (a + delta) / (x * x));
    double phi_a = norm_cdf(a);
    double phi_d = norm_cdf(-delta);
    double head = gu_a * phi_a + (1.0 - gu_a) * phi_d;
    // bracket width, tightened: g is increasing on (-delta, A) (A1 <= 0 and
    // A2 <= z_mod on this path), so the strip mass is also <= g(A)*(A+delta)
    double head_err = std::min((1.0 - gu_a) * (phi_a - phi_d),
                               gu_a * norm_pdf(a) * (a + delta) + cfg.eps_r * head);
    IntegrationWindow w;
    w.a = a;
    w.b = b;
    w.tail = TailSide::Lower;
    w.analytic_head = head;
    w.head_err = head_err;
    w.eps_a = (ln_eps_a > -745.0) ? std::exp(ln_eps_a) : 0.0;
    w.degenerate = degenerate;
    w.graded = graded;
    return w;
}

inline IntegrationWindow window_upper(const NctParams& p, const ToleranceConfig& cfg) {
    const double x = p.x, nu = p.nu, delta = p.delta;
    double a0 = std::max(-delta, cfg.z_floor);
    double b0 = -cfg.z_floor;
    // B-side from the exact upper chi2 quantile: beyond b1 the gamma factor is
    // >= 1 - eps_r, so the phi tail mass stands in exactly for the integrand
    double qhi = chi2_quantile_upper(cfg.eps_r, nu);
    double b1 = std::min(b0, std::sqrt(x * x * qhi / nu) - delta);
    double a = 0.5 * nu;
    auto log_g_upper = [&](double z) {
        double w = nu * (z + delta) * (z + delta) / (x * x);
        return log_reg_gamma_lower(a, 0.5 * w) + detail::log_phi(z);
    };
    double zm = golden_max(log_g_upper, a0, b0);
    double lgmax = log_g_upper(zm);
    double ln_eps_a = lgmax + std::log(cfg.eps_r);
    // the quadratic expansion of ln g_upper underestimates the window width on
    // the side away from the gamma-factor singularity (curvature weakens from
    // ~-(1+2a/(zm+delta)^2) at the peak toward -1), so locate the eps_a
    // crossings on ln g_upper directly; bisection is safe by unimodality
    double aa = std::max(a0, bisect_crossing(log_g_upper, ln_eps_a, a0, zm, /*descending=*/false));
    double bb = std::min(b1, bisect_crossing(log_g_upper, ln_eps_a, zm, b1, /*descending=*/true));
    bool degenerate = aa > bb;
    if (degenerate) {
        aa = std::max(a0, zm - 5e-4);
        bb = std::min(b0, zm + 5e-4);
    }
    // the integrand rises from exactly zero at -delta ((z+delta)^nu cusp); if
    // the eps_a crossing lands within one panel width of it, snap A there and
    // grade the edge panels, otherwise GK convergence degrades to h^(nu+1)
    bool graded = false;
    if (!degenerate && aa - a0 < (bb - aa) / cfg.n_subs) {
        aa = a0;
        graded = true;
    }
    // mass right of B: integrand runs from gl(B)*phi up to phi as the gamma
    // factor saturates; gl(B)*Phic(B) is the tight end of the bracket
    double gl_b = reg_gamma_lower(a, 0.5 * nu * (bb + delta) * (bb + delta) / (x * x));
    double phic_b = norm_cdf(-bb);
    double head = gl_b * phic_b;
    // bracket width, tightened: g_upper decreases beyond B (right of its peak
    // and below eps_a from the crossing), so the strip up to b1 holds at most
    // eps_a*(b1-B) and beyond b1 the phi tail is exact to eps_r
    double eps_a = (ln_eps_a > -745.0) ? std::exp(ln_eps_a) : 0.0;
    double head_err =
        std::min((1.0 - gl_b) * phic_b,
                 eps_a * std::max(b1 - bb, 0.0) + norm_cdf(-std::max(b1, bb)) + cfg.eps_r * head);
    // A-side truncation: the dropped strip (a0, A) holds at most eps_a per unit
    head_err += eps_a * std::max(aa - a0, 0.0);
    IntegrationWindow w;
    w.a = aa;
    w.b = bb;
    w.tail = TailSide::Upper;
    w.analytic_head = head;
    w.head_err = head_err;
    w.eps_a = eps_a;
    w.degenerate = degenerate;
    w.graded = graded;
    return w;
}

}  // namespace detail

// Window construction; dispatches on the tail-switch rule (lower path when
// 0 < x <= delta, upper path otherwise — which covers delta <= 0).
inline IntegrationWindow window(const NctParams& p, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (!(p.x > 0.0)) throw std::domain_error("window: need x > 0");
    return (p.x <= p.delta) ? detail::window_lower(p, cfg) : detail::window_upper(p, cfg);
}

// Both tails of the noncentral t CDF at x.
inline TailProbability cdf(const NctParams& p, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (p.x == 0.0) {
        TailProbability t;
        t.lower = norm_cdf(-p.delta);
        t.upper = norm_cdf(p.delta);
        t.native_tail = TailSide::Exact;
        t.quad_error = 0.0;
        return t;
    }
    if (p.x < 0.0) {
        TailProbability r = cdf(NctParams(-p.x, p.nu, -p.delta), cfg);
        TailProbability t;
        t.lower = r.upper;
        t.upper = r.lower;
        t.native_tail = (r.native_tail == TailSide::Lower)   ? TailSide::Upper
                        : (r.native_tail == TailSide::Upper) ? TailSide::Lower
                                                             : TailSide::Exact;
        t.quad_error = r.quad_error;
        return t;
    }
    if (p.x <= p.delta) {
        IntegrationWindow w = detail::window_lower(p, cfg);
        QuadratureResult q = fixed_panels([&](double z) { return integrand_g(z, p); }, w.a, w.b,
                                          cfg.n_subs, w.graded);
        TailProbability t;
        t.lower = w.analytic_head + q.value;
        t.upper = 1.0 - t.lower;
        t.native_tail = TailSide::Lower;
        t.quad_error = q.error + w.head_err;
        return t;
    }
    IntegrationWindow w = detail::window_upper(p, cfg);
    QuadratureResult q = fixed_panels([&](double z) { return integrand_g_upper(z, p); }, w.a, w.b,
                                      cfg.n_subs, w.graded);
    TailProbability t;
    t.upper = q.value + w.analytic_head;
    t.lower = 1.0 - t.upper;
    t.native_tail = TailSide::Upper;
    t.quad_error = q.error + w.head_err;
    return t;
}

inline TailProbability cdf(double x, double nu, double delta,
                           const ToleranceConfig& cfg = ToleranceConfig()) {
    return cdf(NctParams(x, nu, delta), cfg);
}

// Density.  x = 0 has the closed form; elsewhere the exact finite difference
// f(x) = (nu/x) [F_{nu+2,delta}(x sqrt(1+2/nu)) - F_{nu,delta}(x)], with both
// CDFs taken on the same native tail side so only the shared head cancels.
inline double pdf(const NctParams& p, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (p.x == 0.0) {
        double lf = gamma_ln(0.5 * (p.nu + 1.0)) - gamma_ln(0.5 * p.nu) -
                    0.5 * std::log(std::numbers::pi * p.nu) - 0.5 * p.delta * p.delta;
        return (lf > -745.0) ? std::exp(lf) : 0.0;
    }
    if (p.x < 0.0) return pdf(NctParams(-p.x, p.nu, -p.delta), cfg);
    TailProbability t2 = cdf(p, cfg);
    TailProbability t1 = cdf(NctParams(p.x * std::sqrt(1.0 + 2.0 / p.nu), p.nu + 2.0, p.delta), cfg);
    double diff = (t2.native_tail == TailSide::Upper) ? t2.upper - t1.upper : t1.lower - t2.lower;
    return std::max(0.0, (p.nu / p.x) * diff);
}

inline double pdf(double x, double nu, double delta, const ToleranceConfig& cfg = ToleranceConfig()) {
    return pdf(NctParams(x, nu, delta), cfg);
}

namespace detail {

// F(x) - prob with the subtraction on the smaller-probability side, so the
// residual keeps relative precision in extreme tails.  Increasing in x.
inline double quantile_residual(double x, double nu, double delta, double prob, bool low_side,
                                const ToleranceConfig& cfg) {
    TailProbability t = cdf(NctParams(x, nu, delta), cfg);
    return low_side ? t.lower - prob : (1.0 - prob) - t.upper;
}

// Invert the section-3 normal approximation Phi((x(1-1/(4nu)) - delta)/
// sqrt(1+x^2/(2nu))) = prob for x: a quadratic in x.  Start value only.
inline double quantile_start(double prob, double nu, double delta) {
    double zp = acklam(prob);
    double c = 1.0 - 1.0 / (4.0 * nu);
    // The map z(x) = (cx - delta)/sqrt(1 + x^2/(2nu)) saturates at
    // +-c sqrt(2nu); near or past saturation the quadratic roots are
    // near-tangent artifacts, so fall back to the large-nu form there.
    if (zp * zp >= 0.9 * 2.0 * nu * c * c) return delta + zp;
    double a2 = c * c - zp * zp / (2.0 * nu);
    double b1 = -2.0 * c * delta;
    double c0 = delta * delta - zp * zp;
    double disc = b1 * b1 - 4.0 * a2 * c0;
    double cand = delta + zp;  // large-nu fallback
    if (std::abs(a2) > 1e-300 && disc >= 0.0) {
        double r = std::sqrt(disc);
        double x1 = (-b1 + r) / (2.0 * a2);
        double x2 = (-b1 - r) / (2.0 * a2);
        // the root consistent with the forward map: z(x) should equal zp
        auto zmap = [&](double xx) { return (c * xx - delta) / std::sqrt(1.0 + xx * xx / (2.0 * nu)); };
        cand = (std::abs(zmap(x1) - zp) <= std::abs(zmap(x2) - zp)) ? x1 : x2;
    } else if (std::abs(a2) <= 1e-300 && std::abs(b1) > 1e-300) {
        // quadratic degenerates to linear; the linear root is meaningless in
        // the disc < 0 case, where delta + zp above stands
        cand = -c0 / b1;
    }
    if (!std::isfinite(cand)) cand = delta + zp;
    return cand;
}

}  // namespace detail

// Quantile: x with cdf(x) = prob, residual measured on the smaller tail.
// Safeguarded Newton (derivative = pdf) inside an expanding bracket seeded by
// the inverted normal approximation.
inline double quantile(double prob, double nu, double delta, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("quantile: prob outside (0,1)");
    if (!(nu > 0.0) || !std::isfinite(nu) || !std::isfinite(delta))
        throw std::domain_error("quantile: need finite nu > 0 and finite delta");
    double pd = norm_cdf(-delta);
    if (prob == pd) return 0.0;  // F(0) = Phi(-delta) exactly
    const bool low_side = prob <= 0.5;
    const double small_tail = low_side ? prob : 1.0 - prob;
    const double rtol = cfg.quantile_tol * small_tail;
    auto resid = [&](double x) { return detail::quantile_residual(x, nu, delta, prob, low_side, cfg); };
    int budget = 300;
    double x = detail::quantile_start(prob, nu, delta);
    double r = resid(x);
    --budget;
    if (r == 0.0) return x;
    // expand a bracket [lo, hi] with resid(lo) < 0 < resid(hi)
    double lo, hi, rlo, rhi;
    double step = 0.5 * std::max(1.0, std::abs(x));
    if (r < 0.0) {
        lo = x;
        rlo = r;
        hi = x + step;
        while ((rhi = resid(hi)) < 0.0) {
            if (--budget <= 0) throw numeric_error("quantile: iteration cap while bracketing", lo, hi);
            lo = hi;
            rlo = rhi;
            step *= 2.0;
            hi += step;
            if (!std::isfinite(hi)) throw numeric_error("quantile: bracket ran to infinity", lo, lo);
        }
        --budget;
    } else {
        hi = x;
        rhi = r;
        lo = x - step;
        while ((rlo = resid(lo)) > 0.0) {
            if (--budget <= 0) throw numeric_error("quantile: iteration cap while bracketing", lo, hi);
            hi = lo;
            rhi = rlo;
            step *= 2.0;
            lo -= step;
            if (!std::isfinite(lo)) throw numeric_error("quantile: bracket ran to infinity", hi, hi);
        }
        --budget;
    }
    if (rlo == 0.0) return lo;
    if (rhi == 0.0) return hi;
    // Safeguarded Newton on the log of the smaller tail, within [lo, hi].
    // Natural-scale Newton advances only about |x|/nu per step on the
    // exponential- or polynomial-decay stretches of the CDF (each step sees a
    // single e-folding), which starves the iteration budget for deep-tail
    // targets; ln(tail) is nearly linear there and converges quadratically.
    x = 0.5 * (lo + hi);
    while (budget-- > 0) {
        TailProbability t = cdf(NctParams(x, nu, delta), cfg);
        double rx = low_side ? t.lower - prob : (1.0 - prob) - t.upper;
        if (std::abs(rx) <= rtol) return x;
        if (rx < 0.0)
            lo = x;
        else
            hi = x;
        double fs = low_side ? t.lower : t.upper;  // smaller-tail value at x
        double d = pdf(NctParams(x, nu, delta), cfg);
        double xn = std::numeric_limits<double>::quiet_NaN();
        if (fs > 0.0 && d > 0.0) {
            double g = std::log(fs) - std::log(small_tail);
            double gp = low_side ? d / fs : -d / fs;  // d ln(tail)/dx
            xn = x - g / gp;
        }
        if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            return xn;
        x = xn;
    }
    throw numeric_error("quantile: no convergence within 300 iterations (bracket [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "])",
                        lo, hi);
}

// delta with cdf(x, nu, delta) = prob; the CDF is strictly decreasing in
// delta, so an expanding bracket plus bisection is total.
inline double solve_delta(double x, double nu, double prob, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("solve_delta: prob outside (0,1)");
    if (!std::isfinite(x) || !(nu > 0.0) || !std::isfinite(nu))
        throw std::domain_error("solve_delta: need finite x and finite nu > 0");
    if (x == 0.0) return -norm_inv(prob);  // F(0) = Phi(-delta)
    const bool low_side = prob <= 0.5;
    // decreasing in delta
    auto resid = [&](double d) {
        TailProbability t = cdf(NctParams(x, nu, d), cfg);
        return low_side ? t.lower - prob : (1.0 - prob) - t.upper;
    };
    const double kDeltaMax = 1e4;
    // start from the normal approximation solved for delta
    double zp = detail::acklam(prob);
    double d0 = x * (1.0 - 1.0 / (4.0 * nu)) - zp * std::sqrt(1.0 + x * x / (2.0 * nu));
    if (!std::isfinite(d0)) d0 = 0.0;
    d0 = std::min(std::max(d0, -kDeltaMax), kDeltaMax);
    double r0 = resid(d0);
    if (r0 == 0.0) return d0;
    // resid(d) decreasing: r0 > 0 means the root lies at larger delta
    double lo, hi, step = 1.0;
    if (r0 > 0.0) {
        lo = d0;
        hi = d0 + step;
        while (resid(hi) > 0.0) {
            lo = hi;
            step *= 2.0;
            hi += step;
            if (hi > kDeltaMax) {
                if (resid(kDeltaMax) > 0.0)
                    throw std::range_error("solve_delta: no root with |delta| <= 1e4");
                hi = kDeltaMax;
                break;
            }
        }
    } else {
        hi = d0;
        lo = d0 - step;
        while (resid(lo) < 0.0) {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if (lo < -kDeltaMax) {
                if (resid(-kDeltaMax) < 0.0)
                    throw std::range_error("solve_delta: no root with |delta| <= 1e4");
                lo = -kDeltaMax;
                break;
            }
        }
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double rm = resid(mid);
        if (rm == 0.0) return mid;
        if (rm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// nu with cdf(x, delta, nu) = prob; the CDF need not be monotone in nu, so
// scan a log grid over [1e-2, 1e7] for a sign change and bisect the first
// bracket found.  No sign change is reported, never guessed.
inline double solve_nu(double x, double delta, double prob, const ToleranceConfig& cfg = ToleranceConfig()) {
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("solve_nu: prob outside (0,1)");
    if (!std::isfinite(x) || !std::isfinite(delta))
        throw std::domain_error("solve_nu: need finite x and delta");
    if (x == 0.0)
        throw std::range_error("solve_nu: cdf at x = 0 is Phi(-delta) for every nu; not solvable for nu");
    const bool low_side = prob <= 0.5;
    auto resid = [&](double nu) {
        TailProbability t = cdf(NctParams(x, nu, delta), cfg);
        return low_side ? t.lower - prob : (1.0 - prob) - t.upper;
    };
    const double kLo = 1e-2, kHi = 1e7;
    const int kPerDecade = 10;
    const int kPoints = static_cast<int>(std::round(std::log10(kHi / kLo))) * kPerDecade;  // 90 intervals
    double prev_nu = kLo;
    double prev_r = resid(prev_nu);
    if (prev_r == 0.0) return prev_nu;
    double blo = 0.0, bhi = 0.0;
    bool found = false;
    for (int i = 1; i <= kPoints; ++i) {
        double nu = kLo * std::pow(kHi / kLo, static_cast<double>(i) / kPoints);
        double r = resid(nu);
        if (r == 0.0) return nu;
        if ((prev_r < 0.0) != (r < 0.0)) {
            blo = prev_nu;
            bhi = nu;
            found = true;
            break;
        }
        prev_nu = nu;
        prev_r = r;
    }
    if (!found)
        throw std::range_error("solve_nu: no sign change of cdf - prob over nu in [1e-2, 1e7]");
    bool lo_neg = resid(blo) < 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(blo * bhi);  // bisect in log nu
        if (mid <= blo || mid >= bhi) break;
        double rm = resid(mid);
        if (rm == 0.0) return mid;
        if ((rm < 0.0) == lo_neg)
            blo = mid;
        else
            bhi = mid;
    }
    return std::sqrt(blo * bhi);
}

}  // namespace nct
