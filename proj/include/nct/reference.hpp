// Independent reference algorithms for cross-validation of the direct
// quadrature CDF: the classical Guenther/Lenth series, the large-nu normal
// approximation, and a brute-force adaptive-quadrature oracle.  None of these
// is extreme-tail safe; that is the point — they cover the moderate regime
// where all methods must agree.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nct/core.hpp"
#include "nct/quadrature.hpp"
#include "nct/specfun.hpp"

namespace nct {

struct SeriesDiagnostics {
    long terms_used = 0;
    bool converged = false;
    double truncation_bound = 0.0;
};

struct GuentherResult {
    double value = 0.0;
    SeriesDiagnostics diagnostics;
};

namespace detail {

// One stream of the beta-term forward recurrence: I advances by
// I_y(a+1,b) = I_y(a,b) - t(a),  t(a) = y^a (1-y)^b / (a B(a,b)),
// t(a+1) = t(a) * y * (a+b) / (a+1).
struct BetaStream {
    double a;        // current first parameter
    double b;        // fixed second parameter
    double y;        // evaluation point
    double log_omy;  // ln(1-y) computed without cancellation
    double ival;     // I_y(a, b)
    double t;        // subtraction term t(a)
    double anchor;   // I at the last direct evaluation; noise scale of ival
    BetaStream(double a0, double b, double y, double log_omy)
        : a(a0), b(b), y(y), log_omy(log_omy) {
        ival = inc_beta(y, a0, b);
        t = term_at(a0);
        anchor = ival;
    }
    double term_at(double aa) const {
        if (y <= 0.0) return 0.0;
        double lt = aa * std::log(y) + b * log_omy - ln_beta(aa, b) - std::log(aa);
        return (lt > -745.0) ? std::exp(lt) : 0.0;
    }
    void advance() {
        ival = std::max(0.0, ival - t);
        t *= y * (a + b) / (a + 1.0);
        a += 1.0;
    }
    // periodic refresh against direct evaluations kills recurrence drift
    void refresh() {
        ival = inc_beta(y, a, b);
        t = term_at(a);
        anchor = ival;
    }
};

}  // namespace detail

// Guenther/Lenth series:
//   F = Phi(-delta) + 1/2 sum_i [ P_i I_y(i+1/2, nu/2)
//                                 + (delta/sqrt2) Q_i I_y(i+1, nu/2) ],
// y = x^2/(nu + x^2), P_i = e^-lam lam^i / i!, Q_i = e^-lam lam^i / G(i+3/2),
// lam = delta^2/2.  Stops when the remaining-mass bound (remaining Poisson
// mass times the current — hence maximal remaining — beta term, both streams)
// drops below tol, or reports converged=false at the term cap.  P/Q switch to
// per-term log-domain evaluation when lam > 700 so the series still runs
// (slowly, with its documented accuracy decay) instead of underflowing.
//
// converged=true additionally certifies that forward-recurrence roundoff in
// the beta terms stayed below tol: each recurrence step I -> I - t leaves
// absolute noise of order eps times the last directly-evaluated I (the block
// anchor), so the sum inherits at most sum_i w_i * anchor_i * eps of noise.
// When that accumulated bound exceeds tol times the value — the classical
// large-delta breakdown, where the weights peak far beyond the decayed beta
// terms — the value is still returned for inspection but converged stays
// false: a certified flag on a cancellation-dominated number would fabricate
// accuracy the series does not have.
inline GuentherResult cdf_guenther_series(const NctParams& p, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("cdf_guenther_series: need tol > 0");
    if (p.x == 0.0) {
        GuentherResult r;
        r.value = norm_cdf(-p.delta);
        r.diagnostics = {0, true, 0.0};
        return r;
    }
    if (p.x < 0.0) {
        GuentherResult r = cdf_guenther_series(NctParams(-p.x, p.nu, -p.delta), tol);
        r.value = 1.0 - r.value;
        return r;
    }
    const double x = p.x, nu = p.nu, delta = p.delta;
    const double lam = 0.5 * delta * delta;
    const double y = x * x / (nu + x * x);
    const double omy = nu / (nu + x * x);  // 1-y without cancellation
    const double log_omy = std::log(omy);
    const double b = 0.5 * nu;
    const double qfac = delta / detail::SQRT2;
    const double phi_d = norm_cdf(-delta);
    const bool log_domain = lam > 700.0;
    const long kMaxTerms = 1000000;

    detail::BetaStream sa(0.5, b, y, log_omy);  // I_y(i+1/2, nu/2)
    detail::BetaStream sb(1.0, b, y, log_omy);  // I_y(i+1, nu/2)
    double pv = 0.0, qv = 0.0, lp = 0.0, lq = 0.0;
    if (log_domain) {
        lp = -lam;
        lq = -lam + std::log(detail::TWO_OVER_SQRTPI);
    } else {
        pv = std::exp(-lam);
        qv = detail::TWO_OVER_SQRTPI * std::exp(-lam);
    }
    const double llam = (lam > 0.0) ? std::log(lam) : -std::numeric_limits<double>::infinity();
    // total Q mass: sum_i q_i = erf(sqrt(lam))/sqrt(lam)  (2/sqrt(pi) at lam=0)
    const double qmass_total =
        (lam > 0.0) ? std::erf(std::sqrt(lam)) / std::sqrt(lam) : detail::TWO_OVER_SQRTPI;

    double sum = 0.0, sum_c = 0.0;    // Kahan sum of the series terms
    double cum_p = 0.0, cum_p_c = 0.0;
    double cum_q = 0.0, cum_q_c = 0.0;
    double noise = 0.0;               // sum of w_i * anchor_i, eps applied at the check
    auto kahan_add = [](double& s, double& c, double v) {
        double yv = v - c;
        double t = s + yv;
        c = (t - s) - yv;
        s = t;
    };
    GuentherResult out;
    for (long i = 0; i < kMaxTerms; ++i) {
        double pi_, qi_;
        if (log_domain) {
            pi_ = (lp > -745.0) ? std::exp(lp) : 0.0;
            qi_ = (lq > -745.0) ? std::exp(lq) : 0.0;
        } else {
            pi_ = pv;
            qi_ = qv;
        }
        kahan_add(sum, sum_c, pi_ * sa.ival + qfac * qi_ * sb.ival);
        kahan_add(cum_p, cum_p_c, pi_);
        kahan_add(cum_q, cum_q_c, qi_);
        noise += pi_ * sa.anchor + std::abs(qfac) * qi_ * sb.anchor;
        // advance the Poisson weights and beta streams to i+1
        if (log_domain) {
            lp += llam - std::log(static_cast<double>(i) + 1.0);
            lq += llam - std::log(static_cast<double>(i) + 1.5);
        } else {
            pv *= lam / (static_cast<double>(i) + 1.0);
            qv *= lam / (static_cast<double>(i) + 1.5);
        }
        sa.advance();
        sb.advance();
        if ((i + 1) % 64 == 0) {
            sa.refresh();
            sb.refresh();
        }
        // remaining mass x the maximal remaining beta term (streams decrease in a)
        double p_rem = std::max(0.0, 1.0 - cum_p);
        double q_rem = std::max(0.0, qmass_total - cum_q);
        double bound = 0.5 * (p_rem * sa.ival + std::abs(qfac) * q_rem * sb.ival);
        double value = phi_d + 0.5 * (sum + sum_c);
        out.diagnostics.terms_used = i + 1;
        out.diagnostics.truncation_bound = bound;
        if (bound <= tol * std::max(std::abs(value), 1e-308)) {
            double noise_bound = 0.5 * noise * std::numeric_limits<double>::epsilon();
            // The recurrence's worst-case roundoff bound sits near 1e-12
            // relative even on healthy moderate rows, so the noise gate never
            // demands more than the 1e-11 level the series is certified for;
            // requesting a tighter tol still tightens the truncation stop.
            double gate = std::max(tol, 1e-11) * std::max(std::abs(value), 1e-308);
            out.diagnostics.converged = noise_bound <= gate;
            out.value = std::min(1.0, std::max(0.0, value));
            return out;
        }
    }
    out.diagnostics.converged = false;
    out.value = std::min(1.0, std::max(0.0, phi_d + 0.5 * (sum + sum_c)));
    return out;
}

// Section-3 normal approximation Phi((x(1 - 1/(4nu)) - delta)/sqrt(1 + x^2/(2nu))).
inline double cdf_normal_approx(const NctParams& p) {
    double z = (p.x * (1.0 - 1.0 / (4.0 * p.nu)) - p.delta) / std::sqrt(1.0 + p.x * p.x / (2.0 * p.nu));
    return norm_cdf(z);
}

// Brute-force oracle: adaptive quadrature of
//   integral over q of Phi(x sqrt(q/nu) - delta) f_chi2_nu(q) dq
// between the 1e-18 and 1 - 1e-18 chi-square quantiles (upper one solved in
// the tail domain directly; 1 - 1e-18 is not representable).  When the normal
// factor is still rising at the upper quantile, a second interval out to the
// point where Phi reaches 1 - 1e-17 is integrated separately: folding it into
// one interval can stretch it so far past the chi-square bulk that every node
// of the first adaptive panel lands where the density underflows, and the
// integrator would accept 0.  Structure shared with nothing in the direct
// method beyond the special functions.
inline double cdf_oracle_quadrature(const NctParams& p, double rel_tol) {
    if (!(rel_tol >= 1e-12 && rel_tol < 1.0))
        throw std::domain_error("cdf_oracle_quadrature: rel_tol supported range [1e-12, 1)");
    if (p.x == 0.0) return norm_cdf(-p.delta);
    if (p.x < 0.0) return 1.0 - cdf_oracle_quadrature(NctParams(-p.x, p.nu, -p.delta), rel_tol);
    const double x = p.x, nu = p.nu, delta = p.delta;
    const double a = 0.5 * nu;
    double qlo = chi2_quantile_exact(1e-18, nu);
    double qhi = chi2_quantile_upper(1e-18, nu);
    auto wfun = [&](double q) {
        double arg = x * std::sqrt(q / nu) - delta;
        // chi2 log-density ln f = pref(a, q/2) - ln q, carried as a pair
        detail::Pair pr = detail::ln_gamma_prefactor_pair(a, 0.5 * q);
        detail::CompAcc acc;
        acc.add(pr.hi, pr.lo);
        acc.add(-std::log(q));
        if (arg > -37.0) return norm_cdf(arg) * detail::exp_pair(acc.hi, acc.lo);
        // normal factor underflows: assemble in log domain
        double s = log_norm_cdf(arg) + (acc.hi + acc.lo);
        return (s > -745.0) ? std::exp(s) : 0.0;
    };
    QuadratureResult core = adaptive(wfun, qlo, qhi, rel_tol, 0.0, 4000);
    double value = core.value;
    if (delta > -8.5) {
        double s = (delta + 8.5) / x;
        double q_ext = nu * s * s;
        if (q_ext > qhi) {
            // Integrate the tail piece in ln q: the extension can span several
            // decades with its mass hugging the left edge, and in q a single
            // top-level panel puts every node past that edge region, so the
            // estimator would accept a near-zero value.  In ln q the edge
            // occupies an O(1) share of the interval and refinement is guided
            // toward it.  Contributions below half the requested resolution
            // of the core cannot matter, so the piece may also stop early.
            auto wlog = [&](double u) {
                double q = std::exp(u);
                return wfun(q) * q;
            };
            double abs_tol = 0.5 * rel_tol * std::max(value, 0.0);
            QuadratureResult ext =
                adaptive(wlog, std::log(qhi), std::log(q_ext), rel_tol, abs_tol, 4000);
            value += ext.value;
        }
    }
    return std::min(1.0, std::max(0.0, value));
}

}  // namespace nct
