// Self-contained double-precision special functions: normal distribution,
// regularized incomplete gamma/beta, chi-square CDF and quantiles.
//
// Accuracy notes that drive the implementation choices:
//  - the CDF targets reach 1e-272, so every tail evaluates natively (never as
//    1 - big) and the exp/log prefactors are carried as compensated hi+lo
//    pairs to avoid losing relative precision to argument rounding;
//  - two_sum / two_prod (via std::fma) provide the error-free transforms.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nct {

// Numeric failure (non-convergence, budget exhaustion) carrying the best
// value reached so far; domain violations use std::domain_error instead.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double best_value = std::numeric_limits<double>::quiet_NaN(),
                  double best_estimate = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(what), best_value(best_value), best_estimate(best_estimate) {}
    double best_value;
    double best_estimate;
};

// Validating value types for the public API surface.
struct Probability {
    double value;
    explicit Probability(double v) : value(v) {
        if (!(v >= 0.0 && v <= 1.0))  // NaN fails this too
            throw std::domain_error("Probability outside [0,1]");
    }
    operator double() const { return value; }
};

struct PositiveReal {
    double value;
    explicit PositiveReal(double v) : value(v) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::domain_error("PositiveReal must be finite and > 0");
    }
    operator double() const { return value; }
};

namespace detail {

inline constexpr double SQRT_2PI = 2.5066282746310005024157652848110;
inline constexpr double LN_SQRT_2PI = 0.91893853320467274178032973640562;
inline constexpr double SQRT2 = 1.4142135623730950488016887242097;

// ---------------------------------------------------------------- error-free helpers
struct Pair {
    double hi = 0.0;
    double lo = 0.0;
};

inline Pair two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Pair two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

// Accumulates (value, err) terms: hi via two_sum, everything else into lo.
struct CompAcc {
    double hi = 0.0;
    double lo = 0.0;
    void add(double v, double e = 0.0) {
        Pair t = two_sum(hi, v);
        hi = t.hi;
        lo += t.lo + e;
    }
    double sum() const { return hi + lo; }
};

// ---------------------------------------------------------------- lgamma (Lanczos g=607/128)
inline constexpr double LG_G = 4.7421875;
inline constexpr double LG_C[15] = {
    0.99999999999999709182,
    57.156235665862923517, -59.597960355475491248, 14.136097974741747174,
    -0.49191381609762019978, 3.3994649984811888699e-5, 4.6523628927048575665e-5,
    -9.8374475304879564677e-5, 1.5808870322491248884e-4, -2.1026444172410488319e-4,
    2.1743961811521264320e-4, -1.6431810653676389022e-4, 8.4418223983852743293e-5,
    -2.6190838401581408670e-5, 3.6899182659531622704e-6,
};

inline double gamma_ln_raw(double x) {
    double ser = LG_C[0];
    for (int j = 1; j < 15; ++j) ser += LG_C[j] / (x + j);
    double t = x + LG_G + 0.5;
    return (x + 0.5) * std::log(t) - t + std::log(SQRT_2PI * ser / x);
}

// Single-slot memo: the CDF quadrature calls the gamma prefactor hundreds of
// times with the same a = nu/2, so this removes the dominant repeated cost.
inline double gamma_ln_memo(double x) {
    thread_local double last_x = std::numeric_limits<double>::quiet_NaN();
    thread_local double last_v = 0.0;
    if (x == last_x) return last_v;
    last_x = x;
    last_v = gamma_ln_raw(x);
    return last_v;
}

// ---------------------------------------------------------------- stirlerr / bd0
// stirlerr(a) = ln Gamma(a) - [ (a-1/2) ln a - a + ln sqrt(2 pi) ]
inline double stirlerr(double a) {
    if (a < 15.0)
        return gamma_ln_raw(a + 1.0) - (a + 0.5) * std::log(a) + a - LN_SQRT_2PI;
    double s = 1.0 / a;
    double s2 = s * s;
    return s * (1.0 / 12.0 + s2 * (-1.0 / 360.0 + s2 * (1.0 / 1260.0 + s2 * (-1.0 / 1680.0 + s2 * (1.0 / 1188.0)))));
}

// a*log(a/x) + x - a, cancellation-safe near a ~ x (Loader's series).
inline double bd0(double a, double x) {
    if (std::abs(a - x) < 0.1 * (a + x)) {
        double v = (a - x) / (a + x);
        double s = (a - x) * v;
        double ej = 2.0 * a * v;
        double v2 = v * v;
        for (int j = 1;; ++j) {
            ej *= v2;
            double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
    }
    Pair p = two_prod(a, std::log(a / x));
    CompAcc acc;
    acc.add(p.hi, p.lo);
    acc.add(x);
    acc.add(-a);
    return acc.sum();
}

// ln( x^a e^-x / Gamma(a) ) as a hi+lo pair; keeping the pair lets value-domain
// callers reach full relative precision via exp(hi)*(1+lo).
inline Pair ln_gamma_prefactor_pair(double a, double x) {
    if (x <= 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    CompAcc acc;
    if (a < 15.0) {
        Pair p = two_prod(a, std::log(x));
        acc.add(p.hi, p.lo);
        acc.add(-x);
        acc.add(-gamma_ln_memo(a));
    } else {
        acc.add(0.5 * std::log(a / (2.0 * std::numbers::pi)));
        acc.add(-stirlerr(a));
        acc.add(-bd0(a, x));
    }
    return {acc.hi, acc.lo};
}

inline double ln_gamma_prefactor(double a, double x) {
    Pair p = ln_gamma_prefactor_pair(a, x);
    return p.hi + p.lo;
}

// exp(s+c) * extra at full relative precision (s the big part, |c| tiny).
// When exp(s) alone would underflow, the scale folds into the exponent; that
// path is limited to ~1 ulp of the log argument, which only matters for
// results already below ~1e-300.
inline double exp_pair(double s, double c, double extra = 1.0) {
    if (s > -690.0) return std::exp(s) * (1.0 + c) * extra;
    if (extra <= 0.0) return 0.0;
    return std::exp(s + c + std::log(extra));
}

// ---------------------------------------------------------------- incomplete gamma
// series/CF need ~sqrt(78 a) iterations when x ~ a; 30000 covers a up to ~1e7
inline constexpr int GAMMA_MAX_ITER = 30000;

// sum_{n>=0} x^n / prod_{k=1..n}(a+k), Kahan-compensated.
inline double gamma_lower_series(double a, double x) {
    double s = 1.0;
    double comp = 0.0;
    double term = 1.0;
    for (int n = 1; n <= GAMMA_MAX_ITER; ++n) {
        term *= x / (a + n);
        double y = term - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
        if (term <= s * 1e-17) return s;
    }
    throw numeric_error("reg_gamma: lower series did not converge (a=" + std::to_string(a) +
                        ", x=" + std::to_string(x) + ")");
}

// Lentz continued fraction; Gamma_u = prefactor * H.
inline double gamma_upper_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = (b != 0.0) ? 1.0 / b : 1.0 / tiny;
    double h = d;
    for (int i = 1; i <= GAMMA_MAX_ITER; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delt = d * c;
        h *= delt;
        if (std::abs(delt - 1.0) <= 1e-16) return h;
    }
    throw numeric_error("reg_gamma: upper continued fraction did not converge (a=" + std::to_string(a) +
                        ", x=" + std::to_string(x) + ")");
}

inline void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || std::isnan(x) || x < 0.0)
        throw std::domain_error("reg_gamma: need a > 0, x >= 0");
}

}  // namespace detail

// ln Gamma(a); relative error <= ~6e-15 over the double range.
inline double gamma_ln(double a) {
    if (!(a > 0.0)) throw std::domain_error("gamma_ln: need a > 0");
    return detail::gamma_ln_raw(a);
}

inline double log_reg_gamma_lower(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    detail::Pair p = detail::ln_gamma_prefactor_pair(a, x);
    if (x < a + 1.0)
        return (p.hi + p.lo) + std::log(detail::gamma_lower_series(a, x) / a);
    return std::log1p(-detail::exp_pair(p.hi, p.lo, detail::gamma_upper_cf(a, x)));
}

inline double log_reg_gamma_upper(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x <= 0.0) return 0.0;
    detail::Pair p = detail::ln_gamma_prefactor_pair(a, x);
    if (x >= a + 1.0)
        return (p.hi + p.lo) + std::log(detail::gamma_upper_cf(a, x));
    return std::log1p(-detail::exp_pair(p.hi, p.lo, detail::gamma_lower_series(a, x) / a));
}

// Regularized lower incomplete gamma: computed natively (series) when small,
// never as 1 - Gamma_u when the result is the small tail.
inline double reg_gamma_lower(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x <= 0.0) return 0.0;
    detail::Pair p = detail::ln_gamma_prefactor_pair(a, x);
    if (x < a + 1.0)
        return detail::exp_pair(p.hi, p.lo, detail::gamma_lower_series(a, x) / a);
    return 1.0 - detail::exp_pair(p.hi, p.lo, detail::gamma_upper_cf(a, x));
}

inline double reg_gamma_upper(double a, double x) {
    detail::check_gamma_args(a, x);
    if (x <= 0.0) return 1.0;
    detail::Pair p = detail::ln_gamma_prefactor_pair(a, x);
    if (x >= a + 1.0)
        return detail::exp_pair(p.hi, p.lo, detail::gamma_upper_cf(a, x));
    return 1.0 - detail::exp_pair(p.hi, p.lo, detail::gamma_lower_series(a, x) / a);
}

namespace detail {

// exp(-z^2/2)/sqrt(2pi) with compensated squaring (restores tail precision).
inline double phi_exact(double z) {
    Pair p = two_prod(z, z);
    double hi = -0.5 * p.hi;
    double lo = -0.5 * p.lo;
    return (hi > -745.0) ? std::exp(hi) * (1.0 + lo) / SQRT_2PI : 0.0;
}

inline double log_phi(double z) {
    Pair p = two_prod(z, z);
    CompAcc acc;
    acc.add(-0.5 * p.hi, -0.5 * p.lo);
    acc.add(-LN_SQRT_2PI);
    return acc.sum();
}

// Mills ratio R(t) with Phi(-t) = phi(t) * R(t);
// R = 1/(t + 1/(t + 2/(t + 3/(t + ...)))), Lentz form.
inline double mills_cf(double t) {
    const double tiny = 1e-300;
    double b = t;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 200; ++i) {
        double an = static_cast<double>(i);
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delt = d * c;
        h *= delt;
        if (std::abs(delt - 1.0) <= 1e-17) break;
    }
    return h;
}

// 1/sqrt(2) as a double-double pair: the argument z/sqrt(2) must carry its
// rounding error into erfc, whose log-derivative amplifies it by ~2u.
inline constexpr double INV_SQRT2_HI = 0.7071067811865476;
inline constexpr double INV_SQRT2_LO = -4.833646656726457e-17;
inline constexpr double TWO_OVER_SQRTPI = 1.1283791670955126;

}  // namespace detail

inline double norm_pdf(double z) {
    if (std::isnan(z)) throw std::domain_error("norm_pdf: NaN input");
    return detail::phi_exact(z);
}

// Phi(z), relative-accurate in both tails (erfc with argument-error
// correction; Mills-ratio continued fraction below the erfc range).
inline double norm_cdf(double z) {
    if (std::isnan(z)) throw std::domain_error("norm_cdf: NaN input");
    if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
    if (z < -37.55) {
        if (z < -38.6) return 0.0;  // below the subnormal range
        return detail::phi_exact(z) * detail::mills_cf(-z);
    }
    detail::Pair u = detail::two_prod(z, -detail::INV_SQRT2_HI);
    double du = u.lo + z * -detail::INV_SQRT2_LO;
    double r = std::erfc(u.hi);
    // first-order correction: erfc(u+du) = erfc(u) - du * 2/sqrt(pi) e^{-u^2}
    double uu = u.hi * u.hi;
    if (uu < 745.0) r -= du * detail::TWO_OVER_SQRTPI * std::exp(-uu);
    return 0.5 * r;
}

// 1 - Phi(z), relative-accurate upper tail.
inline double norm_cdf_c(double z) { return norm_cdf(-z); }

inline double log_norm_cdf(double z) {
    if (z > -8.0) return std::log(norm_cdf(z));
    return detail::log_phi(z) + std::log(detail::mills_cf(-z));
}

namespace detail {

inline constexpr double ACK_A[6] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                    1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00};
inline constexpr double ACK_B[5] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                    6.680131188771972e+01, -1.328068155288572e+01};
inline constexpr double ACK_C[6] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                    -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00};
inline constexpr double ACK_D[4] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                    3.754408661907416e+00};

inline double acklam(double p) {
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((ACK_C[0] * q + ACK_C[1]) * q + ACK_C[2]) * q + ACK_C[3]) * q + ACK_C[4]) * q + ACK_C[5]) /
               ((((ACK_D[0] * q + ACK_D[1]) * q + ACK_D[2]) * q + ACK_D[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -acklam(1.0 - p);
    double q = p - 0.5;
    double r = q * q;
    return (((((ACK_A[0] * r + ACK_A[1]) * r + ACK_A[2]) * r + ACK_A[3]) * r + ACK_A[4]) * r + ACK_A[5]) * q /
           (((((ACK_B[0] * r + ACK_B[1]) * r + ACK_B[2]) * r + ACK_B[3]) * r + ACK_B[4]) * r + 1.0);
}

}  // namespace detail

// Inverse normal CDF: Acklam rational start refined by one Halley step with
// the residual evaluated on the smaller tail side.
inline double norm_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_inv: p outside (0,1)");
    double z = detail::acklam(p);
    double ph = detail::phi_exact(z);
    if (ph > 0.0) {
        double e = (p <= 0.5) ? norm_cdf(z) - p : (1.0 - p) - norm_cdf_c(z);
        double u = e / ph;
        z -= u / (1.0 + 0.5 * z * u);
    }
    return z;
}

namespace detail {

// ln B(a,b) = ln sqrt(2pi) - ln(a+b)/2 + st(a)+st(b)-st(a+b)
//           + (a-1/2)ln(a/s) + (b-1/2)ln(b/s); cancellation-safe for large a+b.
inline Pair ln_beta_pair(double a, double b) {
    double s = a + b;
    double la = (a > b) ? std::log1p(-b / s) : std::log(a / s);
    double lb = (b >= a) ? std::log1p(-a / s) : std::log(b / s);
    Pair t1 = two_prod(a - 0.5, la);
    Pair t2 = two_prod(b - 0.5, lb);
    CompAcc acc;
    acc.add(LN_SQRT_2PI);
    acc.add(-0.5 * std::log(s));
    acc.add(stirlerr(a));
    acc.add(stirlerr(b));
    acc.add(-stirlerr(s));
    acc.add(t1.hi, t1.lo);
    acc.add(t2.hi, t2.lo);
    return {acc.hi, acc.lo};
}

// ln B(a,b) + a ln(a/s) + b ln(b/s), s = a+b: the mode-centered remainder
// ln sqrt(2pi) + st(a)+st(b)-st(s) - ln(ab/s)/2; all terms small, accurate to
// ~eps absolute.
inline Pair ln_beta_core_pair(double a, double b) {
    double s = a + b;
    CompAcc acc;
    acc.add(LN_SQRT_2PI);
    acc.add(stirlerr(a));
    acc.add(stirlerr(b));
    acc.add(-stirlerr(s));
    acc.add(-0.5 * std::log(a * (b / s)));
    return {acc.hi, acc.lo};
}

inline double betacf(double a, double b, double y) {
    const double tiny = 1e-300;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * y / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= GAMMA_MAX_ITER; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * y / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * y / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delt = d * c;
        h *= delt;
        if (std::abs(delt - 1.0) <= 1e-16) return h;
    }
    throw numeric_error("inc_beta: continued fraction did not converge");
}

}  // namespace detail

inline double ln_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("ln_beta: need a, b > 0");
    detail::Pair p = detail::ln_beta_pair(a, b);
    return p.hi + p.lo;
}

// Regularized incomplete beta I_y(a,b), continued fraction with the symmetry
// switch at y > a/(a+b).
inline double inc_beta(double y, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("inc_beta: need a, b > 0");
    if (std::isnan(y) || y < 0.0 || y > 1.0) throw std::domain_error("inc_beta: y outside [0,1]");
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    if (a == b && y == 0.5) return 0.5;  // I_{1/2}(a,a) = 1/2 exactly
    double s = a + b;
    detail::Pair p = detail::two_prod(y, s);
    detail::Pair e = detail::two_sum(p.hi, -a);
    double eh = e.hi;
    double el = e.lo + p.lo;
    detail::CompAcc acc;
    if (std::abs(eh) < 0.5 * std::min(a, b)) {
        // near the mode y ~ a/s the classic a ln y + b ln(1-y) - ln B cancels
        // catastrophically; recenter with e = y*s - a held error-free:
        // lfront = a log1p(e/a) + b log1p(-e/b) - ln_beta_core
        double d1h = eh / a;
        detail::Pair r = detail::two_prod(d1h, a);
        double d1l = (((eh - r.hi) - r.lo) + el) / a;
        double u1 = std::log1p(d1h) + d1l / (1.0 + d1h);
        double d2h = -eh / b;
        r = detail::two_prod(d2h, b);
        double d2l = (((-eh - r.hi) - r.lo) - el) / b;
        double u2 = std::log1p(d2h) + d2l / (1.0 + d2h);
        detail::Pair core = detail::ln_beta_core_pair(a, b);
        detail::Pair t1 = detail::two_prod(a, u1);
        detail::Pair t2 = detail::two_prod(b, u2);
        acc.add(t1.hi, t1.lo);
        acc.add(t2.hi, t2.lo);
        acc.add(-core.hi, -core.lo);
    } else {
        detail::Pair lb = detail::ln_beta_pair(a, b);
        detail::Pair t1 = detail::two_prod(a, std::log(y));
        detail::Pair t2 = detail::two_prod(b, std::log1p(-y));
        acc.add(-lb.hi, -lb.lo);
        acc.add(t1.hi, t1.lo);
        acc.add(t2.hi, t2.lo);
    }
    // Forward CF below the mean, complemented CF above.  Exactly at the mean
    // tie-break on a <= b so (y,a,b) and (1-y,b,a) take opposite branches and
    // their sum telescopes to 1 instead of adding two independent CF errors.
    double thresh = a / s;
    if (y < thresh || (y == thresh && a <= b))
        return detail::exp_pair(acc.hi, acc.lo, detail::betacf(a, b, y) / a);
    return 1.0 - detail::exp_pair(acc.hi, acc.lo, detail::betacf(b, a, 1.0 - y) / b);
}

// ---------------------------------------------------------------- chi-square helpers
inline double chi2_cdf(double q, double nu) {
    if (!(nu > 0.0) || std::isnan(q) || q < 0.0) throw std::domain_error("chi2_cdf: need q >= 0, nu > 0");
    return reg_gamma_lower(0.5 * nu, 0.5 * q);
}

// The printed closed-form quantile approximation, clamped at zero.  It is
// asymptotic in nu; callers must validate the output (one chi2_cdf call) when
// it matters -- for small nu the raw formula can land above the median.
inline double chi2_quantile_approx_inglot(double eps, double nu) {
    if (!(eps > 0.0 && eps < 1.0) || !(nu > 0.0))
        throw std::domain_error("chi2_quantile_approx_inglot: need eps in (0,1), nu > 0");
    double le = std::log(eps);
    double raw = nu + 2.0 * eps + 1.62 * std::sqrt(nu * eps) + 0.63012 * std::sqrt(nu) * le -
                 1.12032 * std::sqrt(nu) - 2.48 * std::sqrt(eps) - 0.65381 * le - 0.22872;
    return std::max(0.0, raw);
}

// Safeguarded Newton on chi2_cdf (smaller-tail residual), bisection fallback.
inline double chi2_quantile_exact(double p, double nu) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile_exact: p outside (0,1)");
    if (!(nu > 0.0)) throw std::domain_error("chi2_quantile_exact: nu must be > 0");
    const double inf = std::numeric_limits<double>::infinity();
    double a = 0.5 * nu;
    // Wilson-Hilferty start
    double z = norm_inv(p);
    double t = 1.0 - 2.0 / (9.0 * nu) + z * std::sqrt(2.0 / (9.0 * nu));
    double q = (t > 0) ? nu * t * t * t : nu * std::exp(z * std::sqrt(2.0 / nu) - 1.0);
    if (!(q > 0) || !std::isfinite(q)) q = nu;
    double lo = 0.0, hi = inf;
    const bool small = p <= 0.5;
    auto f = [&](double qq) {
        return small ? reg_gamma_lower(a, 0.5 * qq) - p : (1.0 - p) - reg_gamma_upper(a, 0.5 * qq);
    };
    // bracket by geometric expansion
    for (int i = 0; i < 2200; ++i) {
        double v = f(q);
        if (v == 0.0) return q;
        if (v < 0.0) {
            lo = q;
            if (hi == inf) {
                q *= 4.0;
                continue;
            }
        } else {
            hi = q;
        }
        if (lo > 0.0 && hi < inf) break;
        q /= 4.0;
        if (q < 1e-320) {
            lo = 0.0;
            break;
        }
    }
    q = (lo > 0 && hi < inf) ? std::sqrt(lo * hi) : std::max(lo, std::min(q, hi));
    for (int i = 0; i < 200; ++i) {
        double v = f(q);
        // chi2 pdf at q: (q/2)^{a-1} e^{-q/2} / (2 Gamma(a)) = exp(pref)/q
        double dens = (q > 0) ? std::exp(detail::ln_gamma_prefactor(a, 0.5 * q)) / q : 0.0;
        if (v < 0.0)
            lo = q;
        else
            hi = q;
        double qn = (dens > 0.0) ? q - v / dens : std::numeric_limits<double>::quiet_NaN();
        if (!(lo < qn && qn < hi) || !std::isfinite(qn))
            qn = (lo > 0 && hi < inf) ? std::sqrt(lo * hi) : 0.5 * (lo + (hi < inf ? hi : 4 * q));
        if (std::abs(qn - q) <= 1e-15 * std::abs(q)) return qn;
        q = qn;
    }
    throw numeric_error("chi2_quantile_exact: no convergence after 200 iterations", q,
                        hi < inf ? hi - lo : std::numeric_limits<double>::quiet_NaN());
}

// q with reg_gamma_upper(nu/2, q/2) = eps_u.  Needed because upper quantiles
// at probabilities like 1 - 1e-18 cannot pass through chi2_quantile_exact
// (1 - 1e-18 rounds to 1.0 in double); solves the upper-tail equation
// directly via log-domain Newton.
inline double chi2_quantile_upper(double eps_u, double nu) {
    if (!(eps_u > 0.0 && eps_u < 1.0)) throw std::domain_error("chi2_quantile_upper: eps_u outside (0,1)");
    if (!(nu > 0.0)) throw std::domain_error("chi2_quantile_upper: nu must be > 0");
    if (eps_u >= 0.5) return chi2_quantile_exact(1.0 - eps_u, nu);
    const double inf = std::numeric_limits<double>::infinity();
    double a = 0.5 * nu;
    double le = std::log(eps_u);
    // Wilson-Hilferty start at the upper z
    double z = -norm_inv(eps_u);
    double t9 = 2.0 / (9.0 * nu);
    double w = 1.0 - t9 + z * std::sqrt(t9);
    double q = (w > 0.0) ? nu * w * w * w : nu;
    double lo = 0.0, hi = inf;
    for (int i = 0; i < 300; ++i) {
        double log_gu = log_reg_gamma_upper(a, 0.5 * q);
        double v = log_gu - le;
        if (std::abs(v) <= 1e-12) return q;
        if (v > 0.0)
            lo = q;
        else
            hi = q;
        if (v > 0.0 && hi == inf) {
            q *= 2.0;
            continue;
        }
        // d(log Gu)/dq = -exp(pref - log Gu)/q  =>  Newton step below; the
        // multiplier explodes below the mode, so guard before exponentiating
        double pref = detail::ln_gamma_prefactor(a, 0.5 * q);
        double grow = log_gu - pref;
        double qn = (grow < 700.0) ? q + v * q * std::exp(grow) : std::numeric_limits<double>::quiet_NaN();
        if (!(lo < qn && qn < hi) || !std::isfinite(qn))
            qn = (lo > 0.0 && hi < inf) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (std::abs(qn - q) <= 0.25e-15 * q && std::abs(v) < 1e-9) return qn;
        q = qn;
    }
    throw numeric_error("chi2_quantile_upper: no convergence after 300 iterations", q);
}

}  // namespace nct
