// (G7,K15) Gauss-Kronrod quadrature: single panel, fixed uniform panels with
// optional geometric edge grading, and adaptive worst-panel bisection.
//
// Node/weight constants are the QUADPACK values; the panel error estimate is
// the QUADPACK smoothing err = resasc * min(1, (200*|K15-G7|/resasc)^1.5),
// which is deliberately conservative.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nct/specfun.hpp"

namespace nct {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

// Expanded view of the (G7,K15) rule on [-1,1].
struct QuadratureRule {
    double kronrod_nodes[15];
    double kronrod_weights[15];
    double gauss_weights[7];
};

namespace detail {

inline constexpr double XGK[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
inline constexpr double WGK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr double WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

inline void check_node_value(double v, double z) {
    if (!std::isfinite(v))
        throw numeric_error("gk15_panel: non-finite integrand value at z=" + std::to_string(z));
}

// Kahan sum in ascending magnitude; small inputs first limits cancellation.
inline double sorted_kahan_sum(std::vector<double>& parts) {
    std::stable_sort(parts.begin(), parts.end(),
                     [](double u, double v) { return std::abs(u) < std::abs(v); });
    double s = 0.0;
    double comp = 0.0;
    for (double v : parts) {
        double y = v - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace detail

// Full symmetric (G7,K15) rule on [-1,1], nodes in ascending order.
inline QuadratureRule gk15_rule() {
    QuadratureRule r{};
    for (int j = 0; j < 7; ++j) {
        r.kronrod_nodes[j] = -detail::XGK[j];
        r.kronrod_nodes[14 - j] = detail::XGK[j];
        r.kronrod_weights[j] = detail::WGK[j];
        r.kronrod_weights[14 - j] = detail::WGK[j];
    }
    r.kronrod_nodes[7] = 0.0;
    r.kronrod_weights[7] = detail::WGK[7];
    for (int j = 0; j < 3; ++j) {
        r.gauss_weights[j] = detail::WG[j];
        r.gauss_weights[6 - j] = detail::WG[j];
    }
    r.gauss_weights[3] = detail::WG[3];
    return r;
}

// One (G7,K15) panel over [a,b]; error via the QUADPACK resasc smoothing.
template <class F>
QuadratureResult gk15_panel(F&& f, double a, double b) {
    using detail::WG;
    using detail::WGK;
    using detail::XGK;
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double fc = f(c);
    detail::check_node_value(fc, c);
    double fv1[7], fv2[7];
    double resk = WGK[7] * fc;
    double resg = WG[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * XGK[j];
        double f1 = f(c - x);
        double f2 = f(c + x);
        detail::check_node_value(f1, c - x);
        detail::check_node_value(f2, c + x);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        if (j % 2 == 1)  // XGK[1],XGK[3],XGK[5] are the G7 nodes (plus center)
            resg += WG[j / 2] * (f1 + f2);
    }
    double reskh = resk * 0.5;
    double resasc = WGK[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += WGK[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    resasc *= std::abs(h);
    double value = resk * h;
    double err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return {value, err, 15};
}

inline constexpr int GRADE_LEVELS = 36;

// n uniform panels over [a,b].  With graded_left the first panel is split
// geometrically (ratio 2, GRADE_LEVELS levels): the integrand can have an
// algebraic cusp (z-a)^nu at the left edge, and grading lets every subpanel
// see an analytic function; the innermost stub carries O(2^-K)^(1+nu)
// relative mass.  Panel sums are combined by ascending-magnitude Kahan.
template <class F>
QuadratureResult fixed_panels(F&& f, double a, double b, int n, bool graded_left = false) {
    if (n < 1) throw std::domain_error("fixed_panels: need n >= 1");
    double w = (b - a) / n;
    std::vector<double> edges;
    edges.reserve(n + 1 + (graded_left ? GRADE_LEVELS : 0));
    if (graded_left && w > 0.0) {
        edges.push_back(a);
        for (int k = GRADE_LEVELS; k >= 1; --k) edges.push_back(a + std::ldexp(w, -k));
    } else {
        edges.push_back(a);
    }
    for (int i = 1; i < n; ++i) edges.push_back(a + i * w);
    edges.push_back(b);
    std::vector<double> parts;
    parts.reserve(edges.size() - 1);
    double toterr = 0.0;
    long evals = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        QuadratureResult r = gk15_panel(f, edges[i], edges[i + 1]);
        parts.push_back(r.value);
        toterr += r.error;
        evals += r.evaluations;
    }
    return {detail::sorted_kahan_sum(parts), toterr, evals};
}

// Global adaptive integration: bisect the worst panel until the summed error
// estimate meets max(abs_tol, rel_tol*|value|) or the panel budget runs out
// (numeric_error carrying the best value and its estimate).
template <class F>
QuadratureResult adaptive(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                          int max_panels = 10000) {
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
        throw std::domain_error("adaptive: need a positive tolerance");
    struct Panel {
        double a, b, v, e;
        bool frozen;  // no longer splittable in double precision
    };
    std::vector<Panel> panels;
    QuadratureResult r0 = gk15_panel(f, a, b);
    panels.push_back({a, b, r0.value, r0.error, false});
    long evals = r0.evaluations;
    for (;;) {
        double sum_v = 0.0, sum_e = 0.0;
        std::size_t worst = panels.size();
        for (std::size_t i = 0; i < panels.size(); ++i) {
            sum_v += panels[i].v;
            sum_e += panels[i].e;
            if (!panels[i].frozen && panels[i].e > 0.0 &&
                (worst == panels.size() || panels[i].e > panels[worst].e))
                worst = i;
        }
        double tol = std::max(abs_tol, rel_tol * std::abs(sum_v));
        if (sum_e <= tol || worst == panels.size()) {
            std::vector<double> parts;
            parts.reserve(panels.size());
            for (const Panel& p : panels) parts.push_back(p.v);
            return {detail::sorted_kahan_sum(parts), sum_e, evals};
        }
        if (static_cast<int>(panels.size()) >= max_panels)
            throw numeric_error("adaptive: panel budget exhausted (" + std::to_string(max_panels) +
                                    " panels), error estimate " + std::to_string(sum_e),
                                sum_v, sum_e);
        Panel p = panels[worst];
        double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            panels[worst].frozen = true;
            continue;
        }
        QuadratureResult rl = gk15_panel(f, p.a, mid);
        QuadratureResult rr = gk15_panel(f, mid, p.b);
        evals += rl.evaluations + rr.evaluations;
        panels[worst] = {p.a, mid, rl.value, rl.error, false};
        panels.push_back({mid, p.b, rr.value, rr.error, false});
    }
}

}  // namespace nct
