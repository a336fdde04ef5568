#include <gtest/gtest.h>

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nct/quadrature.hpp"
#include "nct/specfun.hpp"
#include "test_util.hpp"

using nct_test::rel_err;
using nct_test::ulp_gap;
using nct_test::ulp_of;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

TEST(Gk15Rule, NodesSymmetricAscendingInOpenInterval) {
    nct::QuadratureRule r = nct::gk15_rule();
    for (int j = 0; j < 15; ++j) {
        EXPECT_GT(r.kronrod_nodes[j], -1.0);
        EXPECT_LT(r.kronrod_nodes[j], 1.0);
        EXPECT_GT(r.kronrod_weights[j], 0.0);
        if (j > 0) {
            EXPECT_GT(r.kronrod_nodes[j], r.kronrod_nodes[j - 1]);
        }
        EXPECT_EQ(r.kronrod_nodes[j], -r.kronrod_nodes[14 - j]);
        EXPECT_EQ(r.kronrod_weights[j], r.kronrod_weights[14 - j]);
    }
    EXPECT_EQ(r.kronrod_nodes[7], 0.0);
    for (int j = 0; j < 7; ++j) {
        EXPECT_GT(r.gauss_weights[j], 0.0);
        EXPECT_EQ(r.gauss_weights[j], r.gauss_weights[6 - j]);
    }
}

TEST(Gk15Rule, WeightsSumToTwo) {
    nct::QuadratureRule r = nct::gk15_rule();
    double sk = 0.0, sg = 0.0;
    for (double w : r.kronrod_weights) sk += w;
    for (double w : r.gauss_weights) sg += w;
    EXPECT_LE(std::abs(sk - 2.0), 1e-15);
    EXPECT_LE(std::abs(sg - 2.0), 1e-15);
}

TEST(Gk15Panel, ConstantIsExact) {
    nct::QuadratureResult r = nct::gk15_panel([](double) { return 1.0; }, 0.0, 1.0);
    EXPECT_LE(std::abs(r.value - 1.0), ulp_of(1.0));
    EXPECT_EQ(r.evaluations, 15);
}

TEST(Gk15Panel, PolynomialDegreeThirteenWithinFourUlp) {
    auto f = [](double z) { return std::pow(z, 13); };
    nct::QuadratureResult r = nct::gk15_panel(f, 0.0, 1.0);
    EXPECT_LE(ulp_gap(r.value, 1.0 / 14.0), 4.0);
    // Odd power over a symmetric interval integrates to zero.
    nct::QuadratureResult rs = nct::gk15_panel(f, -1.0, 1.0);
    EXPECT_LE(std::abs(rs.value), 1e-15);
}

TEST(Gk15Panel, ExactThroughDegreeTwentyTwo) {
    for (int k : {16, 20, 22}) {
        auto f = [k](double z) { return std::pow(z, k); };
        nct::QuadratureResult r = nct::gk15_panel(f, 0.0, 1.0);
        EXPECT_LE(rel_err(r.value, 1.0 / (k + 1)), 1e-13) << "degree " << k;
    }
}

TEST(Gk15Panel, SineOverHalfPeriod) {
    nct::QuadratureResult r =
        nct::gk15_panel([](double z) { return std::sin(z); }, 0.0, std::numbers::pi);
    EXPECT_LE(std::abs(r.value - 2.0), 1e-10);
    EXPECT_GT(r.error, 0.0);
    EXPECT_LT(r.error, 1e-6);
}

TEST(Gk15Panel, NonFiniteNodeValueThrowsNumericError) {
    EXPECT_THROW(nct::gk15_panel([](double z) { return 1.0 / z; }, -1.0, 1.0),
                 nct::numeric_error);
    EXPECT_THROW(nct::gk15_panel([](double) { return kNaN; }, 0.0, 1.0), nct::numeric_error);
}

TEST(FixedPanels, SinglePanelMatchesGk15Bitwise) {
    auto f = [](double z) { return std::exp(-z) * std::cos(3.0 * z); };
    nct::QuadratureResult a = nct::gk15_panel(f, 0.2, 1.7);
    nct::QuadratureResult b = nct::fixed_panels(f, 0.2, 1.7, 1);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
    EXPECT_EQ(b.evaluations, 15);
}

TEST(FixedPanels, ExponentialSixteenPanels) {
    nct::QuadratureResult r =
        nct::fixed_panels([](double z) { return std::exp(z); }, 0.0, 1.0, 16);
    EXPECT_LE(rel_err(r.value, std::exp(1.0) - 1.0), 1e-14);
    EXPECT_EQ(r.evaluations, 15L * 16L);
}

TEST(FixedPanels, EvaluationCountAndValidation) {
    for (int n : {1, 2, 7, 33}) {
        nct::QuadratureResult r = nct::fixed_panels([](double z) { return z; }, 0.0, 2.0, n);
        EXPECT_EQ(r.evaluations, 15L * n);
        EXPECT_LE(ulp_gap(r.value, 2.0), 4.0);
    }
    EXPECT_THROW(nct::fixed_panels([](double z) { return z; }, 0.0, 1.0, 0), std::domain_error);
}

TEST(FixedPanels, LinearityWithinEightUlp) {
    auto f = [](double z) { return std::sin(z + 0.3); };
    auto g = [](double z) { return std::exp(-0.5 * z); };
    const double al = 2.25, be = -0.75;
    auto combo = [&](double z) { return al * f(z) + be * g(z); };
    nct::QuadratureResult rc = nct::fixed_panels(combo, -1.0, 2.0, 8);
    nct::QuadratureResult rf = nct::fixed_panels(f, -1.0, 2.0, 8);
    nct::QuadratureResult rg = nct::fixed_panels(g, -1.0, 2.0, 8);
    EXPECT_LE(ulp_gap(rc.value, al * rf.value + be * rg.value), 8.0);
}

TEST(FixedPanels, AdditivityAtMidpointWithinFourUlp) {
    auto f = [](double z) { return std::cos(2.0 * z) + z * z; };
    nct::QuadratureResult whole = nct::fixed_panels(f, 0.0, 1.0, 8);
    nct::QuadratureResult left = nct::fixed_panels(f, 0.0, 0.5, 4);
    nct::QuadratureResult right = nct::fixed_panels(f, 0.5, 1.0, 4);
    EXPECT_LE(ulp_gap(whole.value, left.value + right.value), 4.0);
}

TEST(FixedPanels, GradedLeftResolvesEdgeCusp) {
    // sqrt(z) has an algebraic cusp at the left edge; uniform panels stall at
    // the first-panel error while grading recovers near-full precision.
    auto f = [](double z) { return std::sqrt(z); };
    double truth = 2.0 / 3.0;
    double plain = rel_err(nct::fixed_panels(f, 0.0, 1.0, 16).value, truth);
    nct::QuadratureResult g = nct::fixed_panels(f, 0.0, 1.0, 16, true);
    double graded = rel_err(g.value, truth);
    EXPECT_GE(plain, 1e-10);
    EXPECT_LE(graded, 1e-12);
    EXPECT_LE(graded * 100.0, plain);
    EXPECT_EQ(g.evaluations, 15L * (16L + nct::GRADE_LEVELS));
    std::cout << "[ RECORD ] cusp rel err: uniform=" << plain << " graded=" << graded << "\n";
}

TEST(FixedPanels, Deterministic) {
    auto f = [](double z) { return std::exp(-z * z); };
    nct::QuadratureResult a = nct::fixed_panels(f, -3.0, 3.0, 12);
    nct::QuadratureResult b = nct::fixed_panels(f, -3.0, 3.0, 12);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
}

TEST(Adaptive, GaussianBump) {
    auto f = [](double z) { return std::exp(-0.5 * z * z) / nct::detail::SQRT_2PI; };
    nct::QuadratureResult r = nct::adaptive(f, -10.0, 10.0, 1e-13);
    double truth = 1.0 - 2.0 * nct::norm_cdf(-10.0);
    EXPECT_LE(rel_err(r.value, truth), 1e-13);
    EXPECT_LE(std::abs(r.value - truth), r.error + 1e-15);
}

TEST(Adaptive, ResolvesNarrowSpikeWhereOnePanelFails) {
    const double w = 0.02, c = 0.37;
    auto f = [&](double z) { return std::exp(-((z - c) / w) * ((z - c) / w)); };
    double truth = w * std::sqrt(std::numbers::pi);  // tails beyond [0,1] are ~e^-342
    double fixed1 = rel_err(nct::fixed_panels(f, 0.0, 1.0, 1).value, truth);
    nct::QuadratureResult r = nct::adaptive(f, 0.0, 1.0, 1e-12);
    EXPECT_GE(fixed1, 1e-6);
    EXPECT_LE(rel_err(r.value, truth), 1e-11);
    EXPECT_GT(r.evaluations, 15);
}

TEST(Adaptive, ChiSquareDensityMass) {
    // chi^2(nu=10) density over [0,200]; mass checks against the CDF oracle.
    const double nu = 10.0;
    double lognorm = nct::gamma_ln(nu / 2.0) + (nu / 2.0) * std::log(2.0);
    auto f = [&](double q) {
        if (q <= 0.0) return 0.0;
        return std::exp((nu / 2.0 - 1.0) * std::log(q) - q / 2.0 - lognorm);
    };
    nct::QuadratureResult r = nct::adaptive(f, 0.0, 200.0, 1e-13);
    EXPECT_LE(std::abs(r.value - nct::chi2_cdf(200.0, nu)), 1e-12);
}

TEST(Adaptive, BudgetExhaustionCarriesBestEstimate) {
    auto f = [](double z) { return std::sin(50.0 * z); };
    try {
        nct::adaptive(f, 0.0, 10.0, 1e-15, 0.0, 3);
        FAIL() << "expected numeric_error";
    } catch (const nct::numeric_error& e) {
        double truth = (1.0 - std::cos(500.0)) / 50.0;
        EXPECT_TRUE(std::isfinite(e.best_value));
        EXPECT_GT(e.best_estimate, 0.0);
        // The carried estimate must be a faithful bound on the actual error.
        EXPECT_LE(std::abs(e.best_value - truth), e.best_estimate);
    }
}

TEST(Adaptive, ToleranceValidation) {
    auto f = [](double z) { return z; };
    EXPECT_THROW(nct::adaptive(f, 0.0, 1.0, 0.0, 0.0), std::domain_error);
    EXPECT_THROW(nct::adaptive(f, 0.0, 1.0, -1e-8), std::domain_error);
}

TEST(Adaptive, Deterministic) {
    auto f = [](double z) { return std::exp(-std::abs(z)) * std::cos(7.0 * z); };
    nct::QuadratureResult a = nct::adaptive(f, -4.0, 4.0, 1e-12);
    nct::QuadratureResult b = nct::adaptive(f, -4.0, 4.0, 1e-12);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.error, b.error);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

}  // namespace
