#include "volclust/errors.hpp"
#include "volclust/estimate.hpp"
#include "volclust/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace volclust;

namespace {

SimResult simulate_garch(std::size_t n, std::uint64_t seed, std::optional<double> nu = std::nullopt) {
    SimConfig cfg;
    cfg.family = ModelFamily::GARCH;
    cfg.params = garch_params(0.05, 0.1, 0.85, nu);
    cfg.n = n;
    cfg.seed = seed;
    return simulate_path(cfg);
}

}  // namespace

TEST(Reparameterization, RoundTripsInteriorPoints) {
    const std::vector<std::pair<ModelFamily, ParamVector>> cases{
        {ModelFamily::GARCH, garch_params(1e-6, 0.08, 0.91, 8.0)},
        {ModelFamily::GARCH, garch_params(0.3, 0.2, 0.1)},
        {ModelFamily::IGARCH, igarch_params(0.05, 0.2, 0.6, 4.5)},
        {ModelFamily::FIGARCH, figarch_params(0.05, -0.3, 0.5, 0.6, 7.0)},
        {ModelFamily::FIGARCH, figarch_params(2.0, 0.1, 0.3, 0.25)},
    };
    for (const auto& [family, p] : cases) {
        Reparameterization rp(family, p.student());
        auto u = rp.to_unconstrained(p);
        auto back = rp.from_unconstrained(u);
        EXPECT_NEAR(back.omega, p.omega, 1e-10 * p.omega);
        EXPECT_NEAR(back.alpha, p.alpha, 1e-10);
        EXPECT_NEAR(back.beta, p.beta, 1e-10);
        EXPECT_NEAR(back.d, p.d, 1e-10);
        EXPECT_EQ(back.nu.has_value(), p.nu.has_value());
        if (p.nu) EXPECT_NEAR(*back.nu, *p.nu, 1e-10);
    }
}

TEST(Reparameterization, KnownCoordinates) {
    auto u = transform_to_unconstrained(figarch_params(1.0, 0.1, 0.5, 0.5), ModelFamily::FIGARCH);
    Reparameterization rp(ModelFamily::FIGARCH, false);
    ASSERT_EQ(rp.names(), (std::vector<std::string>{"omega", "alpha", "beta", "d"}));
    EXPECT_EQ(u[0], 0.0);        // log(1)
    EXPECT_NEAR(u[3], 0.0, 0.0); // logit(0.5)
}

TEST(Reparameterization, BoundaryValuesAreRejected) {
    Reparameterization g(ModelFamily::GARCH, false);
    EXPECT_THROW((void)g.to_unconstrained(garch_params(1.0, 0.0, 0.5)), BoundaryError);
    EXPECT_THROW((void)g.to_unconstrained(garch_params(0.0, 0.1, 0.5)), BoundaryError);
    EXPECT_THROW((void)g.to_unconstrained(garch_params(1.0, 0.5, 0.5)), BoundaryError);
    Reparameterization f(ModelFamily::FIGARCH, true);
    EXPECT_THROW((void)f.to_unconstrained(figarch_params(1.0, 0.1, 0.5, 1.0, 5.0)), BoundaryError);
    EXPECT_THROW((void)f.to_unconstrained(figarch_params(1.0, 0.1, 0.5, 0.5, 2.0)), BoundaryError);
}

TEST(Reparameterization, JacobianMatchesAnalyticLogDerivative) {
    Reparameterization rp(ModelFamily::IGARCH, false);
    auto u = rp.to_unconstrained(igarch_params(0.5, 0.2, 0.6));
    auto j = rp.jacobian(u);
    EXPECT_NEAR(j(0, 0), 0.5, 1e-8);   // d omega / d log omega
    EXPECT_NEAR(j(1, 1), 0.2, 1e-8);   // d alpha / d log alpha
    EXPECT_NEAR(j(2, 2), 0.6 * 0.4, 1e-8);  // logistic derivative
    EXPECT_NEAR(j(0, 1), 0.0, 1e-12);
}

TEST(StandardErrors, QuadraticCurvature) {
    auto ll = [](std::span<const double> t) { return -(t[0] - 2.0) * (t[0] - 2.0) / (2 * 0.25); };
    const double theta[] = {2.0};
    auto se = hessian_standard_errors(ll, theta, theta);
    ASSERT_TRUE(se.std_error[0].has_value());
    EXPECT_NEAR(*se.std_error[0], 0.5, 1e-8);
    // z = 4, two-sided p = erfc(4 / sqrt 2)
    EXPECT_NEAR(*se.pvalues[0], std::erfc(4.0 / std::sqrt(2.0)), 1e-10);
}

TEST(StandardErrors, DeltaMethodScalesByJacobian) {
    auto ll = [](std::span<const double> t) { return -(t[0] - 2.0) * (t[0] - 2.0) / (2 * 0.25); };
    const double theta[] = {2.0};
    const double est[] = {6.0};
    Eigen::MatrixXd jac(1, 1);
    jac << 3.0;
    auto se = hessian_standard_errors(ll, theta, est, jac);
    EXPECT_NEAR(*se.std_error[0], 1.5, 1e-8);
}

TEST(StandardErrors, SingularHessianLeavesThemAbsent) {
    auto ll = [](std::span<const double> t) { return -(t[0] - t[1]) * (t[0] - t[1]); };
    const double theta[] = {1.0, 1.0};
    auto se = hessian_standard_errors(ll, theta, theta);
    EXPECT_FALSE(se.covariance.has_value());
    EXPECT_FALSE(se.std_error[0].has_value());
    EXPECT_FALSE(se.pvalues[1].has_value());
}

TEST(Significance, Thresholds) {
    EXPECT_EQ(stars(significance_of(0.009)), "**");
    EXPECT_EQ(stars(significance_of(0.01)), "*");
    EXPECT_EQ(stars(significance_of(0.049)), "*");
    EXPECT_EQ(stars(significance_of(0.05)), "");
    EXPECT_EQ(stars(significance_of(std::nullopt)), "");
}

TEST(Persistence, FlagExamples) {
    auto stoxx = persistence_check(0.076581, 0.913627);
    EXPECT_NEAR(stoxx.sum, 0.990208, 1e-12);
    EXPECT_TRUE(stoxx.flagged);
    EXPECT_FALSE(stoxx.recommendation.empty());
    EXPECT_FALSE(persistence_check(0.1, 0.5).flagged);
    EXPECT_FALSE(persistence_check(0.05, 0.93).flagged);
}

TEST(FitConfig, FixedDAtTheEndpointsIsRejected) {
    FitConfig c;
    c.family = ModelFamily::FIGARCH;
    c.fixed_d = 1.0;
    try {
        validate(c);
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("igarch"), std::string::npos);
    }
    c.fixed_d = 0.0;
    EXPECT_THROW(validate(c), DomainError);
    c.fixed_d = 0.4;
    EXPECT_NO_THROW(validate(c));
}

TEST(Fit, DataRequirements) {
    FitConfig c;
    std::vector<double> short_series(49, 0.01);
    for (std::size_t i = 0; i < short_series.size(); i += 2) short_series[i] = -0.01;
    EXPECT_THROW((void)fit(short_series, c), InsufficientDataError);
    std::vector<double> constant(200, 0.01);
    EXPECT_THROW((void)fit(constant, c), DataQualityError);
    auto sim = simulate_garch(200, 1);
    sim.series.returns[17] = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW((void)fit(sim.series, c), DataQualityError);
}

TEST(Fit, OptimumDominatesAParameterGrid) {
    auto sim = simulate_garch(3000, 21);
    FitConfig c;
    c.innovation = Innovation::Gaussian;
    auto r = fit(sim.series, c);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.gradient_norm, kGradientTolerance);

    auto e = demean(sim.series.returns);
    VarianceEvaluator ev(e);
    double best = -std::numeric_limits<double>::infinity();
    for (double omega = 0.01; omega <= 0.15; omega += 0.01)
        for (double a = 0.02; a <= 0.3; a += 0.02)
            for (double b = 0.5; b <= 0.96; b += 0.02)
                if (auto ll = ev.try_log_likelihood(ModelFamily::GARCH, garch_params(omega, a, b)))
                    best = std::max(best, *ll);
    EXPECT_GE(r.loglik, best);
    // Near the truth (0.05, 0.1, 0.85) at this sample size.
    EXPECT_NEAR(r.params.alpha, 0.1, 0.05);
    EXPECT_NEAR(r.params.beta, 0.85, 0.07);
}

TEST(Fit, LikelihoodIsLocallyConcaveAtTheOptimum) {
    auto sim = simulate_garch(2000, 5, 7.0);
    FitConfig c;
    auto r = fit(sim.series, c);
    ASSERT_TRUE(r.converged);
    auto e = demean(sim.series.returns);
    for (double h : {1e-3, -1e-3}) {
        auto p = r.params;
        p.alpha += h;
        EXPECT_LE(log_likelihood(ModelFamily::GARCH, p, e), r.loglik);
        p = r.params;
        p.beta += h;
        EXPECT_LE(log_likelihood(ModelFamily::GARCH, p, e), r.loglik);
        p = r.params;
        *p.nu += 100 * h;
        EXPECT_LE(log_likelihood(ModelFamily::GARCH, p, e), r.loglik);
    }
    ASSERT_NE(r.find("nu"), nullptr);
    EXPECT_TRUE(r.find("nu")->std_error.has_value());
    EXPECT_EQ(r.find("d"), nullptr);
    EXPECT_EQ(r.start_objectives.size(), 3u);
}

TEST(Fit, FixedDIsNotEstimated) {
    SimConfig cfg;
    cfg.family = ModelFamily::FIGARCH;
    cfg.params = figarch_params(0.05, -0.3, 0.5, 0.6);
    cfg.n = 2000;
    auto sim = simulate_path(cfg);
    FitConfig c;
    c.family = ModelFamily::FIGARCH;
    c.innovation = Innovation::Gaussian;
    c.fixed_d = 0.6;
    auto r = fit(sim.series, c);
    EXPECT_EQ(r.params.d, 0.6);
    EXPECT_EQ(r.find("d"), nullptr);
    EXPECT_EQ(r.coefficients.size(), 3u);
}

TEST(Fit, StandardErrorsCoverTheTruth) {
    // 95% intervals for alpha over 20 replications: expect most to cover.
    int covered = 0;
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto sim = simulate_garch(2000, seed);
        FitConfig c;
        c.innovation = Innovation::Gaussian;
        c.restarts = 0;
        auto r = fit(sim.series, c);
        const auto* a = r.find("alpha");
        ASSERT_NE(a, nullptr);
        if (a->std_error && std::abs(a->value - 0.1) <= 1.96 * *a->std_error) ++covered;
    }
    EXPECT_GE(covered, 15);
}
