#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "efimov4d/criticality.hpp"
#include "efimov4d/energy.hpp"
#include "efimov4d/specfun.hpp"

using namespace efimov4d;
using namespace efimov4d::energy;

namespace {

const criticality::CriticalWell& well() {
    static const criticality::CriticalWell w = criticality::critical_unit_well();
    return w;
}

}  // namespace

TEST(Energy, CoefficientConsistency) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(1e-3, 2.0);
    for (int i = 0; i < 20; ++i) {
        const double mu0 = dist(rng);
        const PaperConstants c = paper_constants(mu0);
        EXPECT_NEAR(c.energy_coeff, c.energy_coeff_closed, 1e-12 * std::max(1.0, std::abs(c.energy_coeff_closed)));
        EXPECT_NEAR(c.kinetic_coeff * 4.0 * M_PI * M_PI, c.C5, 1e-12 * c.C5);
    }
    EXPECT_THROW(paper_constants(0.0), std::invalid_argument);
}

TEST(Energy, KineticCoefficientLimit) {
    // mu0 K1(mu0) -> 1 and mu0^2 K0(mu0) -> 0: C5 / (4 pi^2) -> 2/3.
    EXPECT_NEAR(paper_constants(1e-4).kinetic_coeff, 2.0 / 3.0, 1e-6);
    EXPECT_NEAR(paper_constants(0.1).kinetic_coeff, 2.0 / 3.0, 0.05);
}

TEST(Energy, EffectiveCoupling) {
    EXPECT_EQ(effective_coupling(0.0).value, 5.0 / 6.0);
    EXPECT_NEAR(effective_coupling(0.1).value, 0.558333333333333, 1e-14);
    EXPECT_TRUE(effective_coupling(0.1).exceeds_half);
    EXPECT_TRUE(effective_coupling(4.0 / 33.0 - 1e-9).exceeds_half);
    EXPECT_FALSE(effective_coupling(4.0 / 33.0 + 1e-9).exceeds_half);
    EXPECT_THROW(effective_coupling(-0.1), std::invalid_argument);
}

TEST(Energy, RecipeMu0SatisfiesCondition) {
    const double m = recipe_mu0(0.5);
    ASSERT_GT(m, 0.0);
    const double v = 0.5 * m * m * (1.0 - 2.0 * specfun::bessel_k(specfun::BesselOrder(2), m));
    EXPECT_LE(v, -2.0 + 0.25);
}

TEST(Energy, FitRecoversSyntheticCoefficients) {
    std::vector<std::pair<double, double>> pw, lg;
    for (double L : {1e2, 1e3, 1e4, 1e5}) {
        pw.emplace_back(L, -3.0 + 7.0 * std::pow(L, 0.8 - 1.0));
        lg.emplace_back(L, 4.0 * std::log(L) + 2.5);
    }
    const AsymptoticFit a = fit_asymptotic(pw, 0.8, FitModel::PowerCorrection);
    EXPECT_NEAR(a.a, -3.0, 1e-10);
    EXPECT_NEAR(a.b, 7.0, 1e-10);
    EXPECT_LT(a.residual_norm, 1e-10);
    const AsymptoticFit b = fit_asymptotic(lg, 0.8, FitModel::Logarithmic);
    EXPECT_NEAR(b.a, 4.0, 1e-10);
    EXPECT_NEAR(b.b, 2.5, 1e-10);
    EXPECT_THROW(fit_asymptotic({{1e2, 1.0}, {1e3, 2.0}}, 0.8, FitModel::Logarithmic), FitError);
    // theta = 1 makes both columns constant.
    EXPECT_THROW(fit_asymptotic(pw, 1.0, FitModel::PowerCorrection), FitError);
}

TEST(Energy, ReflectionBookkeeping) {
    // Full-space integration of phi^2 without the symmetry shortcut equals the assembled breakdown.
    const TrialParams p(1e4, 0.3);
    EnergyOptions opt;
    opt.with_kinetic = false;
    const NormBreakdown n = norm_breakdown(p, well().profile, opt);
    quadrature::AxisymField f;
    f.centers = {0.5 * p.L(), -0.5 * p.L()};
    f.known_seams = {1.0, p.rho(), 2.0 * p.rho()};
    f.decay_scale = 1.0 / p.mu();
    f.evaluator = [&p](double w, double s) {
        const double v = trialstate::assemble_phi(p, well().profile, Point4::from_axisym(w, s));
        return v * v;
    };
    quadrature::Options qo;
    qo.rel_tol = 1e-9;
    const double full =
        quadrature::axisym_integrate(f, quadrature::AxisymRegion::full(), 0.5 * p.L() + opt.truncation_factor / p.mu(), qo)
            .value;
    EXPECT_NEAR(full / n.total, 1.0, 1e-6);
}

TEST(Energy, BallBalanceAndSingleWellKinetic) {
    const TrialParams p(1e4, 0.3);
    const EnergyReport r = energy_form(p, well().profile, well().pot);
    // On the balls the potential and the gradient cancel up to the tail outside rho: -8 pi^2 rho^-2.
    EXPECT_NEAR(r.ball_balance / (-8.0 * M_PI * M_PI / (p.rho() * p.rho())), 1.0, 1e-6);
    EXPECT_LT(r.rayleigh, 0.0);
    EXPECT_NEAR(r.energy / r.norm_sq, r.rayleigh, 1e-15 * std::abs(r.rayleigh));
    EXPECT_NEAR(r.kinetic_single + r.kinetic_cross, r.kinetic_control, 1e-12 * std::abs(r.kinetic_control));
    double norm_sum = 0.0;
    for (const auto& [tag, piece] : r.per_region) norm_sum += piece.norm_sq;
    EXPECT_NEAR(norm_sum, r.norm_sq, 1e-12 * r.norm_sq);
}

TEST(Energy, NormGrowsLogarithmically) {
    EnergyOptions opt;
    opt.with_kinetic = false;
    const double a = norm_squared(TrialParams(1e4, 0.3), well().profile, opt);
    const double b = norm_squared(TrialParams(1e5, 0.3), well().profile, opt);
    // Slope per e-fold near 4 pi^2.
    EXPECT_NEAR((b - a) / std::log(10.0) / (4.0 * M_PI * M_PI), 1.0, 0.05);
}

TEST(Energy, ScanIsOrderedAndDeterministic) {
    EnergyOptions opt;
    opt.with_kinetic = false;
    const std::vector<double> Ls = {2e4, 3e3, 1e4};
    setenv("EFIMOV4D_THREADS", "1", 1);
    const auto serial = energy_scan(well().profile, well().pot, 0.3, 1.0, Ls, opt);
    setenv("EFIMOV4D_THREADS", "3", 1);
    const auto threaded = energy_scan(well().profile, well().pot, 0.3, 1.0, Ls, opt);
    unsetenv("EFIMOV4D_THREADS");
    ASSERT_EQ(serial.size(), 3u);
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        EXPECT_EQ(serial[i].L, Ls[i]);
        EXPECT_EQ(serial[i].energy, threaded[i].energy);
        EXPECT_EQ(serial[i].norm_sq, threaded[i].norm_sq);
    }
    EXPECT_THROW(energy_scan(well().profile, well().pot, 0.3, 1.0, {100.0}, opt), std::invalid_argument);
}
