#include <gtest/gtest.h>

#include <cmath>

#include "efimov4d/criticality.hpp"
#include "efimov4d/trialstate.hpp"

using namespace efimov4d;
using namespace efimov4d::trialstate;

namespace {

const criticality::CriticalWell& well() {
    static const criticality::CriticalWell w = criticality::critical_unit_well();
    return w;
}

// Point at distance r from the plus center, polar angle ang from the axis, in the (x3, x4) plane.
Point4 near_plus(const TrialParams& p, double r, double ang) {
    return Point4{Vec4{0.0, 0.0, r * std::sin(ang), 0.5 * p.L() + r * std::cos(ang)}};
}

Vec4 fd_gradient(const std::function<double(const Point4&)>& f, const Point4& x, double h) {
    Vec4 g{};
    for (int i = 0; i < 4; ++i) {
        Point4 a = x, b = x;
        a.x[i] += h;
        b.x[i] -= h;
        g[i] = (f(a) - f(b)) / (2.0 * h);
    }
    return g;
}

}  // namespace

TEST(TrialState, ParameterValidation) {
    EXPECT_THROW(TrialParams(5.0, 0.3), std::invalid_argument);         // below L_min
    EXPECT_THROW(TrialParams(500.0, 0.3, 1.0), std::invalid_argument);  // annuli overlap at delta = 1
    EXPECT_THROW(TrialParams(1e4, -0.3), std::invalid_argument);
    EXPECT_NO_THROW(TrialParams(100.0, 0.3, 4.0));
    const TrialParams p(1e4, 0.3, 1.0);
    EXPECT_NEAR(p.theta(), 0.8, 1e-15);
    EXPECT_NEAR(p.rho(), std::pow(1e4, 0.8), 1e-9);
    EXPECT_NEAR(p.mu(), 3e-5, 1e-18);
    EXPECT_EQ(p.plus_center()[3], 5e3);
    const TrialParams q = TrialParams::from_shift(Vec4{0.0, 0.0, 6e3, 8e3}, 0.3);
    EXPECT_NEAR(q.L(), 1e4, 1e-9);
    EXPECT_NEAR(q.axis()[2], 0.6, 1e-15);
}

TEST(TrialState, Cutoffs) {
    EXPECT_EQ(cutoff_u(10.0, 5.0), 1.0);
    EXPECT_EQ(cutoff_u(10.0, 25.0), 0.0);
    EXPECT_NEAR(cutoff_u(10.0, 15.0), 0.5, 1e-15);
    EXPECT_NEAR(cutoff_u(10.0, 12.0) + cutoff_v(10.0, 12.0), 1.0, 1e-15);
}

TEST(TrialState, GreenFunctionPieces) {
    const double mu = 0.7, r = 1.3, h = 1e-6;
    EXPECT_NEAR(green_g_radial_derivative(mu, r), (green_g(mu, r + h) - green_g(mu, r - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(green_g_mu_derivative(mu, r), (green_g(mu + h, r) - green_g(mu - h, r)) / (2 * h), 1e-8);
    EXPECT_THROW(green_g(mu, 0.0), SingularityError);
    // Small-distance behaviour r^-2.
    EXPECT_NEAR(green_g(1e-3, 1e-2) * 1e-4, 1.0, 1e-3);
}

TEST(TrialState, ClassifyRegions) {
    const TrialParams p(1e4, 0.3);
    EXPECT_EQ(classify(p, near_plus(p, 0.5 * p.rho(), 0.3)), RegionTag::BallPlus);
    EXPECT_EQ(classify(p, near_plus(p, 1.5 * p.rho(), 2.0)), RegionTag::AnnulusPlus);
    EXPECT_EQ(classify(p, near_plus(p, 3.0 * p.rho(), 1.0)), RegionTag::Exterior);
    const Point4 m{Vec4{0.0, 0.0, 0.0, -0.5 * p.L() + 1.2 * p.rho()}};
    EXPECT_EQ(classify(p, m), RegionTag::AnnulusMinus);
}

TEST(TrialState, PhiContinuousAcrossSeams) {
    const TrialParams p(1e4, 0.3);
    for (double seam : {p.rho(), 2.0 * p.rho()}) {
        for (double ang : {0.2, 1.5, 2.9}) {
            const double in = assemble_phi(p, well().profile, near_plus(p, seam * (1 - 1e-10), ang));
            const double out = assemble_phi(p, well().profile, near_plus(p, seam * (1 + 1e-10), ang));
            EXPECT_NEAR(in / out, 1.0, 1e-8) << seam << " " << ang;
        }
    }
    // f vanishes outside the annuli.
    EXPECT_EQ(interp_f(p, well().profile, near_plus(p, 3.0 * p.rho(), 1.0)), 0.0);
}

TEST(TrialState, GradientMatchesFiniteDifferences) {
    const TrialParams p(1e4, 0.3);
    auto phi = [&p](const Point4& x) { return assemble_phi(p, well().profile, x); };
    for (double r : {0.4, 1.3, 1.7, 2.6}) {
        for (double ang : {0.4, 2.2}) {
            const Point4 x = near_plus(p, r * p.rho(), ang);
            const Vec4 g = grad_phi(p, well().profile, x);
            const Vec4 fd = fd_gradient(phi, x, 1e-4 * p.rho());
            EXPECT_LT(norm(g - fd), 1e-6 * norm(g)) << r << " " << ang;
        }
    }
}

TEST(TrialState, InterpolationGradientPieces) {
    const TrialParams p(1e4, 0.3);
    auto f = [&p](const Point4& x) { return interp_f(p, well().profile, x); };
    const Point4 x = near_plus(p, 1.4 * p.rho(), 1.1);
    const auto h = h_terms(p, well().profile, x);
    Vec4 sum{};
    for (const auto& v : h) sum = sum + v;
    const Vec4 g = grad_f(p, well().profile, x);
    EXPECT_LT(norm(sum - g), 1e-12 * norm(g));
    EXPECT_LT(norm(g - fd_gradient(f, x, 1e-4 * p.rho())), 1e-6 * norm(g));
}

TEST(TrialState, ShiftDerivativeOfInterpolation) {
    // grad_shift f = g - (sigma/2) grad_x f, sigma = +1 on the plus annulus and -1 on the minus one.
    const TrialParams p(1e4, 0.3);
    const Vec4 shift = p.shift();
    for (int sigma : {1, -1}) {
        for (double ang : {0.5, 2.5}) {
            Point4 x = near_plus(p, 1.5 * p.rho(), ang);
            if (sigma < 0) x.x[3] -= p.L();
            auto f_at = [&](const Vec4& l) {
                return interp_f(TrialParams::from_shift(l, p.mu0()), well().profile, x);
            };
            const double h = 1e-3 * p.rho();
            double fd[2];
            for (int k = 0; k < 2; ++k) {
                Vec4 a = shift, b = shift;
                a[2 + k] += h;
                b[2 + k] -= h;
                fd[k] = (f_at(a) - f_at(b)) / (2.0 * h);
            }
            const auto g = g_func(p, well().profile, x);
            const Vec4 gx = grad_f(p, well().profile, x);
            for (int k = 0; k < 2; ++k) {
                const double expect = g[k] - 0.5 * sigma * gx[2 + k];
                EXPECT_NEAR(fd[k], expect, 1e-6 * (std::abs(expect) + std::abs(gx[2 + k]))) << sigma << " " << k;
            }
        }
    }
}

TEST(TrialState, FarFieldIsSumOfGreenFunctions) {
    const TrialParams p(1e4, 0.3);
    const Point4 x{Vec4{5e3, 0.0, 0.0, 1e3}};
    ASSERT_EQ(classify(p, x), RegionTag::Exterior);
    const double a = green_g(p.mu(), norm(x.x - p.plus_center()));
    const double b = green_g(p.mu(), norm(x.x - p.minus_center()));
    EXPECT_NEAR(gamma_far(p, x), a + b, 1e-15 * (a + b));
    EXPECT_NEAR(assemble_phi(p, well().profile, x), a + b, 1e-15 * (a + b));
}
