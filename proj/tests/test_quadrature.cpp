#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "efimov4d/quadrature.hpp"
#include "efimov4d/specfun.hpp"

using namespace efimov4d;
using namespace efimov4d::quadrature;

TEST(Quadrature, KronrodExactForHighDegree) {
    const QuadResult r = gauss_kronrod15([](double x) { return std::pow(x, 20); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, 1.0 / 21.0, 1e-15);
}

TEST(Quadrature, EndpointSingularity) {
    Options o;
    o.rel_tol = 1e-11;
    const QuadResult r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, o);
    EXPECT_NEAR(r.value, 2.0, 1e-9);
    EXPECT_GT(r.cells_used, 1u);
}

TEST(Quadrature, Deterministic) {
    auto f = [](double x) { return std::sin(30.0 * x) * std::exp(-x); };
    const double a = integrate(f, 0.0, 5.0).value;
    const double b = integrate(f, 0.0, 5.0).value;
    EXPECT_EQ(a, b);
}

TEST(Quadrature, BudgetExceededCarriesEstimate) {
    Options o;
    o.max_cells = 8;
    o.rel_tol = 1e-14;
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, o);
        FAIL() << "expected BudgetExceeded";
    } catch (const BudgetExceeded& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate().value));
        EXPECT_GT(e.best_estimate().error_estimate, 0.0);
    }
}

TEST(Quadrature, GaussLegendrePanels) {
    // n points integrate degree 2n - 1 exactly.
    for (int n = 1; n <= 8; ++n) {
        const int deg = 2 * n - 1;
        const double v = gauss_legendre_panels([deg](double x) { return std::pow(x, deg); }, {0.0, 0.5, 2.0}, n);
        EXPECT_NEAR(v, std::pow(2.0, deg + 1) / (deg + 1), 1e-12 * std::pow(2.0, deg + 1)) << n;
    }
    EXPECT_THROW(gauss_legendre_panels([](double) { return 1.0; }, {0.0, 1.0}, 9), std::invalid_argument);
}

TEST(Quadrature, RadialGaussian) {
    Options o;
    o.rel_tol = 1e-12;
    // \int_{R^4} exp(-|x|^2) dx = pi^2
    const QuadResult r = radial_integrate([](double x) { return std::exp(-x * x); }, {0.0, 1.0, 12.0}, o);
    EXPECT_NEAR(r.value, kPi * kPi, 1e-11);
}

TEST(Quadrature, AxisymGaussianAndBall) {
    AxisymField f;
    f.evaluator = [](double w, double s) { return std::exp(-(w * w + s * s)); };
    f.centers = {0.0};
    Options o;
    o.rel_tol = 1e-11;
    EXPECT_NEAR(axisym_integrate(f, AxisymRegion::full(), 12.0, o).value, kPi * kPi, 1e-9);
    AxisymField one;
    one.evaluator = [](double, double) { return 1.0; };
    one.centers = {0.0};
    EXPECT_NEAR(axisym_integrate(one, AxisymRegion::shell(0, 0.5, 2.0), 2.0, o).value,
                kPi * kPi / 2.0 * (16.0 - 0.0625), 1e-9);
}

TEST(Quadrature, TwoCenterGreenConvolutionProperty) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mu_d(0.4, 2.0), d_d(0.5, 5.0);
    for (int k = 0; k < 4; ++k) {
        const double mu = mu_d(rng), d = d_d(rng), c = 0.5 * d;
        AxisymField f;
        f.centers = {c, -c};
        f.decay_scale = 1.0 / mu;
        f.evaluator = [mu, c](double w, double s) {
            const double ra = std::hypot(w - c, s), rb = std::hypot(w + c, s);
            return mu * specfun::bessel_k(specfun::BesselOrder(1), mu * ra) / ra * mu *
                   specfun::bessel_k(specfun::BesselOrder(1), mu * rb) / rb;
        };
        Options o;
        o.rel_tol = 1e-9;
        const double num = axisym_integrate(f, AxisymRegion::full(), c + 40.0 / mu, o).value;
        const double closed = 2.0 * kPi * kPi * specfun::bessel_k(specfun::BesselOrder(0), mu * d);
        EXPECT_NEAR(num / closed, 1.0, 1e-8) << "mu=" << mu << " d=" << d;
    }
}

TEST(Quadrature, RegionsPartitionSpace) {
    const double c = 3.0, R = 1.5;
    AxisymField f;
    f.centers = {c, -c};
    f.evaluator = [](double w, double s) { return std::exp(-0.3 * (w * w + s * s)) * (1.0 + 0.1 * w); };
    Options o;
    o.rel_tol = 1e-10;
    const double T = 40.0;
    const double full = axisym_integrate(f, AxisymRegion::full(), T, o).value;
    const double parts = axisym_integrate(f, AxisymRegion::shell(0, 0.0, R), T, o).value +
                         axisym_integrate(f, AxisymRegion::shell(1, 0.0, R), T, o).value +
                         axisym_integrate(f, AxisymRegion::outside(R), T, o).value;
    EXPECT_NEAR(parts / full, 1.0, 1e-8);
}

TEST(Quadrature, RejectsBadRegions) {
    AxisymField f;
    f.evaluator = [](double, double) { return 1.0; };
    f.centers = {1.0, -1.0};
    EXPECT_THROW(axisym_integrate(f, AxisymRegion::shell(0, 0.0, 2.0), 5.0), std::invalid_argument);
    f.centers = {1.0, 2.0};
    EXPECT_THROW(axisym_integrate(f, AxisymRegion::full(), 5.0), std::invalid_argument);
}
