#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>

#include "efimov4d/specfun.hpp"

using namespace efimov4d::specfun;

namespace {

double boost_k(int nu, double z) { return boost::math::cyl_bessel_k(nu, z); }

// K_nu(z) = \int_0^inf exp(-z cosh t) cosh(nu t) dt, by the trapezoid rule (spectrally accurate here).
double integral_k(int nu, double z) {
    const double h = 1.0 / 64.0;
    double s = 0.5 * std::exp(-z);
    for (int i = 1; i < 4000; ++i) {
        const double t = i * h;
        const double v = std::exp(-z * std::cosh(t)) * std::cosh(nu * t);
        s += v;
        if (v < 1e-300) break;
    }
    return s * h;
}

}  // namespace

TEST(Specfun, MatchesBoostOnWideRange) {
    for (int i = 0; i <= 400; ++i) {
        const double z = 1e-6 * std::pow(7e8, i / 400.0);
        for (int nu = 0; nu <= 3; ++nu) {
            const double ref = boost_k(nu, z);
            if (ref == 0.0) continue;
            EXPECT_NEAR(bessel_k(BesselOrder(nu), z) / ref, 1.0, 1e-13) << "nu=" << nu << " z=" << z;
        }
    }
}

TEST(Specfun, MatchesIntegralRepresentation) {
    for (double z : {0.05, 0.5, 1.0, 2.0, 2.0000001, 7.5, 30.0}) {
        for (int nu = 0; nu <= 3; ++nu) {
            EXPECT_NEAR(bessel_k(BesselOrder(nu), z) / integral_k(nu, z), 1.0, 1e-12) << nu << " " << z;
        }
    }
}

TEST(Specfun, KnownValue) { EXPECT_NEAR(bessel_k(BesselOrder(0), 1.0), 0.42102443824070833, 1e-16); }

TEST(Specfun, SeamIsContinuous) {
    for (int nu = 0; nu <= 3; ++nu) {
        const double a = bessel_k(BesselOrder(nu), std::nextafter(2.0, 0.0));
        const double b = bessel_k(BesselOrder(nu), std::nextafter(2.0, 3.0));
        EXPECT_NEAR(a / b, 1.0, 1e-14);
    }
}

TEST(Specfun, ScaledAndUnderflow) {
    for (double z : {0.1, 10.0, 100.0}) {
        EXPECT_NEAR(bessel_k_scaled(BesselOrder(1), z), std::exp(z) * boost_k(1, z), 1e-13 * std::exp(z) * boost_k(1, z));
    }
    const BesselValue v = bessel_k_checked(BesselOrder(0), 800.0);
    EXPECT_TRUE(v.underflow);
    EXPECT_EQ(v.value, 0.0);
    EXPECT_GT(bessel_k_scaled(BesselOrder(0), 800.0), 0.0);
    EXPECT_FALSE(bessel_k_checked(BesselOrder(0), 10.0).underflow);
}

TEST(Specfun, DomainErrors) {
    EXPECT_THROW(BesselOrder(4), std::domain_error);
    EXPECT_THROW(BesselOrder(-1), std::domain_error);
    EXPECT_THROW(bessel_k(BesselOrder(0), 0.0), std::domain_error);
    EXPECT_THROW(bessel_k(BesselOrder(0), -1.0), std::domain_error);
    EXPECT_THROW(small_z_reference(BesselOrder(0), 0.1, 2), NotImplemented);
    EXPECT_THROW(small_z_reference(BesselOrder(0), 1.5), std::exception);
}

TEST(Specfun, AllOrdersAgreeWithSingle) {
    for (double z : {0.01, 1.0, 3.0, 40.0}) {
        const BesselSet s = bessel_k_all(z);
        EXPECT_DOUBLE_EQ(s.k0, bessel_k(BesselOrder(0), z));
        EXPECT_DOUBLE_EQ(s.k1, bessel_k(BesselOrder(1), z));
        EXPECT_DOUBLE_EQ(s.k2, bessel_k(BesselOrder(2), z));
        EXPECT_DOUBLE_EQ(s.k3, bessel_k(BesselOrder(3), z));
    }
}

TEST(Specfun, SmallArgumentExpansionOrders) {
    // Leading terms: K0 ~ -log(z/2), K1 ~ 1/z, K2 ~ 2/z^2, K3 ~ 8/z^3. The constant -gamma in K0 is the correction.
    const double z = 1e-3;
    EXPECT_NEAR(small_z_reference(BesselOrder(0), z, ExpansionOrder::Leading), -std::log(z / 2), 1e-14);
    EXPECT_NEAR(small_z_reference(BesselOrder(0), z, ExpansionOrder::Full), -std::log(z / 2) - kEulerGamma, 1e-14);
    EXPECT_NEAR(small_z_reference(BesselOrder(1), z, ExpansionOrder::Leading), 1.0 / z, 1e-9);
    EXPECT_NEAR(small_z_reference(BesselOrder(2), z, ExpansionOrder::Leading), 2.0 / (z * z), 1e-6);
    EXPECT_NEAR(small_z_reference(BesselOrder(3), z, ExpansionOrder::Leading), 8.0 / (z * z * z), 1e-3);
    // The full expansion shrinks the error by a power of z.
    for (double zz : {1e-3, 1e-2, 1e-1}) {
        for (int nu = 0; nu <= 3; ++nu) {
            const double exact = boost_k(nu, zz);
            const double lead = std::abs(small_z_reference(BesselOrder(nu), zz, 0) - exact);
            const double full = std::abs(small_z_reference(BesselOrder(nu), zz, 1) - exact);
            EXPECT_LT(full, lead) << nu << " " << zz;
            EXPECT_LE(full, 5.0 * zz * zz * std::abs(std::log(zz)) * std::pow(zz, nu >= 2 ? -nu : 0));
        }
    }
}

TEST(Specfun, CombinationsAgreeWithDirectEvaluation) {
    for (double z : {0.5, 1.0, 1.9, 2.5, 6.0}) {
        const double k0 = boost_k(0, z), k1 = boost_k(1, z), k2 = boost_k(2, z), k3 = boost_k(3, z);
        EXPECT_NEAR(bessel_combo(BesselCombo::K0K2_minus_K1sq, z), 0.5 * z * z * (k0 * k2 - k1 * k1), 1e-12);
        EXPECT_NEAR(bessel_combo(BesselCombo::K1K3_minus_K2sq, z), 0.5 * z * z * (k1 * k3 - k2 * k2), 1e-11);
        EXPECT_NEAR(bessel_combo(BesselCombo::one_minus_zK1_times_K2, z), (1.0 - z * k1) * k2, 1e-12 * k2);
        EXPECT_NEAR(bessel_combo(BesselCombo::two_minus_z2K2_times_K2, z), (2.0 - z * z * k2) * k2, 1e-12 * k2);
    }
    // Near zero the combination keeps relative accuracy where direct subtraction would not.
    const double z = 1e-4;
    // (1 - z K1) K2 -> log(2/z) - gamma + 1/2
    const double expected = std::log(2.0 / z) - kEulerGamma + 0.5;
    EXPECT_NEAR(bessel_combo(BesselCombo::one_minus_zK1_times_K2, z), expected, 1e-4);
    EXPECT_NEAR(bessel_combo(BesselCombo::two_minus_z2K2_times_K2, 1e-4), 1.0, 1e-6);
}

TEST(Specfun, SquareAntiderivativeDifferentiates) {
    for (int nu = 1; nu <= 2; ++nu) {
        for (double z : {0.3, 1.0, 4.0}) {
            const double h = 1e-5 * z;
            const double d = (k_square_antiderivative(BesselOrder(nu), z + h) -
                              k_square_antiderivative(BesselOrder(nu), z - h)) / (2 * h);
            const double k = boost_k(nu, z);
            EXPECT_NEAR(d / (z * k * k), 1.0, 1e-7);
        }
    }
    EXPECT_THROW(k_square_antiderivative(BesselOrder(0), 1.0), std::exception);
}
