#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include <cmath>

#include "efimov4d/criticality.hpp"

using namespace efimov4d::criticality;

namespace {

double j01_squared() {
    const double j = boost::math::cyl_bessel_j_zero(0.0, 1);
    return j * j;
}

const CriticalWell& well() {
    static const CriticalWell w = critical_unit_well();
    return w;
}

}  // namespace

TEST(Criticality, UnitWellMatchesBesselZero) {
    const double lc = find_lambda_crit(RadialPotential::square_well(), {5.0, 6.5});
    EXPECT_NEAR(lc, j01_squared(), 1e-10);
    EXPECT_NEAR(lc, 5.7831859629, 1e-8);
}

TEST(Criticality, ScalingWithRadius) {
    // lambda_c(R) = j01^2 / R^2
    for (double R : {0.5, 2.0}) {
        const double lc = find_lambda_crit(RadialPotential::square_well(R), {1.0 / (R * R), 10.0 / (R * R)});
        EXPECT_NEAR(lc * R * R, j01_squared(), 1e-9);
    }
}

TEST(Criticality, MismatchSignsAroundCriticality) {
    const auto pot = RadialPotential::square_well();
    const double lc = j01_squared();
    const ShootResult below = shoot(pot, 0.9 * lc);
    EXPECT_FALSE(below.interior_node);
    EXPECT_GT(below.mismatch, 0.0);
    // Vanishing coupling: u -> 1, r u'/u + 2 -> 2.
    EXPECT_NEAR(shoot(pot, 1e-10).mismatch, 2.0, 1e-9);
    EXPECT_THROW(shoot(pot, 0.0), std::invalid_argument);
    EXPECT_TRUE(shoot(pot, 20.0).interior_node);
    EXPECT_THROW(shoot_zero_energy(pot, 20.0), std::domain_error);
}

TEST(Criticality, BracketErrors) {
    const auto pot = RadialPotential::square_well();
    EXPECT_THROW(find_lambda_crit(pot, {1.0, 2.0}), BracketError);
    EXPECT_THROW(find_lambda_crit(pot, {6.0, 7.0}), BracketError);
}

TEST(Criticality, ProfileMatchesInteriorBesselSolution) {
    // Inside the well u = J1(k r) / (r J1(k)), k = sqrt(lambda_c); outside exactly r^-2.
    const double k = std::sqrt(well().pot.coupling);
    const double norm = boost::math::cyl_bessel_j(1, k);
    for (double r : {0.05, 0.3, 0.77, 0.999}) {
        const double exact = boost::math::cyl_bessel_j(1, k * r) / (r * norm);
        EXPECT_NEAR(well().profile.value(r), exact, 1e-10) << r;
        const double dexact = (k * boost::math::cyl_bessel_j_prime(1, k * r) * r - boost::math::cyl_bessel_j(1, k * r)) /
                              (r * r * norm);
        EXPECT_NEAR(well().profile.derivative(r), dexact, 1e-8) << r;
    }
    for (double r : {1.0, 1.5, 10.0}) {
        EXPECT_NEAR(well().profile.value(r), 1.0 / (r * r), 1e-14);
        EXPECT_NEAR(well().profile.derivative(r), -2.0 / (r * r * r), 1e-12);
        EXPECT_EQ(well().profile.epsilon1(r), 0.0);
    }
}

TEST(Criticality, ZeroEnergyBalance) {
    const ZeroEnergyBalance b = zero_energy_balance(well().profile, well().pot);
    EXPECT_GT(b.grad_sq, 0.0);
    EXPECT_LT(b.potential, 0.0);
    EXPECT_LT(std::abs(b.residual) / b.grad_sq, 1e-10);
}

TEST(Criticality, C0Identity) { EXPECT_LT(std::abs(c0_identity_residual(well().profile, well().pot)), 1e-10); }

TEST(Criticality, RejectsNonCriticalCoupling) {
    EXPECT_THROW(resonance_profile(RadialPotential::square_well(), 5.7), ConsistencyError);
}

TEST(Criticality, InteriorIntegralExactForPolynomials) {
    // \int_0^1 r^3 dr through the tabulated profile machinery ignores u.
    const double v = well().profile.interior_integral([](double r, double, double) { return r * r * r; });
    EXPECT_NEAR(v, 0.25, 1e-15);
}
