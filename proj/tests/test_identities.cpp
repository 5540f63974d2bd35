#include <gtest/gtest.h>

#include <cmath>

#include "efimov4d/identities.hpp"

using namespace efimov4d::identities;

TEST(Identities, DefaultGridBelowTolerance) {
    const auto reps = identity_grid(default_mu_grid(), default_d_grid());
    EXPECT_EQ(reps.size(), 3u * (3u * 5u + 1u));
    for (const auto& r : reps) EXPECT_LT(r.rel_err, 1e-7) << r.name << " " << r.component << " mu=" << r.mu << " d=" << r.d;
}

TEST(Identities, AxialDerivativeConvolutionIsOddUnderSwap) {
    const auto a = conv_k0_dg(1.0, 2.0, Component::Axial, false);
    const auto b = conv_k0_dg(1.0, 2.0, Component::Axial, true);
    EXPECT_NEAR(a.numeric, -b.numeric, 1e-9 * std::abs(a.numeric));
    EXPECT_GT(a.closed_form, 0.0);
    EXPECT_LT(a.rel_err, 1e-8);
    const auto t = conv_k0_dg(1.0, 2.0, Component::Transverse);
    EXPECT_EQ(t.closed_form, 0.0);
    EXPECT_LT(std::abs(t.numeric), 1e-12);
}

TEST(Identities, ScalingInMu) {
    // conv_g_g depends on mu d only.
    const auto a = conv_g_g(0.5, 4.0);
    const auto b = conv_g_g(2.0, 1.0);
    EXPECT_NEAR(a.closed_form, b.closed_form, 1e-14);
    EXPECT_NEAR(a.numeric / b.numeric, 1.0, 1e-8);
}

TEST(Identities, FluxNormalization) {
    for (double mu : {0.5, 1.0, 2.0}) {
        const FluxReport f = green_flux_normalization(mu);
        EXPECT_LT(f.rel_err, 1e-9) << mu;
        // The raw values approach -4 pi^2 at rate r^2.
        const double target = -4.0 * M_PI * M_PI;
        EXPECT_LT(std::abs(f.value_fine - target), std::abs(f.value_coarse - target));
    }
}
