#pragma once

#include <string>
#include <vector>

#include "efimov4d/quadrature.hpp"

namespace efimov4d::identities {

enum class Component { Axial, Transverse };

struct IdentityReport {
    std::string name;
    double closed_form = 0.0;
    double numeric = 0.0;
    double rel_err = 0.0;
    double mu = 0.0;
    double d = 0.0;
    std::string component;  // "axial", "transverse" or empty
};

inline constexpr double kIdentityTol = 1e-9;

// a and b sit on the axis with b - a = d * axis (unless `swapped`).
IdentityReport conv_k0_k0(double mu, double d, double tol = kIdentityTol);
IdentityReport conv_g_g(double mu, double d, double tol = kIdentityTol);
IdentityReport conv_k0_dg(double mu, double d, Component i = Component::Axial, bool swapped = false,
                          double tol = kIdentityTol);
IdentityReport conv_dg_dg(double mu, double d, Component i, double tol = kIdentityTol);
IdentityReport l2_k0(double mu, double tol = kIdentityTol);

// Outward flux of grad G over the sphere of radius r plus mu^2 times the integral of G over the ball.
double green_flux_balance(double mu, double r);

struct FluxReport {
    double r_coarse, r_fine;
    double value_coarse, value_fine;
    double extrapolated;
    double rel_err;  // against -4 pi^2
};
// Evaluates at r = 1e-2/mu and 1e-3/mu and removes the O(r^2) term.
FluxReport green_flux_normalization(double mu);

// Every identity at every (mu, d) pair; dg_dg in both components.
std::vector<IdentityReport> identity_grid(const std::vector<double>& mus, const std::vector<double>& ds,
                                          double tol = kIdentityTol);
std::vector<double> default_mu_grid();
std::vector<double> default_d_grid();
std::vector<double> fine_mu_grid();
std::vector<double> fine_d_grid();

}  // namespace efimov4d::identities
