#pragma once

#include <array>
#include <optional>
#include <stdexcept>

#include "efimov4d/criticality.hpp"
#include "efimov4d/geometry.hpp"

namespace efimov4d::trialstate {

using criticality::ResonanceProfile;

class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Separation L = |shift|, Green mass mu = mu0 / L, cutoff radius rho = L^theta with theta = 4 / (4 + delta).
class TrialParams {
public:
    // Shift along the fourth axis.
    TrialParams(double L, double mu0, double delta = 1.0, double rho0 = 1.0, std::optional<double> L_min = {});
    // Arbitrary shift vector; used for derivatives in the shift parameter.
    static TrialParams from_shift(const Vec4& shift, double mu0, double delta = 1.0, double rho0 = 1.0,
                                  std::optional<double> L_min = {});

    double L() const { return L_; }
    double mu0() const { return mu0_; }
    double delta() const { return delta_; }
    double rho0() const { return rho0_; }
    double L_min() const { return L_min_; }
    double theta() const { return 4.0 / (4.0 + delta_); }
    double rho() const;
    double mu() const { return mu0_ / L_; }
    const Vec4& shift() const { return shift_; }
    Vec4 axis() const { return (1.0 / L_) * shift_; }
    Vec4 plus_center() const { return 0.5 * shift_; }
    Vec4 minus_center() const { return -0.5 * shift_; }

    static double default_L_min(double rho0);

private:
    TrialParams(const Vec4& shift, double mu0, double delta, double rho0, std::optional<double> L_min, int);
    Vec4 shift_;
    double L_, mu0_, delta_, rho0_, L_min_;
};

// mu K1(mu r) / r.
double green_g(double mu, double r);
// d/dmu of green_g = -mu K0(mu r).
double green_g_mu_derivative(double mu, double r);
// -mu^2 K2(mu |x - c|) / |x - c| times the unit vector (x - c)/|x - c|.
Vec4 green_g_grad(double mu, const Point4& x, const Point4& center);
// Radial derivative of green_g: -mu^2 K2(mu r) / r.
double green_g_radial_derivative(double mu, double r);

double cutoff_u(double rho, double r);
double cutoff_v(double rho, double r);

RegionTag classify(const TrialParams& p, const Point4& x);

// Value of the formula attached to `tag`, evaluated at x regardless of membership.
double phi_branch(const TrialParams& p, const ResonanceProfile& res, const Point4& x, RegionTag tag);
double assemble_phi(const TrialParams& p, const ResonanceProfile& res, const Point4& x);
// Sum of the two shifted Green functions.
double gamma_far(const TrialParams& p, const Point4& x);
Vec4 gamma_far_grad(const TrialParams& p, const Point4& x);

double interp_f(const TrialParams& p, const ResonanceProfile& res, const Point4& x);

// Gradient pieces of f on an annulus; all zero outside the annuli.
std::array<Vec4, 5> h_terms(const TrialParams& p, const ResonanceProfile& res, const Point4& x);
Vec4 grad_f(const TrialParams& p, const ResonanceProfile& res, const Point4& x);
Vec4 grad_phi(const TrialParams& p, const ResonanceProfile& res, const Point4& x);

// Remainder of the shift derivative of f: grad_shift f = g -+ (1/2) grad_x f on the
// Plus / Minus annulus, restricted to the (x3, x4) plane. Zero outside the annuli.
std::array<double, 2> g_func(const TrialParams& p, const ResonanceProfile& res, const Point4& x);

}  // namespace efimov4d::trialstate
