#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace efimov4d::criticality {

// V(r) = coupling * profile(r), compactly supported in [0, support_radius].
struct RadialPotential {
    std::function<double(double)> profile;
    double support_radius = 1.0;
    double short_range_R = 1.0;
    double short_range_delta = 1.0;
    double coupling = 0.0;
    // Radii inside the support where the profile jumps; the ODE solver stops there.
    std::vector<double> breakpoints;

    // Profile -1 on [0, radius), 0 beyond: an attractive well of depth `coupling`.
    static RadialPotential square_well(double radius = 1.0, double coupling = 0.0, double delta = 1.0);

    double profile_at(double r) const { return r > support_radius ? 0.0 : profile(r); }
    double value(double r) const { return coupling * profile_at(r); }
    RadialPotential with_coupling(double lambda) const {
        RadialPotential p = *this;
        p.coupling = lambda;
        return p;
    }
};

struct ShootResult {
    double mismatch;     // r u'/u + 2 at the support radius
    bool interior_node;  // u changed sign before the support radius
};

class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Integrates u'' + (3/r) u' - lambda profile(r) u = 0 with u(0) = 1, u'(0) = 0.
ShootResult shoot(const RadialPotential& pot, double lambda);
// Mismatch only; throws std::domain_error when the solution has an interior node.
double shoot_zero_energy(const RadialPotential& pot, double lambda);

// Bisection on the mismatch. A solution with an interior node counts as supercritical.
double find_lambda_crit(const RadialPotential& pot, std::pair<double, double> bracket, double tol = 1e-12);

struct GridSpec {
    std::size_t points = 4001;     // nodes on [0, support_radius]
    double critical_threshold = 1e-6;  // largest accepted |mismatch|
};

// Zero-energy solution normalized to an exact r^-2 tail.
class ResonanceProfile {
public:
    ResonanceProfile(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                     std::vector<double> d2u_left, std::vector<double> d2u_right, double matching_radius);

    double value(double r) const;
    double derivative(double r) const;
    double tail_constant() const { return 1.0; }
    double matching_radius() const { return rho0_; }
    // Deviation from the pure tail; identically zero outside the support.
    double epsilon1(double r) const;
    double epsilon2(double r) const;

    const std::vector<double>& grid() const { return r_; }
    const std::vector<double>& values() const { return u_; }
    const std::vector<double>& derivatives() const { return du_; }

    // \int_0^{rho0} F(r, u(r), u'(r)) dr, exact for the piecewise cubic interpolant up to degree 9 in r.
    double interior_integral(const std::function<double(double, double, double)>& F) const;

private:
    std::size_t locate(double r) const;
    std::vector<double> r_, u_, du_, d2l_, d2r_;
    double rho0_;
};

ResonanceProfile resonance_profile(const RadialPotential& pot, double lambda_c, const GridSpec& spec = {});

// c0 + <V, phi0> / (4 pi^2), with V taken at pot.coupling.
double c0_identity_residual(const ResonanceProfile& profile, const RadialPotential& pot);

struct ZeroEnergyBalance {
    double grad_sq;      // ||grad phi0||^2, interior quadrature plus the exact tail
    double potential;    // \int V phi0^2
    double residual;     // grad_sq + potential
};
ZeroEnergyBalance zero_energy_balance(const ResonanceProfile& profile, const RadialPotential& pot);

// Unit square well tuned to its critical coupling, with its resonance profile.
struct CriticalWell {
    RadialPotential pot;  // coupling = lambda_c
    ResonanceProfile profile;
};
CriticalWell critical_unit_well(const GridSpec& spec = {});

}  // namespace efimov4d::criticality
