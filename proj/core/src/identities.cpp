#include "efimov4d/identities.hpp"

#include <algorithm>
#include <cmath>

#include "efimov4d/geometry.hpp"
#include "efimov4d/specfun.hpp"

namespace efimov4d::identities {
namespace {

using quadrature::AxisymField;
using quadrature::AxisymRegion;
using specfun::BesselOrder;

double k0(double z) { return specfun::bessel_k(BesselOrder(0), z); }
double k1(double z) { return specfun::bessel_k(BesselOrder(1), z); }
double k2(double z) { return specfun::bessel_k(BesselOrder(2), z); }

// Radial derivative of G_mu.
double dG(double mu, double r) { return -mu * mu * k2(mu * r) / r; }

IdentityReport finish(std::string name, double closed, double numeric, double mu, double d, std::string comp) {
    IdentityReport r;
    r.name = std::move(name);
    r.closed_form = closed;
    r.numeric = numeric;
    r.rel_err = std::abs(closed - numeric) / std::max(std::abs(closed), 1e-300);
    r.mu = mu;
    r.d = d;
    r.component = std::move(comp);
    return r;
}

// b at +d/2 (center index 0), a at -d/2 (center index 1).
double two_center(double mu, double d, const std::function<double(double, double, double, double, double)>& F,
                  double tol) {
    const double c = 0.5 * d;
    AxisymField f;
    f.centers = {c, -c};
    f.decay_scale = 1.0 / mu;
    // F(wb, wa, s, rb, ra): axial offsets and distances to b and a.
    f.evaluator = [&F, c](double w, double s) {
        const double wb = w - c, wa = w + c;
        return F(wb, wa, s, std::hypot(wb, s), std::hypot(wa, s));
    };
    quadrature::Options opt;
    opt.rel_tol = tol;
    return quadrature::axisym_integrate(f, AxisymRegion::full(), c + 40.0 / mu, opt).value;
}

const char* comp_name(Component i) { return i == Component::Axial ? "axial" : "transverse"; }

}  // namespace

IdentityReport conv_k0_k0(double mu, double d, double tol) {
    const double closed = kSphere3 * d * d / (6.0 * mu * mu) * k2(mu * d);
    const double num = two_center(mu, d, [mu](double, double, double, double rb, double ra) {
        return k0(mu * ra) * k0(mu * rb);
    }, tol);
    return finish("conv_k0_k0", closed, num, mu, d, "");
}

IdentityReport conv_g_g(double mu, double d, double tol) {
    const double closed = kSphere3 * k0(mu * d);
    const double num = two_center(mu, d, [mu](double, double, double, double rb, double ra) {
        return mu * k1(mu * ra) / ra * (mu * k1(mu * rb) / rb);
    }, tol);
    return finish("conv_g_g", closed, num, mu, d, "");
}

IdentityReport conv_k0_dg(double mu, double d, Component i, bool swapped, double tol) {
    // b_i - a_i is +d on the axis, -d when a and b trade places, 0 transversally.
    const double sign = swapped ? -1.0 : 1.0;
    const double closed = i == Component::Axial ? kPi * kPi * k0(mu * d) * sign * d : 0.0;
    double num = 0.0;
    if (i == Component::Axial) {
        num = two_center(mu, d, [mu, sign](double wb, double wa, double, double rb, double ra) {
            // Swapping a and b mirrors the configuration through w = 0.
            if (sign > 0.0) return k0(mu * ra) * dG(mu, rb) * wb / rb;
            return k0(mu * rb) * dG(mu, ra) * wa / ra;
        }, tol);
    } else {
        // The transverse derivative is odd under reflection across the axis; its
        // average over the transverse sphere vanishes identically.
        num = two_center(mu, d, [](double, double, double, double, double) { return 0.0; }, tol);
    }
    IdentityReport r = finish("conv_k0_dg", closed, num, mu, d, comp_name(i));
    if (closed == 0.0) r.rel_err = std::abs(num);
    return r;
}

IdentityReport conv_dg_dg(double mu, double d, Component i, double tol) {
    const double diff2 = i == Component::Axial ? d * d : 0.0;
    const double closed = kSphere3 * (mu * k1(mu * d) / d - mu * mu * k2(mu * d) * diff2 / (d * d));
    const double num = two_center(mu, d, [mu, i](double wb, double wa, double s, double rb, double ra) {
        const double ga = dG(mu, ra) / ra, gb = dG(mu, rb) / rb;
        // Transverse component squared averages to s^2/3 over the transverse sphere.
        const double comp = i == Component::Axial ? wa * wb : s * s / 3.0;
        return ga * gb * comp;
    }, tol);
    return finish("conv_dg_dg", closed, num, mu, d, comp_name(i));
}

IdentityReport l2_k0(double mu, double tol) {
    const double closed = kSphere3 / (3.0 * std::pow(mu, 4));
    quadrature::Options opt;
    opt.rel_tol = tol;
    const auto q = quadrature::radial_integrate([mu](double r) {
        const double v = k0(mu * r);
        return v * v;
    }, {0.0, 1.0 / mu, 40.0 / mu}, opt);
    // The same integral through the two-dimensional path, as a cross-check of the reduction.
    AxisymField f;
    f.centers = {0.0};
    f.decay_scale = 1.0 / mu;
    f.evaluator = [mu](double w, double s) {
        const double v = k0(mu * std::hypot(w, s));
        return v * v;
    };
    const auto q2 = quadrature::axisym_integrate(f, AxisymRegion::full(), 40.0 / mu, opt);
    IdentityReport r = finish("l2_k0", closed, q2.value, mu, 0.0, "");
    r.rel_err = std::max(r.rel_err, std::abs(q.value - closed) / closed);
    return r;
}

double green_flux_balance(double mu, double r) {
    const double flux = kSphere3 * r * r * r * dG(mu, r);
    quadrature::Options opt;
    opt.rel_tol = 1e-12;
    const auto q = quadrature::radial_integrate([mu](double t) { return mu * k1(mu * t) / t; }, {0.0, r}, opt);
    return flux + mu * mu * q.value;
}

FluxReport green_flux_normalization(double mu) {
    FluxReport f;
    f.r_coarse = 1e-2 / mu;
    f.r_fine = 1e-3 / mu;
    f.value_coarse = green_flux_balance(mu, f.r_coarse);
    f.value_fine = green_flux_balance(mu, f.r_fine);
    const double a = f.r_coarse * f.r_coarse, b = f.r_fine * f.r_fine;
    f.extrapolated = f.value_fine + (f.value_fine - f.value_coarse) * b / (a - b);
    const double target = -4.0 * kPi * kPi;
    f.rel_err = std::abs(f.extrapolated - target) / std::abs(target);
    return f;
}

std::vector<IdentityReport> identity_grid(const std::vector<double>& mus, const std::vector<double>& ds,
                                          double tol) {
    std::vector<IdentityReport> out;
    for (double mu : mus) {
        for (double d : ds) {
            out.push_back(conv_k0_k0(mu, d, tol));
            out.push_back(conv_g_g(mu, d, tol));
            out.push_back(conv_k0_dg(mu, d, Component::Axial, false, tol));
            out.push_back(conv_dg_dg(mu, d, Component::Axial, tol));
            out.push_back(conv_dg_dg(mu, d, Component::Transverse, tol));
        }
        out.push_back(l2_k0(mu, tol));
    }
    return out;
}

std::vector<double> default_mu_grid() { return {0.5, 1.0, 2.0}; }
std::vector<double> default_d_grid() { return {1.0, 2.0, 5.0}; }
std::vector<double> fine_mu_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }
std::vector<double> fine_d_grid() { return {0.5, 1.0, 2.0, 3.0, 5.0, 8.0}; }

}  // namespace efimov4d::identities
