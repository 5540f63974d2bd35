#include "efimov4d/trialstate.hpp"

#include <algorithm>
#include <cmath>

#include "efimov4d/specfun.hpp"

namespace efimov4d::trialstate {

using specfun::BesselOrder;

TrialParams::TrialParams(double L, double mu0, double delta, double rho0, std::optional<double> L_min)
    : TrialParams(Vec4{0.0, 0.0, 0.0, L}, mu0, delta, rho0, L_min, 0) {}

TrialParams TrialParams::from_shift(const Vec4& shift, double mu0, double delta, double rho0,
                                    std::optional<double> L_min) {
    return TrialParams(shift, mu0, delta, rho0, L_min, 0);
}

TrialParams::TrialParams(const Vec4& shift, double mu0, double delta, double rho0, std::optional<double> L_min, int)
    : shift_(shift), L_(norm(shift)), mu0_(mu0), delta_(delta), rho0_(rho0),
      L_min_(L_min.value_or(default_L_min(rho0))) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("TrialParams: mu0 must be positive");
    if (!(delta > 0.0)) throw std::invalid_argument("TrialParams: delta must be positive");
    if (!(rho0 > 0.0)) throw std::invalid_argument("TrialParams: rho0 must be positive");
    if (!(L_ >= L_min_)) throw std::invalid_argument("TrialParams: L below L_min");
    const double r = rho();
    if (!(2.0 * r < 0.5 * L_)) throw std::invalid_argument("TrialParams: need 2 rho < L/2 (wells overlap)");
    if (!(r > rho0)) throw std::invalid_argument("TrialParams: rho must exceed the support radius rho0");
}

double TrialParams::default_L_min(double rho0) { return 10.0 * std::max(rho0, 1.0); }

double TrialParams::rho() const { return std::pow(L_, theta()); }

double green_g(double mu, double r) {
    if (!(r > 0.0)) throw SingularityError("green_g: r must be positive");
    return mu * specfun::bessel_k(BesselOrder(1), mu * r) / r;
}

double green_g_mu_derivative(double mu, double r) {
    if (!(r > 0.0)) throw SingularityError("green_g_mu_derivative: r must be positive");
    return -mu * specfun::bessel_k(BesselOrder(0), mu * r);
}

double green_g_radial_derivative(double mu, double r) {
    if (!(r > 0.0)) throw SingularityError("green_g_radial_derivative: r must be positive");
    return -mu * mu * specfun::bessel_k(BesselOrder(2), mu * r) / r;
}

Vec4 green_g_grad(double mu, const Point4& x, const Point4& center) {
    const Vec4 d = x.x - center.x;
    const double r = norm(d);
    if (!(r > 0.0)) throw SingularityError("green_g_grad: evaluation at the center");
    return (green_g_radial_derivative(mu, r) / r) * d;
}

double cutoff_u(double rho, double r) { return std::min(1.0, std::max(0.0, 2.0 - r / rho)); }
double cutoff_v(double rho, double r) { return 1.0 - cutoff_u(rho, r); }

namespace {

struct Local {
    Vec4 y;     // x minus the plus center
    Vec4 z;     // x minus the minus center
    double ry;  // |y|
    double rz;  // |z|
};

Local local(const TrialParams& p, const Point4& x) {
    Local l;
    l.y = x.x - p.plus_center();
    l.z = x.x - p.minus_center();
    l.ry = norm(l.y);
    l.rz = norm(l.z);
    return l;
}

// Geometry seen from the well that owns an annulus point: `near` is the offset to its own
// center, `far` the offset to the other one, sigma = +1 for the plus well.
struct Owned {
    Vec4 near, far;
    double rn, rf;
    double sigma;
};

Owned owned(const Local& l, bool plus) {
    if (plus) return {l.y, l.z, l.ry, l.rz, 1.0};
    return {l.z, l.y, l.rz, l.ry, -1.0};
}

}  // namespace

RegionTag classify(const TrialParams& p, const Point4& x) {
    const Local l = local(p, x);
    const double rho = p.rho();
    if (l.ry < rho) return RegionTag::BallPlus;
    if (l.rz < rho) return RegionTag::BallMinus;
    if (l.ry <= 2.0 * rho) return RegionTag::AnnulusPlus;
    if (l.rz <= 2.0 * rho) return RegionTag::AnnulusMinus;
    return RegionTag::Exterior;
}

double gamma_far(const TrialParams& p, const Point4& x) {
    const Local l = local(p, x);
    return green_g(p.mu(), l.ry) + green_g(p.mu(), l.rz);
}

Vec4 gamma_far_grad(const TrialParams& p, const Point4& x) {
    const Point4 cp{p.plus_center()}, cm{p.minus_center()};
    return green_g_grad(p.mu(), x, cp) + green_g_grad(p.mu(), x, cm);
}

double phi_branch(const TrialParams& p, const ResonanceProfile& res, const Point4& x, RegionTag tag) {
    const Local l = local(p, x);
    const double mu = p.mu();
    switch (tag) {
        case RegionTag::BallPlus: return res.value(l.ry);
        case RegionTag::BallMinus: return res.value(l.rz);
        case RegionTag::Exterior: return green_g(mu, l.ry) + green_g(mu, l.rz);
        case RegionTag::AnnulusPlus:
        case RegionTag::AnnulusMinus: {
            const Owned o = owned(l, tag == RegionTag::AnnulusPlus);
            const double gn = green_g(mu, o.rn), gf = green_g(mu, o.rf);
            const double f = cutoff_u(p.rho(), o.rn) * (res.value(o.rn) - gn - gf);
            return gn + gf + f;
        }
    }
    return 0.0;
}

double assemble_phi(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    return phi_branch(p, res, x, classify(p, x));
}

double interp_f(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    const RegionTag tag = classify(p, x);
    if (tag != RegionTag::AnnulusPlus && tag != RegionTag::AnnulusMinus) return 0.0;
    const Owned o = owned(local(p, x), tag == RegionTag::AnnulusPlus);
    const double mu = p.mu();
    return cutoff_u(p.rho(), o.rn) * (res.value(o.rn) - green_g(mu, o.rn) - green_g(mu, o.rf));
}

std::array<Vec4, 5> h_terms(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    std::array<Vec4, 5> h{};
    const RegionTag tag = classify(p, x);
    if (tag != RegionTag::AnnulusPlus && tag != RegionTag::AnnulusMinus) return h;
    const Owned o = owned(local(p, x), tag == RegionTag::AnnulusPlus);
    const double mu = p.mu(), rho = p.rho();
    const double u = cutoff_u(rho, o.rn);
    const Vec4 nhat = (1.0 / o.rn) * o.near;
    const Vec4 fhat = (1.0 / o.rf) * o.far;
    const double gn = green_g(mu, o.rn);
    const double gf = green_g(mu, o.rf);
    const double k2n = specfun::bessel_k(BesselOrder(2), mu * o.rn);
    const double k2f = specfun::bessel_k(BesselOrder(2), mu * o.rf);
    const double rn2 = o.rn * o.rn;
    // Outer slope of the cutoff is -1/rho; the resonance tail is r^-2 plus eps1, eps2.
    h[0] = (-(1.0 / rho) * (1.0 / rn2 - gn)) * nhat;
    h[1] = ((1.0 / rho) * gf) * nhat;
    h[2] = (u * (mu * mu * k2n / o.rn - 2.0 / (rn2 * o.rn))) * nhat;
    h[3] = (u * mu * mu * k2f / o.rf) * fhat;
    h[4] = (-(1.0 / rho) * res.epsilon1(o.rn) + u * res.epsilon2(o.rn)) * nhat;
    return h;
}

Vec4 grad_f(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    const auto h = h_terms(p, res, x);
    return h[0] + h[1] + h[2] + h[3] + h[4];
}

Vec4 grad_phi(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    const RegionTag tag = classify(p, x);
    const Local l = local(p, x);
    switch (tag) {
        case RegionTag::BallPlus:
        case RegionTag::BallMinus: {
            const Vec4& d = tag == RegionTag::BallPlus ? l.y : l.z;
            const double r = tag == RegionTag::BallPlus ? l.ry : l.rz;
            if (!(r > 0.0)) throw SingularityError("grad_phi: evaluation at a well center");
            return (res.derivative(r) / r) * d;
        }
        case RegionTag::Exterior: return gamma_far_grad(p, x);
        case RegionTag::AnnulusPlus:
        case RegionTag::AnnulusMinus: return gamma_far_grad(p, x) + grad_f(p, res, x);
    }
    return {};
}

std::array<double, 2> g_func(const TrialParams& p, const ResonanceProfile& res, const Point4& x) {
    const RegionTag tag = classify(p, x);
    if (tag != RegionTag::AnnulusPlus && tag != RegionTag::AnnulusMinus) return {0.0, 0.0};
    const Owned o = owned(local(p, x), tag == RegionTag::AnnulusPlus);
    const double mu = p.mu(), rho = p.rho(), L = p.L(), theta = p.theta();
    const double u = cutoff_u(rho, o.rn);
    const double bracket = res.value(o.rn) - green_g(mu, o.rn) - green_g(mu, o.rf);
    const double k0n = specfun::bessel_k(BesselOrder(0), mu * o.rn);
    const double k0f = specfun::bessel_k(BesselOrder(0), mu * o.rf);
    // d rho / d shift = theta L^(theta-1) shift/L and d u / d rho = r / rho^2 on the annulus.
    const double along = theta * o.rn / std::pow(L, 1.0 + theta) * bracket -
                         p.mu0() / (L * L) * u * (mu * k0n + mu * k0f);
    // The far Green function moves with the opposite center: -sigma u grad G(far).
    const Vec4 gf = (green_g_radial_derivative(mu, o.rf) / o.rf) * o.far;
    const Vec4 axis = p.axis();
    Vec4 g = along * axis + (-o.sigma * u) * gf;
    return {g[2], g[3]};
}

}  // namespace efimov4d::trialstate
