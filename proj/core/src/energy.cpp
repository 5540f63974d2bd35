#include "efimov4d/energy.hpp"

#include <algorithm>
#include <cmath>

#include "efimov4d/parallel.hpp"
#include "efimov4d/specfun.hpp"

namespace efimov4d::energy {

using quadrature::AxisymField;
using quadrature::AxisymRegion;
using specfun::BesselOrder;

PaperConstants paper_constants(double mu0) {
    if (!(mu0 > 0.0)) throw std::invalid_argument("paper_constants: mu0 must be positive");
    const double pi2 = kPi * kPi;
    const double g = specfun::kEulerGamma;
    const double l2 = std::log(2.0);
    const specfun::BesselSet k = specfun::bessel_k_all(mu0);
    const double m2 = mu0 * mu0;
    PaperConstants c{};
    c.C1 = 8.0 * pi2 * m2 * (l2 - g) + 4.0 * pi2 * m2 - 16.0 * pi2 * mu0 * k.k1;
    c.C2 = 8.0 * pi2 * m2;
    c.C3 = 8.0 * pi2 * m2 * (g - l2) - 2.0 * pi2 * m2;
    c.C4 = 16.0 * pi2 * mu0 * k.k1 - 4.0 * pi2 * m2 * k.k2;
    c.C5 = (4.0 * pi2 / 3.0) * (1.0 + mu0 * k.k1 + 3.5 * m2 * k.k0);
    c.energy_coeff = c.C1 + c.C3 + c.C4;
    c.energy_coeff_closed = 2.0 * pi2 * m2 * (1.0 - 2.0 * k.k2);
    c.kinetic_coeff = c.C5 / (4.0 * pi2);
    return c;
}

namespace {

quadrature::Options quad_opts(const EnergyOptions& opt) {
    quadrature::Options o;
    o.rel_tol = opt.rel_tol;
    o.max_cells = opt.max_cells;
    return o;
}

double truncation(const TrialParams& p, const EnergyOptions& opt) {
    return 0.5 * p.L() + opt.truncation_factor / p.mu();
}

AxisymField two_well_field(const TrialParams& p, std::function<double(double, double)> f) {
    AxisymField field;
    field.evaluator = std::move(f);
    field.centers = {0.5 * p.L(), -0.5 * p.L()};
    field.known_seams = {p.rho(), 2.0 * p.rho()};
    field.decay_scale = 1.0 / p.mu();
    return field;
}

// 2 pi^2 \int_0^rho F(r) r^3 dr split at the support radius: tabulated inside, exact tail outside.
double ball_radial(const TrialParams& p, const ResonanceProfile& res, bool gradient, const EnergyOptions& opt) {
    const double rho0 = res.matching_radius();
    const double inner = kSphere3 * res.interior_integral([gradient](double r, double u, double du) {
        const double v = gradient ? du : u;
        return v * v * r * r * r;
    });
    const auto tail = quadrature::radial_integrate([&res, gradient](double r) {
        const double v = gradient ? res.derivative(r) : res.value(r);
        return v * v;
    }, {rho0, p.rho()}, quad_opts(opt));
    return inner + tail.value;
}

double potential_term(const ResonanceProfile& res, const RadialPotential& pot) {
    // Both wells carry the same resonance profile.
    return 2.0 * kSphere3 * res.interior_integral([&pot](double r, double u, double) {
        return pot.value(r) * u * u * r * r * r;
    });
}

}  // namespace

NormBreakdown norm_breakdown(const TrialParams& p, const ResonanceProfile& res, const EnergyOptions& opt) {
    NormBreakdown n;
    const auto qo = quad_opts(opt);
    const double R = truncation(p, opt);
    n.ball = ball_radial(p, res, false, opt);
    const AxisymField ann = two_well_field(p, [&](double w, double s) {
        const double v = trialstate::phi_branch(p, res, Point4::from_axisym(w, s), RegionTag::AnnulusPlus);
        return v * v;
    });
    n.annulus = quadrature::axisym_integrate(ann, AxisymRegion::from_tag(RegionTag::AnnulusPlus, p.rho()), R, qo).value;
    const AxisymField ext = two_well_field(p, [&](double w, double s) {
        const double v = trialstate::gamma_far(p, Point4::from_axisym(w, s));
        return v * v;
    });
    n.exterior = quadrature::axisym_integrate(ext, AxisymRegion::from_tag(RegionTag::Exterior, p.rho()), R, qo).value;
    n.total = 2.0 * n.ball + 2.0 * n.annulus + n.exterior;
    return n;
}

double norm_squared(const TrialParams& p, const ResonanceProfile& res, const EnergyOptions& opt) {
    return norm_breakdown(p, res, opt).total;
}

double far_field_gradient(const TrialParams& p, const EnergyOptions& opt) {
    const AxisymField ext = two_well_field(p, [&](double w, double s) {
        const Vec4 g = trialstate::gamma_far_grad(p, Point4::from_axisym(w, s));
        return dot(g, g);
    });
    return quadrature::axisym_integrate(ext, AxisymRegion::from_tag(RegionTag::Exterior, p.rho()),
                                        truncation(p, opt), quad_opts(opt))
        .value;
}

KineticReport kinetic_control_breakdown(const TrialParams& p, const EnergyOptions& opt) {
    const double mu = p.mu(), L = p.L(), c = 0.5 * L;
    const double m = mu / L;
    struct Parts {
        double single, cross;
    };
    // Derivatives of G around one center, with the transverse direction averaged over the 2-sphere
    // orthogonal to the (x3, x4) plane: the x3 component squared contributes s^2 / 3.
    auto parts = [mu, m, c](double w, double s) -> Parts {
        const double wa = w - c, wb = w + c;
        const double ra = std::hypot(wa, s), rb = std::hypot(wb, s);
        const specfun::BesselSet ka = specfun::bessel_k_all(mu * ra);
        const specfun::BesselSet kb = specfun::bessel_k_all(mu * rb);
        const double da = -mu * mu * ka.k2 / ra, db = -mu * mu * kb.k2 / rb;
        const double as = da * s / ra, aw = da * wa / ra, amu = -mu * ka.k0;
        const double bs = db * s / rb, bw = db * wb / rb, bmu = -mu * kb.k0;
        const double single = m * (aw * amu - bw * bmu) + m * m * (amu * amu + bmu * bmu);
        const double cross = -as * bs / 3.0 - aw * bw - m * (bw * amu - aw * bmu) + 2.0 * m * m * amu * bmu;
        return {single, cross};
    };
    const auto qo = quad_opts(opt);
    const double R = truncation(p, opt);
    const AxisymRegion region = AxisymRegion::outside(p.rho());
    AxisymField fs = two_well_field(p, [&](double w, double s) { return parts(w, s).single; });
    AxisymField fc = two_well_field(p, [&](double w, double s) { return parts(w, s).cross; });
    KineticReport k;
    k.single = quadrature::axisym_integrate(fs, region, R, qo).value;
    k.cross = quadrature::axisym_integrate(fc, region, R, qo).value;
    k.total = k.single + k.cross;
    return k;
}

double kinetic_control_form(const TrialParams& p, const EnergyOptions& opt) {
    return kinetic_control_breakdown(p, opt).total;
}

EnergyReport energy_form(const TrialParams& p, const ResonanceProfile& res, const RadialPotential& pot,
                         const EnergyOptions& opt) {
    EnergyReport r;
    r.L = p.L();
    r.mu0 = p.mu0();
    r.theta = p.theta();
    const auto qo = quad_opts(opt);
    const double R = truncation(p, opt);

    const NormBreakdown n = norm_breakdown(p, res, opt);
    const double ball_grad = ball_radial(p, res, true, opt);
    const AxisymField ann = two_well_field(p, [&](double w, double s) {
        const Point4 x = Point4::from_axisym(w, s);
        const Vec4 g = trialstate::gamma_far_grad(p, x) + trialstate::grad_f(p, res, x);
        return dot(g, g);
    });
    const double ann_grad =
        quadrature::axisym_integrate(ann, AxisymRegion::from_tag(RegionTag::AnnulusPlus, p.rho()), R, qo).value;
    const double ext_grad = far_field_gradient(p, opt);

    r.norm_sq = n.total;
    r.grad_sq = 2.0 * ball_grad + 2.0 * ann_grad + ext_grad;
    r.pot_term = potential_term(res, pot);
    r.energy = r.grad_sq + r.pot_term;
    r.rayleigh = r.energy / r.norm_sq;
    r.ball_balance = r.pot_term + 2.0 * ball_grad;
    r.per_region[RegionTag::BallPlus] = {n.ball, ball_grad};
    r.per_region[RegionTag::BallMinus] = {n.ball, ball_grad};
    r.per_region[RegionTag::AnnulusPlus] = {n.annulus, ann_grad};
    r.per_region[RegionTag::AnnulusMinus] = {n.annulus, ann_grad};
    r.per_region[RegionTag::Exterior] = {n.exterior, ext_grad};
    if (opt.with_kinetic) {
        const KineticReport k = kinetic_control_breakdown(p, opt);
        r.kinetic_control = k.total;
        r.kinetic_single = k.single;
        r.kinetic_cross = k.cross;
    }
    return r;
}

std::vector<EnergyReport> energy_scan(const ResonanceProfile& res, const RadialPotential& pot, double mu0,
                                      double delta, const std::vector<double>& Ls, const EnergyOptions& opt) {
    // Validate every L before any work starts.
    std::vector<TrialParams> params;
    for (double L : Ls) params.emplace_back(L, mu0, delta, res.matching_radius());
    return parallel::map(params, [&](const TrialParams& p) { return energy_form(p, res, pot, opt); });
}

AsymptoticFit fit_asymptotic(const std::vector<std::pair<double, double>>& samples, double theta, FitModel model) {
    if (samples.size() < 3) throw FitError("fit_asymptotic: need at least 3 samples");
    const std::size_t n = samples.size();
    std::vector<double> c1(n), c2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double L = samples[i].first;
        if (!(L > 1.0)) throw FitError("fit_asymptotic: L samples must exceed 1");
        y[i] = samples[i].second;
        if (model == FitModel::PowerCorrection) {
            c1[i] = 1.0;
            c2[i] = std::pow(L, theta - 1.0);
        } else {
            c1[i] = std::log(L);
            c2[i] = 1.0;
        }
    }
    // Normal equations on unit-scaled columns; conditioning judged by the angle between them.
    auto dotv = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };
    const double n1 = std::sqrt(dotv(c1, c1)), n2 = std::sqrt(dotv(c2, c2));
    if (n1 == 0.0 || n2 == 0.0) throw FitError("fit_asymptotic: degenerate design matrix");
    const double g11 = 1.0, g22 = 1.0, g12 = dotv(c1, c2) / (n1 * n2);
    const double det = g11 * g22 - g12 * g12;
    if (det < 1e-12) throw FitError("fit_asymptotic: ill-conditioned design matrix");
    const double r1 = dotv(c1, y) / n1, r2 = dotv(c2, y) / n2;
    const double x1 = (g22 * r1 - g12 * r2) / det;
    const double x2 = (g11 * r2 - g12 * r1) / det;
    AsymptoticFit fit;
    fit.model = model;
    fit.theta = theta;
    fit.a = x1 / n1;
    fit.b = x2 / n2;
    double rs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - fit.a * c1[i] - fit.b * c2[i];
        rs += e * e;
        fit.L_samples.push_back(samples[i].first);
    }
    fit.residual_norm = std::sqrt(rs);
    return fit;
}

EffectiveCoupling effective_coupling(double eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("effective_coupling: eps must be nonnegative");
    // lambda^-2 (2 - eps) - (2/3 + eps) - eps with lambda = 2 / sqrt(3)
    const double v = 5.0 / 6.0 - 2.75 * eps;
    return {v, v > 0.5};
}

double recipe_mu0(double eps) {
    double best = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        const double m = 1e-3 * i;
        const double v = 0.5 * m * m * (1.0 - 2.0 * specfun::bessel_k(BesselOrder(2), m));
        if (v <= -2.0 + 0.5 * eps) best = m;
    }
    return best;
}

std::string to_string(FitModel m) {
    return m == FitModel::PowerCorrection ? "a + b*L^(theta-1)" : "a*log(L) + b";
}

}  // namespace efimov4d::energy
