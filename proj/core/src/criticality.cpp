#include "efimov4d/criticality.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "efimov4d/geometry.hpp"
#include "efimov4d/quadrature.hpp"

namespace efimov4d::criticality {
namespace {

using State = std::array<double, 2>;  // (u, u')

constexpr double kRelTol = 1e-13;
constexpr double kAbsTol = 1e-16;

struct Rhs {
    const RadialPotential* pot;
    double lambda;
    double profile_value;  // profile is constant on the current piece
    State operator()(double r, const State& y) const {
        return {y[1], lambda * profile_value * y[0] - 3.0 * y[1] / r};
    }
};

// One Dormand-Prince 5(4) step; returns the 5th order solution and the error estimate.
State dp45_step(const Rhs& f, double r, const State& y, double h, double& err) {
    auto axpy = [](const State& a, double c, const State& k) { return State{a[0] + c * k[0], a[1] + c * k[1]}; };
    const State k1 = f(r, y);
    const State k2 = f(r + h / 5.0, axpy(y, h / 5.0, k1));
    const State y3{y[0] + h * (3.0 / 40 * k1[0] + 9.0 / 40 * k2[0]), y[1] + h * (3.0 / 40 * k1[1] + 9.0 / 40 * k2[1])};
    const State k3 = f(r + 0.3 * h, y3);
    State y4{};
    for (int i = 0; i < 2; ++i) y4[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
    const State k4 = f(r + 0.8 * h, y4);
    State y5{};
    for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] + 64448.0 / 6561 * k3[i] -
                            212.0 / 729 * k4[i]);
    const State k5 = f(r + 8.0 / 9.0 * h, y5);
    State y6{};
    for (int i = 0; i < 2; ++i)
        y6[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] + 46732.0 / 5247 * k3[i] +
                            49.0 / 176 * k4[i] - 5103.0 / 18656 * k5[i]);
    const State k6 = f(r + h, y6);
    State out{};
    for (int i = 0; i < 2; ++i)
        out[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                             2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
    const State k7 = f(r + h, out);
    err = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double low = y[i] + h * (5179.0 / 57600 * k1[i] + 7571.0 / 16695 * k3[i] + 393.0 / 640 * k4[i] -
                                       92097.0 / 339200 * k5[i] + 187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
        const double sc = kAbsTol + kRelTol * std::max(std::abs(y[i]), std::abs(out[i]));
        err = std::max(err, std::abs(out[i] - low) / sc);
    }
    return out;
}

// Advances y from r0 to r1 adaptively. Returns false if u turned nonpositive.
bool advance(const Rhs& f, double r0, double r1, State& y, double& h) {
    double r = r0;
    h = std::min(h, r1 - r0);
    while (r < r1) {
        const bool last = r + h >= r1;
        const double step = last ? r1 - r : h;
        double err = 0.0;
        const State trial = dp45_step(f, r, y, step, err);
        if (err <= 1.0) {
            r = last ? r1 : r + step;
            y = trial;
            if (!(y[0] > 0.0)) return false;
        }
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = step * fac;
        if (h < 1e-14 * r1) throw std::runtime_error("shoot: step size underflow");
    }
    return true;
}

// Series start near the origin where the profile is taken as constant.
State series_start(double lambda, double p0, double r) {
    const double c = lambda * p0 / 8.0;
    const double d = lambda * p0 * c / 24.0;
    const double r2 = r * r;
    return {1.0 + c * r2 + d * r2 * r2, 2.0 * c * r + 4.0 * d * r2 * r};
}

std::vector<double> piece_edges(const RadialPotential& pot) {
    std::vector<double> e{0.0};
    for (double b : pot.breakpoints)
        if (b > 0.0 && b < pot.support_radius) e.push_back(b);
    e.push_back(pot.support_radius);
    std::sort(e.begin(), e.end());
    return e;
}

// Integrates through the nodes (sorted, first > 0) and records the state at each node.
bool integrate_nodes(const RadialPotential& pot, double lambda, const std::vector<double>& nodes,
                     std::vector<State>& states) {
    const std::vector<double> edges = piece_edges(pot);
    const double r_start = std::min(nodes.front(), 1e-3 * pot.support_radius);
    State y = series_start(lambda, pot.profile_at(0.5 * r_start), r_start);
    double r = r_start;
    double h = 1e-3 * pot.support_radius;
    states.clear();
    std::size_t piece = 0;
    for (double target : nodes) {
        while (r < target) {
            while (piece + 1 < edges.size() && edges[piece + 1] <= r) ++piece;
            const double stop = std::min(target, edges[piece + 1]);
            Rhs f{&pot, lambda, pot.profile_at(0.5 * (r + stop))};
            if (stop > r && !advance(f, r, stop, y, h)) return false;
            r = stop;
        }
        states.push_back(y);
    }
    return true;
}

}  // namespace

RadialPotential RadialPotential::square_well(double radius, double coupling, double delta) {
    if (!(radius > 0.0)) throw std::invalid_argument("square_well: radius must be positive");
    RadialPotential p;
    p.profile = [radius](double r) { return r < radius ? -1.0 : 0.0; };
    p.support_radius = radius;
    p.short_range_R = radius;
    p.short_range_delta = delta;
    p.coupling = coupling;
    return p;
}

ShootResult shoot(const RadialPotential& pot, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("shoot: lambda must be positive");
    std::vector<State> st;
    const double a = pot.support_radius;
    if (!integrate_nodes(pot, lambda, {a}, st)) return {-std::numeric_limits<double>::infinity(), true};
    const State y = st.back();
    return {a * y[1] / y[0] + 2.0, false};
}

double shoot_zero_energy(const RadialPotential& pot, double lambda) {
    const ShootResult s = shoot(pot, lambda);
    if (s.interior_node) throw std::domain_error("shoot_zero_energy: solution has an interior node");
    return s.mismatch;
}

double find_lambda_crit(const RadialPotential& pot, std::pair<double, double> bracket, double tol) {
    double lo = bracket.first, hi = bracket.second;
    if (!(lo > 0.0 && hi > lo && tol > 0.0)) throw BracketError("find_lambda_crit: invalid bracket");
    auto m = [&](double l) {
        const ShootResult s = shoot(pot, l);
        return s.interior_node ? -1.0 : s.mismatch;
    };
    const double mlo = m(lo), mhi = m(hi);
    if (!(mlo > 0.0 && mhi < 0.0)) throw BracketError("find_lambda_crit: mismatch does not change sign");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = m(mid);
        if (v == 0.0) return mid;
        (v > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ResonanceProfile::ResonanceProfile(std::vector<double> r, std::vector<double> u, std::vector<double> du,
                                   std::vector<double> d2u_left, std::vector<double> d2u_right,
                                   double matching_radius)
    : r_(std::move(r)), u_(std::move(u)), du_(std::move(du)), d2l_(std::move(d2u_left)),
      d2r_(std::move(d2u_right)), rho0_(matching_radius) {
    if (r_.size() < 2 || u_.size() != r_.size() || du_.size() != r_.size() || d2l_.size() + 1 != r_.size() ||
        d2r_.size() + 1 != r_.size())
        throw std::invalid_argument("ResonanceProfile: inconsistent table sizes");
}

std::size_t ResonanceProfile::locate(double r) const {
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    std::size_t i = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
    return std::min(i, r_.size() - 2);
}

double ResonanceProfile::value(double r) const {
    if (r >= rho0_) return 1.0 / (r * r);
    const std::size_t i = locate(r);
    const double h = r_[i + 1] - r_[i];
    const double t = (r - r_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * u_[i] + (t3 - 2 * t2 + t) * h * du_[i] + (-2 * t3 + 3 * t2) * u_[i + 1] +
           (t3 - t2) * h * du_[i + 1];
}

double ResonanceProfile::derivative(double r) const {
    if (r >= rho0_) return -2.0 / (r * r * r);
    const std::size_t i = locate(r);
    const double h = r_[i + 1] - r_[i];
    const double t = (r - r_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * du_[i] + (t3 - 2 * t2 + t) * h * d2l_[i] + (-2 * t3 + 3 * t2) * du_[i + 1] +
           (t3 - t2) * h * d2r_[i];
}

double ResonanceProfile::epsilon1(double r) const { return r >= rho0_ ? 0.0 : value(r) - 1.0 / (r * r); }
double ResonanceProfile::epsilon2(double r) const { return r >= rho0_ ? 0.0 : derivative(r) + 2.0 / (r * r * r); }

double ResonanceProfile::interior_integral(const std::function<double(double, double, double)>& F) const {
    const quadrature::Fn1 g = [&](double r) { return F(r, value(r), derivative(r)); };
    return quadrature::gauss_legendre_panels(g, r_, 5);
}

ResonanceProfile resonance_profile(const RadialPotential& pot, double lambda_c, const GridSpec& spec) {
    if (!(lambda_c > 0.0)) throw ConsistencyError("resonance_profile: coupling must be positive");
    const ShootResult s = shoot(pot, lambda_c);
    if (s.interior_node || std::abs(s.mismatch) > spec.critical_threshold)
        throw ConsistencyError("resonance_profile: coupling is not critical for this potential");
    if (spec.points < 3) throw std::invalid_argument("resonance_profile: need at least 3 grid points");

    const double a = pot.support_radius;
    std::vector<double> nodes;
    const std::size_t n = spec.points - 1;
    for (std::size_t i = 1; i <= n; ++i) nodes.push_back(a * static_cast<double>(i) / static_cast<double>(n));
    for (double b : pot.breakpoints)
        if (b > 0.0 && b < a) nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<State> st;
    if (!integrate_nodes(pot, lambda_c, nodes, st)) throw ConsistencyError("resonance_profile: interior node");

    const double scale = 1.0 / (a * a * st.back()[0]);
    std::vector<double> r{0.0}, u{scale}, du{0.0};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        r.push_back(nodes[i]);
        u.push_back(scale * st[i][0]);
        du.push_back(scale * st[i][1]);
    }
    std::vector<double> d2l, d2r;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double lp = lambda_c * pot.profile_at(0.5 * (r[i] + r[i + 1]));
        // u'' = lambda p u - 3 u'/r; at the origin u'' = lambda p u(0) / 4.
        d2l.push_back(i == 0 ? 0.25 * lp * u[0] : lp * u[i] - 3.0 * du[i] / r[i]);
        d2r.push_back(lp * u[i + 1] - 3.0 * du[i + 1] / r[i + 1]);
    }
    return ResonanceProfile(std::move(r), std::move(u), std::move(du), std::move(d2l), std::move(d2r), a);
}

double c0_identity_residual(const ResonanceProfile& profile, const RadialPotential& pot) {
    const double vphi = kSphere3 * profile.interior_integral([&](double r, double u, double) {
        return pot.value(r) * u * r * r * r;
    });
    return profile.tail_constant() + vphi / (4.0 * kPi * kPi);
}

ZeroEnergyBalance zero_energy_balance(const ResonanceProfile& profile, const RadialPotential& pot) {
    const double rho0 = profile.matching_radius();
    const double grad_in = kSphere3 * profile.interior_integral([](double r, double, double du) {
        return du * du * r * r * r;
    });
    // \int_{r > rho0} |grad r^-2|^2 = 2 pi^2 \int 4 r^-3 dr
    const double grad_tail = kSphere3 * 4.0 / (2.0 * rho0 * rho0);
    const double pot_int = kSphere3 * profile.interior_integral([&](double r, double u, double) {
        return pot.value(r) * u * u * r * r * r;
    });
    const double g = grad_in + grad_tail;
    return {g, pot_int, g + pot_int};
}

CriticalWell critical_unit_well(const GridSpec& spec) {
    const RadialPotential base = RadialPotential::square_well();
    const double lc = find_lambda_crit(base, {5.0, 6.5});
    return {base.with_coupling(lc), resonance_profile(base, lc, spec)};
}

}  // namespace efimov4d::criticality
