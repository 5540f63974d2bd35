#include "efimov4d/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

#include "efimov4d/geometry.hpp"
#include "efimov4d/quadrature.hpp"

namespace efimov4d::spectral {
namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Nodes from `start` towards `stop` with spacings h*q, h*q^2, ... ; the last node lands
// exactly on `stop` by shrinking every increment by a common factor. Excludes `start`.
std::vector<double> grow(double start, double stop, double h, double q) {
    std::vector<double> out;
    const double dir = stop > start ? 1.0 : -1.0;
    const double span = std::abs(stop - start);
    std::vector<double> steps;
    double total = 0.0, step = h;
    while (total < span) {
        step *= q;
        steps.push_back(step);
        total += step;
    }
    // Merge a sliver at the end into its neighbour.
    if (steps.size() > 1 && total - span > 0.5 * steps.back()) {
        total -= steps.back();
        steps.pop_back();
    }
    const double scale = span / total;
    double x = start;
    for (double d : steps) {
        x += dir * d * scale;
        out.push_back(x);
    }
    out.back() = stop;
    return out;
}

// Uniform window [c - a, c + a] with spacing h, nodes at c + k h.
std::vector<double> window_nodes(double c, double a, double h) {
    const long k = static_cast<long>(std::floor(a / h + 1e-9));
    std::vector<double> out;
    for (long i = -k; i <= k; ++i) out.push_back(c + static_cast<double>(i) * h);
    return out;
}

std::vector<double> transverse_axis(double well_radius, double box, const GridOptions& opt) {
    const double a = opt.window * well_radius;
    std::vector<double> s;
    const long k = static_cast<long>(std::floor(a / opt.h_fine + 1e-9));
    for (long i = 0; i <= k; ++i) s.push_back(static_cast<double>(i) * opt.h_fine);
    const auto tail = grow(s.back(), box, opt.h_fine, opt.growth);
    s.insert(s.end(), tail.begin(), tail.end());
    return s;
}

// Integral of t^2 times the hat function of node j (weight of the lumped mass in s).
double hat_moment(const std::vector<double>& s, std::size_t j) {
    auto piece = [](double a, double b, bool rising) {
        // exact for t^2 * linear with three-point Gauss
        static const double xg[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
        static const double wg[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
        const double m = 0.5 * (a + b), hl = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double t = m + hl * xg[i];
            const double phi = rising ? (t - a) / (b - a) : (b - t) / (b - a);
            acc += wg[i] * t * t * phi;
        }
        return acc * hl;
    };
    double v = 0.0;
    if (j > 0) v += piece(s[j - 1], s[j], true);
    if (j + 1 < s.size()) v += piece(s[j], s[j + 1], false);
    return v;
}

double hat_length(const std::vector<double>& w, std::size_t i) {
    const double lo = i > 0 ? w[i - 1] : w[i];
    const double hi = i + 1 < w.size() ? w[i + 1] : w[i];
    return 0.5 * (hi - lo);
}

// Discretized pieces sharing one sparsity pattern: A = stiffness + potential, M diagonal.
struct Discretization {
    SpMat A;
    Vec mass;
    std::size_t nw = 0, ns = 0;  // interior counts
};

Discretization assemble(const RadialPotential& pot, const Grid2D& g) {
    const std::size_t Nw = g.w.size(), Ns = g.s.size();
    if (Nw < 3 || Ns < 2) throw std::invalid_argument("spectral: grid too small");
    Discretization d;
    d.nw = Nw - 2;  // w ends are Dirichlet
    d.ns = Ns - 1;  // s end is Dirichlet, s = 0 is natural
    const std::size_t n = d.nw * d.ns;
    auto idx = [&d](std::size_t i, std::size_t j) { return static_cast<int>((i - 1) * d.ns + j); };

    std::vector<double> mw(Nw), ms(Ns);
    for (std::size_t i = 0; i < Nw; ++i) mw[i] = hat_length(g.w, i);
    for (std::size_t j = 0; j < Ns; ++j) ms[j] = hat_moment(g.s, j);
    // Edge stiffness: 1/dw in w, and int t^2 dt / ds^2 over the edge in s.
    std::vector<double> kw(Nw - 1), ks(Ns - 1);
    for (std::size_t i = 0; i + 1 < Nw; ++i) kw[i] = 1.0 / (g.w[i + 1] - g.w[i]);
    for (std::size_t j = 0; j + 1 < Ns; ++j) {
        const double a = g.s[j], b = g.s[j + 1];
        ks[j] = (b * b * b - a * a * a) / (3.0 * (b - a) * (b - a));
    }

    // Potential averaged over each dual cell with weight s^2.
    auto cell_potential = [&](std::size_t i, std::size_t j) {
        const double w0 = i > 0 ? 0.5 * (g.w[i - 1] + g.w[i]) : g.w[i];
        const double w1 = i + 1 < Nw ? 0.5 * (g.w[i] + g.w[i + 1]) : g.w[i];
        const double s0 = j > 0 ? 0.5 * (g.s[j - 1] + g.s[j]) : 0.0;
        const double s1 = j + 1 < Ns ? 0.5 * (g.s[j] + g.s[j + 1]) : g.s[j];
        const double R = pot.support_radius;
        bool near = false;
        for (double c : g.centers) {
            const double dw = std::max({0.0, w0 - c, c - w1});
            if (std::hypot(dw, s0) < R) near = true;
        }
        if (!near) return 0.0;
        constexpr int kSub = 8;
        double num = 0.0, den = 0.0;
        for (int a = 0; a < kSub; ++a) {
            const double w = w0 + (a + 0.5) * (w1 - w0) / kSub;
            for (int b = 0; b < kSub; ++b) {
                const double s = s0 + (b + 0.5) * (s1 - s0) / kSub;
                double v = 0.0;
                for (double c : g.centers) {
                    const double r = std::hypot(w - c, s);
                    if (r < R) v += pot.value(r);
                }
                num += v * s * s;
                den += s * s;
            }
        }
        return den > 0.0 ? num / den : 0.0;
    };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n);
    d.mass.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i + 1 < Nw; ++i) {
        for (std::size_t j = 0; j + 1 < Ns; ++j) {
            const int p = idx(i, j);
            const double m = mw[i] * ms[j];
            d.mass[p] = m;
            double diag = ms[j] * (kw[i - 1] + kw[i]) + mw[i] * (ks[j] + (j > 0 ? ks[j - 1] : 0.0));
            diag += cell_potential(i, j) * m;
            trip.emplace_back(p, p, diag);
            if (i + 2 < Nw) trip.emplace_back(idx(i + 1, j), p, -ms[j] * kw[i]);
            if (i > 1) trip.emplace_back(idx(i - 1, j), p, -ms[j] * kw[i - 1]);
            if (j + 2 < Ns) trip.emplace_back(idx(i, j + 1), p, -mw[i] * ks[j]);
            if (j > 0) trip.emplace_back(idx(i, j - 1), p, -mw[i] * ks[j - 1]);
        }
    }
    d.A.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    d.A.setFromTriplets(trip.begin(), trip.end());
    d.A.makeCompressed();
    return d;
}

using Ldlt = Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>>;

class ShiftedSolver {
public:
    explicit ShiftedSolver(const Discretization& d) : d_(d) { ldlt_.analyzePattern(d.A); }

    // Factorizes A - sigma M and returns the number of eigenvalues below sigma.
    int factorize(double sigma) {
        SpMat shifted = d_.A;
        for (Eigen::Index k = 0; k < shifted.outerSize(); ++k) shifted.coeffRef(k, k) -= sigma * d_.mass[k];
        ldlt_.factorize(shifted);
        ++factorizations;
        if (ldlt_.info() != Eigen::Success) return -1;
        const Vec& D = ldlt_.vectorD();
        int neg = 0;
        for (Eigen::Index k = 0; k < D.size(); ++k)
            if (D[k] < 0.0) ++neg;
        return neg;
    }
    Vec solve(const Vec& rhs) const { return ldlt_.solve(rhs); }

    int factorizations = 0;

private:
    const Discretization& d_;
    Ldlt ldlt_;
};

double rayleigh(const Discretization& d, const Vec& x) {
    return x.dot(d.A * x) / x.dot(d.mass.cwiseProduct(x));
}

// || M^-1 (A x - E M x) ||_M / || x ||_M
double residual(const Discretization& d, const Vec& x, double E) {
    const Vec r = d.A * x - E * d.mass.cwiseProduct(x);
    const double num = r.cwiseProduct(r).cwiseQuotient(d.mass).sum();
    const double den = x.cwiseProduct(x).cwiseProduct(d.mass).sum();
    return std::sqrt(num / den);
}

SpectralReport lowest(const Discretization& d, double L, double coupling) {
    SpectralReport rep;
    rep.L = L;
    rep.coupling = coupling;
    rep.unknowns = static_cast<std::size_t>(d.mass.size());
    ShiftedSolver solver(d);
    const int n0 = solver.factorize(0.0);
    if (n0 < 0) throw SolverError("spectral: factorization failed at zero shift", rep);
    rep.negative_count = n0;

    // Shift just below the ground state: bracket with inertia counts, then bisect.
    double shift = 0.0;
    if (n0 > 0) {
        double hi = 0.0, lo = -1e-7;
        int c = solver.factorize(lo);
        while (c != 0) {
            if (c < 0) throw SolverError("spectral: factorization failed while bracketing", rep);
            hi = lo;
            lo *= 4.0;
            if (lo < -1e6) throw SolverError("spectral: ground state not bracketed", rep);
            c = solver.factorize(lo);
        }
        while (hi - lo > 0.02 * std::abs(lo)) {
            const double mid = 0.5 * (lo + hi);
            const int cm = solver.factorize(mid);
            if (cm < 0) {
                lo = lo + 1e-3 * (hi - lo);
                continue;
            }
            (cm == 0 ? lo : hi) = mid;
        }
        shift = lo;
    }
    if (solver.factorize(shift) < 0) throw SolverError("spectral: factorization failed at the final shift", rep);

    Vec x = Vec::Ones(d.mass.size());
    double E = rayleigh(d, x);
    for (int it = 1; it <= 200; ++it) {
        x = solver.solve(d.mass.cwiseProduct(x));
        x /= std::sqrt(x.cwiseProduct(x).cwiseProduct(d.mass).sum());
        const double En = rayleigh(d, x);
        rep.iterations = it;
        rep.residual = residual(d, x, En);
        const bool settled = std::abs(En - E) <= 1e-12 * std::max(std::abs(En), 1e-300);
        E = En;
        if (rep.residual < 1e-9 || (settled && rep.residual < 1e-6)) break;
    }
    rep.ground_energy = E;
    rep.factorizations = solver.factorizations;
    if (!(rep.residual < 1e-6)) throw SolverError("spectral: inverse iteration did not converge", rep);
    return rep;
}

}  // namespace

Grid2D Grid2D::double_well(double L, double well_radius, double box, const GridOptions& opt) {
    const double c = 0.5 * L;
    const double a = opt.window * well_radius;
    if (!(c - a > opt.h_fine)) throw std::invalid_argument("Grid2D: wells overlap the refinement windows");
    Grid2D g;
    g.centers = {-c, c};
    // Right half first, then mirrored: inner grading meets the midplane at w = 0.
    std::vector<double> right = window_nodes(c, a, opt.h_fine);
    auto inner = grow(right.front(), 0.0, opt.h_fine, opt.growth);
    auto outer = grow(right.back(), c + box, opt.h_fine, opt.growth);
    std::vector<double> half(inner.rbegin(), inner.rend());  // from 0 up
    half.insert(half.end(), right.begin(), right.end());
    half.insert(half.end(), outer.begin(), outer.end());
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        if (*it > 0.0) g.w.push_back(-*it);
    g.w.insert(g.w.end(), half.begin(), half.end());
    g.s = transverse_axis(well_radius, c + box, opt);
    return g;
}

Grid2D Grid2D::single_well(double well_radius, double box, const GridOptions& opt) {
    const double a = opt.window * well_radius;
    Grid2D g;
    g.centers = {0.0};
    std::vector<double> mid = window_nodes(0.0, a, opt.h_fine);
    auto outer = grow(mid.back(), box, opt.h_fine, opt.growth);
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) g.w.push_back(-*it);
    g.w.insert(g.w.end(), mid.begin(), mid.end());
    g.w.insert(g.w.end(), outer.begin(), outer.end());
    g.s = transverse_axis(well_radius, box, opt);
    return g;
}

Grid2D Grid2D::refined() const {
    auto halve = [](const std::vector<double>& x) {
        std::vector<double> out;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            out.push_back(x[i]);
            out.push_back(0.5 * (x[i] + x[i + 1]));
        }
        out.push_back(x.back());
        return out;
    };
    return Grid2D{halve(w), halve(s), centers};
}

std::size_t Grid2D::unknowns() const { return (w.size() - 2) * (s.size() - 1); }

std::size_t Grid2D::nodes_across_well(double well_radius) const {
    std::size_t best = s.size();
    for (double c : centers) {
        const auto nw = std::count_if(w.begin(), w.end(), [&](double x) { return std::abs(x - c) <= well_radius; });
        best = std::min(best, static_cast<std::size_t>(nw));
    }
    // Along s only the half diameter is on the grid; count the mirrored nodes too.
    const auto ns = std::count_if(s.begin(), s.end(), [&](double x) { return x <= well_radius; });
    return std::min(best, static_cast<std::size_t>(2 * ns - 1));
}

double box_extent(double L, double expected_energy, const GridOptions& opt) {
    const double kappa = std::sqrt(std::abs(expected_energy));
    double box = opt.min_box;
    if (kappa > 0.0) box = std::max(box, opt.box_decay_lengths / kappa);
    (void)L;
    return box;
}

SpectralReport double_well_ground(const RadialPotential& pot, double L, const Grid2D& grid) {
    if (grid.centers.size() != 2 || std::abs(grid.centers[1] - 0.5 * L) > 1e-12 * L ||
        std::abs(grid.centers[0] + 0.5 * L) > 1e-12 * L)
        throw std::invalid_argument("double_well_ground: grid is not built for this L");
    if (!(grid.w.back() > 0.5 * L + pot.support_radius))
        throw std::invalid_argument("double_well_ground: L exceeds the grid extent");
    return lowest(assemble(pot, grid), L, pot.coupling);
}

SpectralReport single_well_ground(const RadialPotential& pot, const Grid2D& grid) {
    return lowest(assemble(pot, grid), 0.0, pot.coupling);
}

int count_below(const RadialPotential& pot, const Grid2D& grid, double sigma) {
    const Discretization d = assemble(pot, grid);
    ShiftedSolver solver(d);
    return solver.factorize(sigma);
}

double calibrate_critical_coupling(const RadialPotential& pot, const Grid2D& grid, double lambda_guess,
                                   double rel_tol) {
    // The stiffness is coupling independent; only the potential diagonal changes, so one pattern
    // analysis serves every trial coupling.
    const Discretization unit = assemble(pot.with_coupling(1.0), grid);
    const Discretization free = assemble(pot.with_coupling(0.0), grid);
    const SpMat vpart = unit.A - free.A;
    Discretization d = free;
    ShiftedSolver solver(d);
    auto negative = [&](double lam) {
        d.A = free.A + lam * vpart;
        const int c = solver.factorize(0.0);
        if (c < 0) throw std::runtime_error("calibrate_critical_coupling: factorization failed");
        return c > 0;
    };
    double lo = 0.98 * lambda_guess, hi = 1.02 * lambda_guess;
    while (negative(lo)) lo *= 0.9;
    while (!negative(hi)) hi *= 1.1;
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (negative(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

CriticalRun critical_double_well(const RadialPotential& pot, double L, double expected_energy,
                                 double coupling_scale, int refinements, const GridOptions& opt) {
    CriticalRun run;
    run.grid = Grid2D::double_well(L, pot.support_radius, box_extent(L, expected_energy, opt), opt);
    for (int k = 0; k < refinements; ++k) run.grid = run.grid.refined();
    // Discretization moves the critical coupling by far more than the tunneling energy, so the
    // reference coupling must come from this very mesh.
    Grid2D lone = run.grid;
    lone.centers = {run.grid.centers.back()};
    run.grid_critical_coupling = calibrate_critical_coupling(pot, lone, pot.coupling, 1e-10);
    run.report = double_well_ground(pot.with_coupling(coupling_scale * run.grid_critical_coupling), L, run.grid);
    return run;
}

int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double sigma) {
    if (off.size() + 1 != diag.size()) throw std::invalid_argument("sturm_count: size mismatch");
    int count = 0;
    double q = 1.0;
    const double tiny = 1e-300;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double b2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
        q = diag[i] - sigma - (i > 0 ? b2 / q : 0.0);
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

CountResult effective_radial_count(double c, double t_min, double t_max, std::size_t n_nodes) {
    if (!(t_min > 1.0) || !(t_max > t_min)) throw std::invalid_argument("effective_radial_count: need 1 < t_min < t_max");
    if (n_nodes < 3) throw std::invalid_argument("effective_radial_count: need at least 3 nodes");
    const double h = (t_max - t_min) / static_cast<double>(n_nodes + 1);
    std::vector<double> diag(n_nodes), off(n_nodes - 1, -1.0 / (h * h));
    for (std::size_t i = 0; i < n_nodes; ++i) {
        const double t = t_min + static_cast<double>(i + 1) * h;
        diag[i] = 2.0 / (h * h) - c / t;
    }
    CountResult r;
    r.count = sturm_count(diag, off, 0.0);
    // The local wavelength is shortest at t_min.
    if (c > 0.0) {
        const double wavelength = 2.0 * kPi / std::sqrt(c / t_min);
        r.resolution_warning = wavelength / h < 10.0;
    }
    return r;
}

double trial_interval_value(double eps, double K, long n) {
    if (!(K > 0.0) || n < 1) throw std::invalid_argument("trial_interval_value: need K > 0 and n >= 1");
    const double nd = static_cast<double>(n);
    return kPi * kPi / (K * K * nd * nd) - eps / (nd * nd + K * nd);
}

std::vector<Interval> disjoint_interval_schedule(double eps, double K, long n_start, int count) {
    if (count < 1) throw std::invalid_argument("disjoint_interval_schedule: count must be positive");
    std::vector<Interval> out;
    long n = std::max(1L, n_start);
    double prev_end = -1.0;
    constexpr long kSearchLimit = 100000000;
    while (static_cast<int>(out.size()) < count) {
        const double nd = static_cast<double>(n);
        if (nd * nd > prev_end) {
            const double v = trial_interval_value(eps, K, n);
            if (v < 0.0) {
                out.push_back({n, nd * nd, nd * nd + K * nd, v});
                prev_end = nd * nd + K * nd;
            }
        }
        if (++n > kSearchLimit) break;
    }
    return out;
}

std::vector<Interval> schedule_below(double eps, double K, long n_start, double t_max) {
    std::vector<Interval> out;
    // The schedule advances at least one n per interval, so sqrt(t_max) intervals suffice.
    const int cap = static_cast<int>(std::sqrt(std::max(t_max, 1.0))) + 2;
    for (const Interval& iv : disjoint_interval_schedule(eps, K, n_start, cap)) {
        if (iv.t_hi > t_max) break;
        out.push_back(iv);
    }
    return out;
}

double interval_rayleigh_quotient(double c, const Interval& iv) {
    const double len = iv.t_hi - iv.t_lo;
    const double amp = std::sqrt(2.0 / len);
    auto f = [&](double t) { return amp * std::sin(kPi * (t - iv.t_lo) / len); };
    auto df = [&](double t) { return amp * kPi / len * std::cos(kPi * (t - iv.t_lo) / len); };
    quadrature::Options o;
    o.rel_tol = 1e-12;
    const double kin = quadrature::integrate([&](double t) { return df(t) * df(t); }, iv.t_lo, iv.t_hi, o).value;
    const double pot = quadrature::integrate([&](double t) { return c * f(t) * f(t) / t; }, iv.t_lo, iv.t_hi, o).value;
    const double norm = quadrature::integrate([&](double t) { return f(t) * f(t); }, iv.t_lo, iv.t_hi, o).value;
    return (kin - pot) / norm;
}

}  // namespace efimov4d::spectral
