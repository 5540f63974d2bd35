#include "efimov4d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace efimov4d::quadrature {
namespace {

// Kronrod 15-point abscissae and weights; odd-index abscissae are the Gauss 7 nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    QuadResult r;
    double resabs;
};

struct PanelOut {
    QuadResult r;
    double resabs;
};

PanelOut gk15(const Fn1& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    const double ah = std::abs(half);
    resk *= half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {{resk, err, 1}, resabs};
}

struct ErrLess {
    bool operator()(const Panel& x, const Panel& y) const { return x.r.error_estimate < y.r.error_estimate; }
};

// Core adaptive loop; l1_fraction lets near-cancelling integrands stop on an L1 scale.
QuadResult adaptive(const Fn1& f, double a, double b, const Options& opt, double l1_fraction, bool throw_on_budget) {
    if (a == b) return {};
    std::priority_queue<Panel, std::vector<Panel>, ErrLess> heap;
    std::vector<Panel> done;
    const PanelOut p0 = gk15(f, a, b);
    heap.push({a, b, p0.r, p0.resabs});
    double total = p0.r.value;
    double err = p0.r.error_estimate;
    double l1 = p0.resabs;
    std::size_t cells = 1;
    auto target = [&] {
        return std::max(opt.abs_tol, opt.rel_tol * std::max(std::abs(total), l1_fraction * l1));
    };
    while (!heap.empty() && err > target()) {
        if (cells >= opt.max_cells) {
            QuadResult best{total, err, cells};
            if (throw_on_budget) throw BudgetExceeded("quadrature cell budget exceeded", best);
            break;
        }
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > std::min(p.a, p.b) && mid < std::max(p.a, p.b)) ||
            std::abs(p.b - p.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(p.a), std::abs(p.b))) {
            // Cannot split further; freeze it.
            done.push_back(p);
            continue;
        }
        const PanelOut l = gk15(f, p.a, mid);
        const PanelOut r = gk15(f, mid, p.b);
        total += l.r.value + r.r.value - p.r.value;
        err += l.r.error_estimate + r.r.error_estimate - p.r.error_estimate;
        l1 += l.resabs + r.resabs - p.resabs;
        heap.push({p.a, mid, l.r, l.resabs});
        heap.push({mid, p.b, r.r, r.resabs});
        ++cells;
    }
    // Deterministic final reduction: sum panels in order of position.
    while (!heap.empty()) {
        done.push_back(heap.top());
        heap.pop();
    }
    std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double s = 0.0, c = 0.0, e = 0.0;
    for (const Panel& p : done) {
        const double y = p.r.value - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
        e += p.r.error_estimate;
    }
    return {s, e, cells};
}

QuadResult adaptive_mapped(const Fn1& f, double a, double b, const Options& opt, double l1_fraction, bool throw_on_budget) {
    if (a > 0.0 && b / a > 4.0) {
        const Fn1 g = [&f](double t) {
            const double r = std::exp(t);
            return f(r) * r;
        };
        return adaptive(g, std::log(a), std::log(b), opt, l1_fraction, throw_on_budget);
    }
    return adaptive(f, a, b, opt, l1_fraction, throw_on_budget);
}

std::vector<double> clean_breaks(std::vector<double> br) {
    std::sort(br.begin(), br.end());
    std::vector<double> out;
    for (double x : br) {
        if (out.empty() || x > out.back() * (1.0 + 1e-14) + 1e-300) out.push_back(x);
    }
    return out;
}

}  // namespace

QuadResult gauss_kronrod15(const Fn1& f, double a, double b) { return gk15(f, a, b).r; }

QuadResult integrate(const Fn1& f, double a, double b, const Options& opt) {
    return adaptive(f, a, b, opt, 0.0, true);
}

QuadResult integrate_breaks(const Fn1& f, const std::vector<double>& breaks, const Options& opt) {
    const std::vector<double> br = clean_breaks(breaks);
    QuadResult out;
    // Each piece gets the full relative tolerance, which bounds the relative error of the sum
    // whenever the pieces share a sign; an absolute floor keeps tiny pieces from over-refining.
    std::vector<QuadResult> parts;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        Options o = opt;
        o.max_cells = opt.max_cells > out.cells_used ? opt.max_cells - out.cells_used : 1;
        o.abs_tol = std::max(opt.abs_tol, 1e-3 * opt.rel_tol * scale);
        QuadResult r = adaptive_mapped(f, br[i], br[i + 1], o, 0.0, true);
        scale = std::max(scale, std::abs(r.value));
        out.value += r.value;
        out.error_estimate += r.error_estimate;
        out.cells_used += r.cells_used;
    }
    return out;
}

double gauss_legendre_panels(const Fn1& f, const std::vector<double>& breaks, int n) {
    static const std::vector<std::vector<double>> nodes = {
        {0.0},
        {-0.5773502691896257645, 0.5773502691896257645},
        {-0.7745966692414833770, 0.0, 0.7745966692414833770},
        {-0.8611363115940525752, -0.3399810435848562648, 0.3399810435848562648, 0.8611363115940525752},
        {-0.9061798459386639928, -0.5384693101056830910, 0.0, 0.5384693101056830910, 0.9061798459386639928},
        {-0.9324695142031520278, -0.6612093864662645137, -0.2386191860831969086, 0.2386191860831969086,
         0.6612093864662645137, 0.9324695142031520278},
        {-0.9491079123427585245, -0.7415311855993944399, -0.4058451513773971669, 0.0, 0.4058451513773971669,
         0.7415311855993944399, 0.9491079123427585245},
        {-0.9602898564975362317, -0.7966664774136267396, -0.5255324099163289858, -0.1834346424956498049,
         0.1834346424956498049, 0.5255324099163289858, 0.7966664774136267396, 0.9602898564975362317}};
    static const std::vector<std::vector<double>> weights = {
        {2.0},
        {1.0, 1.0},
        {0.5555555555555555556, 0.8888888888888888889, 0.5555555555555555556},
        {0.3478548451374538574, 0.6521451548625461426, 0.6521451548625461426, 0.3478548451374538574},
        {0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889, 0.4786286704993664680,
         0.2369268850561890875},
        {0.1713244923791703450, 0.3607615730481386076, 0.4679139345726910474, 0.4679139345726910474,
         0.3607615730481386076, 0.1713244923791703450},
        {0.1294849661688696933, 0.2797053914892766679, 0.3818300505051189450, 0.4179591836734693878,
         0.3818300505051189450, 0.2797053914892766679, 0.1294849661688696933},
        {0.1012285362903762591, 0.2223810344533744706, 0.3137066458778872873, 0.3626837833783619830,
         0.3626837833783619830, 0.3137066458778872873, 0.2223810344533744706, 0.1012285362903762591}};
    if (n < 1 || n > 8) throw std::invalid_argument("gauss_legendre_panels: n must be in [1, 8]");
    const auto& x = nodes[static_cast<std::size_t>(n - 1)];
    const auto& wt = weights[static_cast<std::size_t>(n - 1)];
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double c = 0.5 * (breaks[i] + breaks[i + 1]);
        const double h = 0.5 * (breaks[i + 1] - breaks[i]);
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += wt[j] * f(c + h * x[j]);
        sum += h * s;
    }
    return sum;
}

QuadResult radial_integrate(const Fn1& f, std::vector<double> breaks, const Options& opt) {
    const Fn1 g = [&f](double r) { return kSphere3 * r * r * r * f(r); };
    return integrate_breaks(g, breaks, opt);
}

AxisymRegion AxisymRegion::from_tag(RegionTag tag, double rho) {
    switch (tag) {
        case RegionTag::BallPlus: return shell(0, 0.0, rho);
        case RegionTag::BallMinus: return shell(1, 0.0, rho);
        case RegionTag::AnnulusPlus: return shell(0, rho, 2.0 * rho);
        case RegionTag::AnnulusMinus: return shell(1, rho, 2.0 * rho);
        case RegionTag::Exterior: return outside(2.0 * rho);
    }
    return full();
}

namespace {

// Integrates over the polar patch around `center` whose angle is limited by the
// bisector at w = 0 when `half_limit` > 0 (the bisector lies half_limit away).
QuadResult polar_patch(const AxisymField& field, double center, double dir, double r_lo, double r_hi,
                       double half_limit, const Options& opt) {
    if (!(r_hi > r_lo)) return {};
    std::vector<double> br{r_lo, r_hi};
    for (double s : field.known_seams)
        if (s > r_lo && s < r_hi) br.push_back(s);
    if (half_limit > 0.0 && half_limit > r_lo && half_limit < r_hi) br.push_back(half_limit);
    if (half_limit > 0.0) {
        for (double m : {2.0, 4.0})
            if (m * half_limit > r_lo && m * half_limit < r_hi) br.push_back(m * half_limit);
    }
    const double base = std::max({r_lo, half_limit, 0.0});
    for (double m : {1.0, 4.0, 16.0, 64.0}) {
        const double x = base + m * field.decay_scale;
        if (x > r_lo && x < r_hi) br.push_back(x);
    }
    br = clean_breaks(br);

    Options inner;
    inner.rel_tol = 0.1 * opt.rel_tol;
    inner.abs_tol = 0.0;
    inner.max_cells = 4000;
    std::size_t inner_cells = 0;
    const auto& F = field.evaluator;

    const Fn1 radial = [&](double r) {
        double amax = kPi;
        if (half_limit > 0.0 && r > half_limit) amax = std::acos(-half_limit / r);
        const Fn1 ang = [&](double a) {
            const double s = r * std::sin(a);
            const double w = center + dir * r * std::cos(a);
            return F(w, s) * s * s;
        };
        const QuadResult q = adaptive(ang, 0.0, amax, inner, 1e-2, false);
        inner_cells += q.cells_used;
        return 4.0 * kPi * r * q.value;
    };
    QuadResult out;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        Options o = opt;
        o.abs_tol = std::max(opt.abs_tol, 1e-3 * opt.rel_tol * scale);
        o.max_cells = opt.max_cells > out.cells_used ? opt.max_cells - out.cells_used : 1;
        const QuadResult q = adaptive_mapped(radial, br[i], br[i + 1], o, 0.0, true);
        scale = std::max(scale, std::abs(q.value));
        out.value += q.value;
        out.error_estimate += q.error_estimate;
        out.cells_used += q.cells_used;
    }
    out.error_estimate += inner.rel_tol * std::abs(out.value);
    out.cells_used += inner_cells / 15 + 1;
    return out;
}

QuadResult add(QuadResult a, const QuadResult& b) {
    a.value += b.value;
    a.error_estimate += b.error_estimate;
    a.cells_used += b.cells_used;
    return a;
}

}  // namespace

QuadResult axisym_integrate(const AxisymField& field, const AxisymRegion& region, double truncation,
                            const Options& opt) {
    if (!(opt.rel_tol > 0.0)) throw std::invalid_argument("axisym_integrate: tol must be positive");
    if (field.centers.empty() || field.centers.size() > 2)
        throw std::invalid_argument("axisym_integrate: need one or two centers");
    const bool two = field.centers.size() == 2;
    if (two && !(field.centers[0] > 0.0 && field.centers[1] == -field.centers[0]))
        throw std::invalid_argument("axisym_integrate: two centers must be {+c, -c} with c > 0");

    if (!two) {
        const double c = field.centers[0];
        switch (region.kind) {
            case AxisymRegion::Kind::Full: return polar_patch(field, c, 1.0, 0.0, truncation, 0.0, opt);
            case AxisymRegion::Kind::Shell:
                return polar_patch(field, c, 1.0, region.r_inner, std::min(region.r_outer, truncation), 0.0, opt);
            case AxisymRegion::Kind::Outside:
                return polar_patch(field, c, 1.0, region.r_inner, truncation, 0.0, opt);
        }
    }
    const double c = field.centers[0];
    switch (region.kind) {
        case AxisymRegion::Kind::Full:
            return add(polar_patch(field, c, 1.0, 0.0, truncation, c, opt),
                       polar_patch(field, -c, -1.0, 0.0, truncation, c, opt));
        case AxisymRegion::Kind::Shell: {
            if (region.r_outer > c)
                throw std::invalid_argument("axisym_integrate: shell must not cross the bisector");
            const double sign = region.center == 0 ? 1.0 : -1.0;
            return polar_patch(field, sign * c, sign, region.r_inner, region.r_outer, 0.0, opt);
        }
        case AxisymRegion::Kind::Outside:
            return add(polar_patch(field, c, 1.0, region.r_inner, truncation, c, opt),
                       polar_patch(field, -c, -1.0, region.r_inner, truncation, c, opt));
    }
    return {};
}

}  // namespace efimov4d::quadrature
