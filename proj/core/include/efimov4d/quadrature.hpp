#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "efimov4d/geometry.hpp"

namespace efimov4d::quadrature {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t cells_used = 0;
};

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const char* what, QuadResult best) : std::runtime_error(what), best_(best) {}
    const QuadResult& best_estimate() const { return best_; }

private:
    QuadResult best_;
};

inline constexpr double kDefaultTol = 1e-8;
inline constexpr std::size_t kDefaultCellBudget = std::size_t{1} << 20;

struct Options {
    double rel_tol = kDefaultTol;
    double abs_tol = 0.0;
    std::size_t max_cells = kDefaultCellBudget;
};

using Fn1 = std::function<double(double)>;

// One 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
QuadResult gauss_kronrod15(const Fn1& f, double a, double b);

// Globally adaptive bisection of [a, b] driven by Kronrod error estimates.
QuadResult integrate(const Fn1& f, double a, double b, const Options& opt = {});

// Sum of adaptive integrals over consecutive breakpoints; intervals whose length
// ratio is large are mapped to a logarithmic variable.
QuadResult integrate_breaks(const Fn1& f, const std::vector<double>& breaks, const Options& opt = {});

// Fixed n-point Gauss-Legendre rule on each panel [breaks[i], breaks[i+1]]; n in [1, 8].
double gauss_legendre_panels(const Fn1& f, const std::vector<double>& breaks, int n);

// Integral over a 4-ball shell of a radial function: 2 pi^2 \int_a^b f(r) r^3 dr.
QuadResult radial_integrate(const Fn1& f, std::vector<double> breaks, const Options& opt = {});

// A field on R^4 symmetric about the w axis, given on the half plane (w, s >= 0).
struct AxisymField {
    std::function<double(double w, double s)> evaluator;
    // Axial positions of the centers. Either one center or two mirror centers {+c, -c}.
    std::vector<double> centers;
    // Radii (around every center) where the integrand has kinks.
    std::vector<double> known_seams;
    // Exponential decay length of the integrand; used to place radial breakpoints.
    double decay_scale = 1.0;
};

// Which part of R^4 to integrate over.
struct AxisymRegion {
    enum class Kind { Full, Shell, Outside };
    Kind kind = Kind::Full;
    std::size_t center = 0;  // for Shell: index into AxisymField::centers
    double r_inner = 0.0;
    double r_outer = 0.0;  // Shell outer radius, or Outside radius in r_inner

    static AxisymRegion full() { return {}; }
    static AxisymRegion shell(std::size_t center, double a, double b) {
        return {Kind::Shell, center, a, b};
    }
    // Points farther than radius from every center.
    static AxisymRegion outside(double radius) { return {Kind::Outside, 0, radius, 0.0}; }
    // Region of the double-well partition for cutoff radius rho, centers {+L/2, -L/2}.
    static AxisymRegion from_tag(RegionTag tag, double rho);
};

// 4 pi \int\int F(w, s) s^2 dw ds over the region, truncated at distance
// `truncation` from every center.
QuadResult axisym_integrate(const AxisymField& field, const AxisymRegion& region, double truncation,
                            const Options& opt = {});

}  // namespace efimov4d::quadrature
