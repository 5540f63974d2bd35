#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "efimov4d/criticality.hpp"

namespace efimov4d::spectral {

using criticality::RadialPotential;

struct GridOptions {
    double h_fine = 1.0 / 16.0;   // spacing inside the window around each well
    double window = 3.0;          // half width of the uniform window, in units of the well radius
    double growth = 1.06;         // ratio of consecutive spacings outside the window
    double box_decay_lengths = 40.0;
    double min_box = 400.0;       // distance of the Dirichlet walls from the wells, at least
};

// Tensor grid on the (w, s) half plane. The w and s boundary nodes at the far ends carry
// Dirichlet data; s = 0 is a natural (Neumann) boundary.
struct Grid2D {
    std::vector<double> w;
    std::vector<double> s;
    std::vector<double> centers;  // well centers on the axis

    // Windows around +-L/2; the box extends `box` beyond the wells.
    static Grid2D double_well(double L, double well_radius, double box, const GridOptions& opt = {});
    // Single well at the origin, with the same local mesh as double_well().
    static Grid2D single_well(double well_radius, double box, const GridOptions& opt = {});
    // Each spacing halved.
    Grid2D refined() const;
    std::size_t unknowns() const;
    // Smallest number of nodes across a well diameter along either axis.
    std::size_t nodes_across_well(double well_radius) const;
};

// Distance from the wells to the walls for an expected binding energy.
double box_extent(double L, double expected_energy, const GridOptions& opt = {});

struct SpectralReport {
    double L = 0.0;
    double ground_energy = 0.0;
    int negative_count = 0;
    int iterations = 0;
    int factorizations = 0;
    double residual = 0.0;
    double coupling = 0.0;
    std::size_t unknowns = 0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const char* what, SpectralReport diag) : std::runtime_error(what), diag_(diag) {}
    const SpectralReport& diagnostics() const { return diag_; }

private:
    SpectralReport diag_;
};

// Lowest eigenvalue of -Laplace + V(x - l/2) + V(x + l/2) in the axisymmetric reduction,
// with the coupling taken from pot.coupling.
SpectralReport double_well_ground(const RadialPotential& pot, double L, const Grid2D& grid);
// Same operator with a single well at the origin of the grid.
SpectralReport single_well_ground(const RadialPotential& pot, const Grid2D& grid);
// Number of eigenvalues below sigma for the discretized operator on `grid`.
int count_below(const RadialPotential& pot, const Grid2D& grid, double sigma);

// Coupling at which the discretized single well on `grid` acquires its first negative
// eigenvalue, i.e. the grid's own critical coupling.
double calibrate_critical_coupling(const RadialPotential& pot, const Grid2D& grid, double lambda_guess,
                                   double rel_tol = 1e-9);

struct CriticalRun {
    SpectralReport report;
    double grid_critical_coupling = 0.0;  // calibrated on the same grid with one well removed
    Grid2D grid;
};
// Double well at the grid's own critical coupling times `coupling_scale`. The box is sized from
// `expected_energy` (a variational estimate is fine); `refinements` halves every spacing that many times.
// pot.coupling seeds the calibration.
CriticalRun critical_double_well(const RadialPotential& pot, double L, double expected_energy,
                                 double coupling_scale = 1.0, int refinements = 0, const GridOptions& opt = {});

// Number of eigenvalues of the symmetric tridiagonal matrix below sigma.
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double sigma);

struct CountResult {
    int count = 0;
    bool resolution_warning = false;
};
// Negative eigenvalues of -d^2/dt^2 - c/t on [t_min, t_max] with Dirichlet ends.
CountResult effective_radial_count(double c, double t_min, double t_max, std::size_t n_nodes);

// pi^2 / (K n)^2 - eps / (n^2 + K n).
double trial_interval_value(double eps, double K, long n);

struct Interval {
    long n;
    double t_lo;  // n^2
    double t_hi;  // n^2 + K n
    double value;
};
std::vector<Interval> disjoint_interval_schedule(double eps, double K, long n_start, int count);
// Intervals from the schedule that end below t_max.
std::vector<Interval> schedule_below(double eps, double K, long n_start, double t_max);

// Rayleigh quotient of the first Dirichlet sine mode of `iv` for -d^2/dt^2 - c/t, by quadrature.
double interval_rayleigh_quotient(double c, const Interval& iv);

}  // namespace efimov4d::spectral
