#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "efimov4d/criticality.hpp"
#include "efimov4d/geometry.hpp"
#include "efimov4d/quadrature.hpp"
#include "efimov4d/trialstate.hpp"

namespace efimov4d::energy {

using criticality::RadialPotential;
using criticality::ResonanceProfile;
using trialstate::TrialParams;

struct PaperConstants {
    double C1, C2, C3, C4, C5;
    double energy_coeff;         // C1 + C3 + C4
    double energy_coeff_closed;  // 2 pi^2 mu0^2 (1 - 2 K2(mu0))
    double kinetic_coeff;        // C5 / (4 pi^2)
};
PaperConstants paper_constants(double mu0);

struct EnergyOptions {
    double rel_tol = 1e-9;
    // The exterior is cut off at L/2 + truncation_factor / mu from each well center.
    double truncation_factor = 30.0;
    std::size_t max_cells = quadrature::kDefaultCellBudget;
    bool with_kinetic = true;
};

struct RegionPiece {
    double norm_sq = 0.0;
    double grad_sq = 0.0;
};

struct EnergyReport {
    double L = 0.0;
    double mu0 = 0.0;
    double theta = 0.0;
    double norm_sq = 0.0;
    double grad_sq = 0.0;
    double pot_term = 0.0;
    double energy = 0.0;
    double rayleigh = 0.0;
    double kinetic_control = 0.0;
    double kinetic_single = 0.0;  // Q(u+) + Q(u-)
    double kinetic_cross = 0.0;   // 2 Q(u+, u-)
    // pot_term + 2 ||grad phi||^2 on the balls; compare with -8 pi^2 rho^-2.
    double ball_balance = 0.0;
    std::map<RegionTag, RegionPiece> per_region;
};

struct NormBreakdown {
    double ball = 0.0;      // one ball
    double annulus = 0.0;   // one annulus
    double exterior = 0.0;
    double total = 0.0;
};
NormBreakdown norm_breakdown(const TrialParams& p, const ResonanceProfile& res, const EnergyOptions& opt = {});
double norm_squared(const TrialParams& p, const ResonanceProfile& res, const EnergyOptions& opt = {});

EnergyReport energy_form(const TrialParams& p, const ResonanceProfile& res, const RadialPotential& pot,
                         const EnergyOptions& opt = {});

// energy_form at each L (concurrently), reports in the order of `Ls`.
std::vector<EnergyReport> energy_scan(const ResonanceProfile& res, const RadialPotential& pot, double mu0,
                                      double delta, const std::vector<double>& Ls, const EnergyOptions& opt = {});

struct KineticReport {
    double total = 0.0;
    double single = 0.0;
    double cross = 0.0;
};
KineticReport kinetic_control_breakdown(const TrialParams& p, const EnergyOptions& opt = {});
double kinetic_control_form(const TrialParams& p, const EnergyOptions& opt = {});

// Kinetic energy of the pure far field on Omega_{2 rho} (no potential, no interpolation).
double far_field_gradient(const TrialParams& p, const EnergyOptions& opt = {});

enum class FitModel { PowerCorrection, Logarithmic };

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AsymptoticFit {
    FitModel model = FitModel::PowerCorrection;
    double a = 0.0;
    double b = 0.0;
    double residual_norm = 0.0;
    double theta = 0.0;
    std::vector<double> L_samples;
};

// PowerCorrection: value = a + b L^(theta - 1).  Logarithmic: value = a log L + b.
AsymptoticFit fit_asymptotic(const std::vector<std::pair<double, double>>& samples, double theta, FitModel model);

struct EffectiveCoupling {
    double value;
    bool exceeds_half;
};
// 5/6 - (11/4) eps.
EffectiveCoupling effective_coupling(double eps);

// Largest mu0 on a fine grid in (0, 2] with (1/2) mu0^2 (1 - 2 K2(mu0)) <= -2 + eps/2.
double recipe_mu0(double eps);

std::string to_string(FitModel m);

}  // namespace efimov4d::energy
