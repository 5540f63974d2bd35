// Command line front end: one subcommand per verification workflow.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "efimov4d/acceptance.hpp"
#include "efimov4d/criticality.hpp"
#include "efimov4d/energy.hpp"
#include "efimov4d/identities.hpp"
#include "efimov4d/parallel.hpp"
#include "efimov4d/quadrature.hpp"
#include "efimov4d/specfun.hpp"
#include "efimov4d/spectral.hpp"
#include "efimov4d/trialstate.hpp"

using namespace efimov4d;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string config_path;
    double mu0 = 0.3;
    std::optional<double> delta;
    std::vector<double> L;
    std::string grid = "default";
    double c = 0.5;
    double t_min = 10.0;
    double t_max = 1e4;
    long nodes = 1000000;
    double s = 0.0;
    double r_max = 3.0;
    int points = 101;
    double rel_tol = 1e-9;
    long max_cells = static_cast<long>(quadrature::kDefaultCellBudget);
    double coupling_scale = 1.0;
    int refine = 0;
    std::optional<int> digits;
    std::string out_path;
    std::string json_path;
    std::vector<std::string> checks;
};

// Output sink: stdout or a file, numbers at a fixed precision.
class Table {
public:
    Table(const std::string& path, int digits) : digits_(digits) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    std::string num(double v) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits_, v);
        return buf;
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os() << (i ? "," : "") << cells[i];
        os() << '\n';
    }

private:
    int digits_;
    std::ofstream file_;
};

void emit_json(const json& j, const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
        fallback << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open json file " + path);
    f << j.dump(2) << '\n';
}

int digits_or(const RunConfig& cfg, int def) { return cfg.digits.value_or(def); }

int cmd_bessel_check(const RunConfig& cfg) {
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"z", "k0", "k1", "k2", "k3", "recurrence_residual"});
    double worst = 0.0;
    const int n = cfg.points;
    for (int i = 0; i < n; ++i) {
        const double z = 1e-3 * std::pow(5e4, n > 1 ? static_cast<double>(i) / (n - 1) : 0.0);
        const auto k = specfun::bessel_k_all(z);
        double res = 0.0;
        if (k.k3 > 0.0) {
            res = std::max(std::abs(k.k2 - k.k0 - 2.0 / z * k.k1) / k.k2, std::abs(k.k3 - k.k1 - 4.0 / z * k.k2) / k.k3);
        }
        worst = std::max(worst, res);
        t.row({t.num(z), t.num(k.k0), t.num(k.k1), t.num(k.k2), t.num(k.k3), t.num(res)});
    }
    return worst < 1e-12 ? kExitOk : kExitFail;
}

int cmd_quad_selftest(const RunConfig& cfg) {
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"case", "exact", "numeric", "rel_err"});
    struct Case {
        std::string name;
        double exact, numeric;
    };
    std::vector<Case> cases;
    quadrature::Options o;
    o.rel_tol = 1e-12;
    cases.push_back({"gauss_line", std::sqrt(kPi),
                     quadrature::integrate([](double x) { return std::exp(-x * x); }, -12.0, 12.0, o).value});
    cases.push_back({"log_singular", -1.0, quadrature::integrate([](double x) { return std::log(x); }, 0.0, 1.0, o).value});
    // Volume of the unit ball in R^4 through the radial and the two-dimensional paths.
    cases.push_back({"ball_radial", kPi * kPi / 2.0,
                     quadrature::radial_integrate([](double) { return 1.0; }, {0.0, 1.0}, o).value});
    quadrature::AxisymField one;
    one.evaluator = [](double, double) { return 1.0; };
    one.centers = {0.0};
    cases.push_back({"ball_axisym", kPi * kPi / 2.0,
                     quadrature::axisym_integrate(one, quadrature::AxisymRegion::shell(0, 0.0, 1.0), 1.0, o).value});
    const auto gg = identities::conv_g_g(1.0, 2.0, 1e-10);
    cases.push_back({"green_convolution", gg.closed_form, gg.numeric});
    double worst = 0.0;
    for (const auto& c : cases) {
        const double e = std::abs(c.numeric - c.exact) / std::abs(c.exact);
        worst = std::max(worst, e);
        t.row({c.name, t.num(c.exact), t.num(c.numeric), t.num(e)});
    }
    return worst < 1e-8 ? kExitOk : kExitFail;
}

int cmd_identities(const RunConfig& cfg) {
    if (cfg.grid != "default" && cfg.grid != "fine") throw UsageError("--grid must be default or fine");
    const bool fine = cfg.grid == "fine";
    const auto reps = identities::identity_grid(fine ? identities::fine_mu_grid() : identities::default_mu_grid(),
                                                fine ? identities::fine_d_grid() : identities::default_d_grid());
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"name", "component", "mu", "d", "closed_form", "numeric", "rel_err"});
    double worst = 0.0;
    for (const auto& r : reps) {
        worst = std::max(worst, r.rel_err);
        t.row({r.name, r.component, t.num(r.mu), t.num(r.d), t.num(r.closed_form), t.num(r.numeric), t.num(r.rel_err)});
    }
    return worst < 1e-5 ? kExitOk : kExitFail;
}

int cmd_critical_coupling(const RunConfig& cfg) {
    const auto pot = criticality::RadialPotential::square_well();
    const double lc = criticality::find_lambda_crit(pot, {5.0, 6.5});
    Table t(cfg.out_path, digits_or(cfg, 10));
    t.os() << t.num(lc) << '\n';
    return kExitOk;
}

int cmd_resonance(const RunConfig& cfg) {
    const auto w = criticality::critical_unit_well();
    const auto bal = criticality::zero_energy_balance(w.profile, w.pot);
    std::cerr << "lambda_c=" << Table("", 17).num(w.pot.coupling)
              << " zero_energy_residual=" << Table("", 17).num(bal.residual / bal.grad_sq)
              << " c0_identity_residual=" << Table("", 17).num(criticality::c0_identity_residual(w.profile, w.pot))
              << '\n';
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"r", "u", "du"});
    const double rmax = cfg.r_max;
    const int n = std::max(2, cfg.points);
    for (int i = 0; i < n; ++i) {
        const double r = rmax * i / (n - 1);
        t.row({t.num(r), t.num(r > 0.0 ? w.profile.value(r) : w.profile.values().front()),
               t.num(r > 0.0 ? w.profile.derivative(r) : 0.0)});
    }
    return kExitOk;
}

trialstate::TrialParams make_params(double L, const RunConfig& cfg, double delta) {
    try {
        return trialstate::TrialParams(L, cfg.mu0, delta);
    } catch (const std::exception& e) {
        throw UsageError(std::string("invalid parameters: ") + e.what());
    }
}

int cmd_trial_slice(const RunConfig& cfg) {
    if (cfg.L.size() != 1) throw UsageError("trial-slice takes exactly one --L");
    const double delta = cfg.delta.value_or(1.0);
    const auto p = make_params(cfg.L.front(), cfg, delta);
    const auto w = criticality::critical_unit_well();
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"w", "s", "region", "phi", "gamma", "f", "grad_phi_axial", "grad_phi_transverse"});
    const int n = std::max(2, cfg.points);
    const double half = 0.5 * p.L() + 3.0 * p.rho();
    for (int i = 0; i < n; ++i) {
        const double wv = -half + 2.0 * half * i / (n - 1);
        const Point4 x = Point4::from_axisym(wv, cfg.s);
        const double d1 = std::hypot(wv - 0.5 * p.L(), cfg.s), d2 = std::hypot(wv + 0.5 * p.L(), cfg.s);
        if (d1 == 0.0 || d2 == 0.0) continue;  // the Green functions are singular at the centers
        const Vec4 g = trialstate::grad_phi(p, w.profile, x);
        t.row({t.num(wv), t.num(cfg.s), std::string(to_string(trialstate::classify(p, x))),
               t.num(trialstate::assemble_phi(p, w.profile, x)), t.num(trialstate::gamma_far(p, x)),
               t.num(trialstate::interp_f(p, w.profile, x)), t.num(g[3]), t.num(g[0])});
    }
    return kExitOk;
}

// delta = 1 needs L > 4^5 for separated annuli; without an explicit --delta, fall back to 4.
double scan_delta(const RunConfig& cfg) {
    if (cfg.delta) return *cfg.delta;
    for (double L : cfg.L) {
        try {
            trialstate::TrialParams(L, cfg.mu0, 1.0);
        } catch (const std::exception&) {
            std::cerr << "note: delta = 1 is infeasible at L = " << L << "; using delta = 4\n";
            return 4.0;
        }
    }
    return 1.0;
}

json fit_json(const energy::AsymptoticFit& f) {
    return {{"model", energy::to_string(f.model)}, {"a", f.a},       {"b", f.b},
            {"residual_norm", f.residual_norm},    {"theta", f.theta}, {"L", f.L_samples}};
}

int cmd_energy_scan(const RunConfig& cfg) {
    if (cfg.L.empty()) throw UsageError("energy-scan needs --L");
    const double delta = scan_delta(cfg);
    for (double L : cfg.L) make_params(L, cfg, delta);
    const auto w = criticality::critical_unit_well();
    energy::EnergyOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.max_cells = static_cast<std::size_t>(cfg.max_cells);
    const auto reps = energy::energy_scan(w.profile, w.pot, cfg.mu0, delta, cfg.L, opt);

    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"L", "norm_sq", "grad_sq", "pot_term", "energy", "rayleigh", "rayleigh_L2logL", "kinetic_control",
           "ball_norm", "annulus_norm", "exterior_norm", "ball_grad", "annulus_grad", "exterior_grad"});
    for (const auto& r : reps) {
        const auto& ball = r.per_region.at(RegionTag::BallPlus);
        const auto& ann = r.per_region.at(RegionTag::AnnulusPlus);
        const auto& ext = r.per_region.at(RegionTag::Exterior);
        t.row({t.num(r.L), t.num(r.norm_sq), t.num(r.grad_sq), t.num(r.pot_term), t.num(r.energy), t.num(r.rayleigh),
               t.num(r.rayleigh * r.L * r.L * std::log(r.L)), t.num(r.kinetic_control), t.num(ball.norm_sq),
               t.num(ann.norm_sq), t.num(ext.norm_sq), t.num(ball.grad_sq), t.num(ann.grad_sq), t.num(ext.grad_sq)});
    }

    json summary = {{"mu0", cfg.mu0}, {"delta", delta}};
    const double theta = 4.0 / (4.0 + delta);
    if (reps.size() >= 3) {
        std::vector<std::pair<double, double>> norm, en, kin;
        for (const auto& r : reps) {
            norm.emplace_back(r.L, r.norm_sq);
            en.emplace_back(r.L, r.L * r.L * r.energy);
            kin.emplace_back(r.L, r.L * r.L * r.kinetic_control);
        }
        try {
            summary["norm_sq"] = fit_json(energy::fit_asymptotic(norm, theta, energy::FitModel::Logarithmic));
            summary["L2_energy"] = fit_json(energy::fit_asymptotic(en, theta, energy::FitModel::PowerCorrection));
            summary["L2_kinetic_control"] =
                fit_json(energy::fit_asymptotic(kin, 2.0 * theta - 1.0, energy::FitModel::PowerCorrection));
        } catch (const energy::FitError& e) {
            summary["fit_error"] = e.what();
        }
        const auto pc = energy::paper_constants(cfg.mu0);
        summary["targets"] = {{"four_pi_sq", 4.0 * kPi * kPi}, {"energy_coeff", pc.energy_coeff_closed}, {"C5", pc.C5}};
    } else {
        summary["fit_error"] = "fewer than 3 L values";
    }
    emit_json(summary, cfg.json_path, std::cerr);
    return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg) {
    if (cfg.L.empty()) throw UsageError("spectrum needs --L");
    const double delta = cfg.delta.value_or(4.0);
    for (double L : cfg.L) {
        if (!(L > 0.0) || L > 200.0) throw UsageError("spectrum: direct eigensolves are limited to 0 < L <= 200");
        make_params(L, cfg, delta);
    }
    const auto w = criticality::critical_unit_well();
    struct Row {
        double rayleigh;
        spectral::CriticalRun run;
    };
    const auto rows = parallel::map(cfg.L, [&](double L) {
        energy::EnergyOptions opt;
        opt.with_kinetic = false;
        const double ray = energy::energy_form(make_params(L, cfg, delta), w.profile, w.pot, opt).rayleigh;
        return Row{ray, spectral::critical_double_well(w.pot, L, ray, cfg.coupling_scale, cfg.refine)};
    });
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"L", "ground_energy", "rayleigh", "negative_count", "grid_critical_coupling", "coupling", "unknowns",
           "iterations", "residual"});
    for (const auto& r : rows) {
        const auto& s = r.run.report;
        t.row({t.num(s.L), t.num(s.ground_energy), t.num(r.rayleigh), std::to_string(s.negative_count),
               t.num(r.run.grid_critical_coupling), t.num(s.coupling), std::to_string(s.unknowns),
               std::to_string(s.iterations), t.num(s.residual)});
    }
    return kExitOk;
}

int cmd_effective_count(const RunConfig& cfg) {
    if (!(cfg.c >= 0.0)) throw UsageError("--c must be nonnegative");
    if (!(cfg.t_min > 1.0) || !(cfg.t_max > cfg.t_min)) throw UsageError("need 1 < --tmin < --tmax");
    if (cfg.nodes < 3) throw UsageError("--nodes must be at least 3");
    const auto r = spectral::effective_radial_count(cfg.c, cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.nodes));
    if (r.resolution_warning) std::cerr << "warning: fewer than 10 nodes per local oscillation at t_min\n";
    Table t(cfg.out_path, digits_or(cfg, 17));
    t.row({"c", "t_min", "t_max", "nodes", "count", "resolution_warning"});
    t.row({t.num(cfg.c), t.num(cfg.t_min), t.num(cfg.t_max), std::to_string(cfg.nodes), std::to_string(r.count),
           r.resolution_warning ? "1" : "0"});
    return kExitOk;
}

int cmd_full_verify(const RunConfig& cfg) {
    std::vector<acceptance::CheckResult> results;
    try {
        results = acceptance::run_checks(cfg.checks);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    json checks = json::array();
    std::vector<std::string> failed;
    for (const auto& r : results) {
        std::cerr << acceptance::format_line(r) << '\n';
        checks.push_back({{"id", r.id}, {"criterion", r.criterion}, {"description", r.description},
                          {"passed", r.passed}, {"value", r.value}, {"bound", r.bound}, {"detail", r.detail}});
        if (!r.passed) failed.push_back(r.id);
    }
    const json summary = {{"passed", failed.empty()}, {"failed", failed}, {"checks", checks}};
    emit_json(summary, cfg.json_path, std::cout);
    if (!failed.empty()) {
        std::cerr << "failing checks:";
        for (const auto& id : failed) std::cerr << ' ' << id;
        std::cerr << '\n';
        return kExitFail;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"efimov4d: verification workflows for the four-dimensional double-well construction"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.set_config("--config", "", "flat key=value file; command line flags override it");
    app.add_option("--mu0", cfg.mu0, "Green function mass parameter")->check(CLI::PositiveNumber);
    app.add_option("--delta", cfg.delta, "cutoff exponent delta (theta = 4 / (4 + delta))")->check(CLI::PositiveNumber);
    app.add_option("--L", cfg.L, "separations, comma separated")->delimiter(',');
    app.add_option("--grid", cfg.grid, "identity grid: default or fine");
    app.add_option("--c", cfg.c, "coupling of the -c/t potential");
    app.add_option("--tmin", cfg.t_min, "left end of the log-variable interval");
    app.add_option("--tmax", cfg.t_max, "right end of the log-variable interval");
    app.add_option("--rmax", cfg.r_max, "largest radius of the resonance table")->check(CLI::PositiveNumber);
    app.add_option("--nodes", cfg.nodes, "interior nodes of the 1D discretization");
    app.add_option("--s", cfg.s, "transverse coordinate of the slice")->check(CLI::NonNegativeNumber);
    app.add_option("--points", cfg.points, "number of sample points")->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.rel_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-cells", cfg.max_cells, "quadrature cell budget")->check(CLI::PositiveNumber);
    app.add_option("--coupling-scale", cfg.coupling_scale, "multiple of the grid critical coupling")
        ->check(CLI::PositiveNumber);
    app.add_option("--refine", cfg.refine, "grid halvings")->check(CLI::Range(0, 3));
    app.add_option("--digits", cfg.digits, "significant digits")->check(CLI::Range(1, 17));
    app.add_option("--out", cfg.out_path, "CSV output file (default stdout)");
    app.add_option("--json", cfg.json_path, "JSON output file");
    app.add_option("--check", cfg.checks, "acceptance checks or criterion numbers to run")->delimiter(',');

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const RunConfig&);
    };
    const Sub subs[] = {
        {"bessel-check", "table of K0..K3 with recurrence residuals", cmd_bessel_check},
        {"quad-selftest", "quadrature against closed forms", cmd_quad_selftest},
        {"identities-check", "Green function convolution identities", cmd_identities},
        {"critical-coupling", "critical coupling of the unit square well", cmd_critical_coupling},
        {"resonance", "zero-energy resonance profile", cmd_resonance},
        {"trial-slice", "trial state along an axial line", cmd_trial_slice},
        {"energy-scan", "energy form over a list of separations", cmd_energy_scan},
        {"spectrum", "double-well ground state by direct eigensolve", cmd_spectrum},
        {"effective-count", "negative eigenvalues of -d^2/dt^2 - c/t", cmd_effective_count},
        {"full-verify", "acceptance suite with a JSON summary", cmd_full_verify},
    };
    int (*chosen)(const RunConfig&) = nullptr;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->fallthrough();
        sub->callback([&chosen, fn = s.fn] { chosen = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return chosen(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
}
