#include <benchmark/benchmark.h>

#include <cmath>

#include "efimov4d/criticality.hpp"
#include "efimov4d/energy.hpp"
#include "efimov4d/identities.hpp"
#include "efimov4d/spectral.hpp"
#include "efimov4d/specfun.hpp"

using namespace efimov4d;

namespace {

const criticality::CriticalWell& well() {
    static const criticality::CriticalWell w = criticality::critical_unit_well();
    return w;
}

void BM_BesselK(benchmark::State& state) {
    const int nu = static_cast<int>(state.range(0));
    double z = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k(specfun::BesselOrder(nu), z));
        z = z < 30.0 ? z * 1.37 : 0.013;
    }
}
BENCHMARK(BM_BesselK)->DenseRange(0, 3);

void BM_BesselKAll(benchmark::State& state) {
    double z = 0.013;
    for (auto _ : state) {
        benchmark::DoNotOptimize(specfun::bessel_k_all(z));
        z = z < 30.0 ? z * 1.37 : 0.013;
    }
}
BENCHMARK(BM_BesselKAll);

void BM_ConvK0K0(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(identities::conv_k0_k0(0.5, 3.0));
}
BENCHMARK(BM_ConvK0K0)->Unit(benchmark::kMillisecond);

void BM_FindLambdaCrit(benchmark::State& state) {
    const auto pot = criticality::RadialPotential::square_well();
    for (auto _ : state) benchmark::DoNotOptimize(criticality::find_lambda_crit(pot, {5.0, 6.5}));
}
BENCHMARK(BM_FindLambdaCrit)->Unit(benchmark::kMillisecond);

void BM_EnergyForm(benchmark::State& state) {
    const double L = std::pow(10.0, static_cast<double>(state.range(0)));
    const trialstate::TrialParams p(L, 0.3);
    energy::EnergyOptions opt;
    opt.with_kinetic = false;
    for (auto _ : state) benchmark::DoNotOptimize(energy::energy_form(p, well().profile, well().pot, opt));
}
BENCHMARK(BM_EnergyForm)->DenseRange(4, 5)->Unit(benchmark::kMillisecond);

void BM_EffectiveCount(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectral::effective_radial_count(10.0, 2.0, 1e4, n));
}
BENCHMARK(BM_EffectiveCount)->RangeMultiplier(4)->Range(1 << 12, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
