#include "efimov4d/specfun.hpp"

#include <cmath>
#include <limits>

namespace efimov4d::specfun {
namespace {

constexpr double kSeriesSwitch = 2.0;
constexpr int kMaxSeriesTerms = 60;
constexpr int kMinSeriesTerms = 25;

// K0 and K1 from the ascending series around zero, valid for 0 < z <= 2.
// Also returns the I1-based remainder needed for 1 - z K1 without cancellation.
struct SmallZ {
    double k0;
    double k1;
    double one_minus_zk1;
};

SmallZ small_series(double z) {
    const double lz = std::log(0.5 * z);
    const double q = 0.25 * z * z;

    // I0, I1 and the digamma-weighted sums.
    double term0 = 1.0;   // q^k / (k!)^2
    double term1 = 1.0;   // q^k / (k! (k+1)!)
    double psi_k1 = -kEulerGamma;        // psi(k+1)
    double psi_k2 = 1.0 - kEulerGamma;   // psi(k+2)
    double i0 = 0.0, i1s = 0.0, s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        i0 += term0;
        i1s += term1;
        s0 += term0 * psi_k1;
        s1 += term1 * (psi_k1 + psi_k2);
        if (k + 1 >= kMinSeriesTerms && term0 < 1e-18 * std::abs(i0)) break;
        const double kp1 = k + 1.0;
        term0 *= q / (kp1 * kp1);
        term1 *= q / (kp1 * (kp1 + 1.0));
        psi_k1 += 1.0 / kp1;
        psi_k2 += 1.0 / (kp1 + 1.0);
    }
    const double i1 = 0.5 * z * i1s;
    SmallZ out{};
    out.k0 = -lz * i0 + s0;
    // z K1 = 1 + z log(z/2) I1 - (z^2/4) sum(...)
    const double tail = z * lz * i1 - 0.25 * z * z * s1;
    out.k1 = (1.0 + tail) / z;
    out.one_minus_zk1 = -tail;
    return out;
}

// exp(z) K0, exp(z) K1 by Steed's continued fraction (Temme's CF2), z >= 2.
void large_scaled(double z, double& k0s, double& k1s) {
    constexpr double kEps = 1e-17;
    constexpr int kMaxIter = 10000;
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < kMaxIter; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    k0s = std::sqrt(kPi / (2.0 * z)) / s;
    k1s = k0s * (z + 0.5 - h) / z;
}

struct Base {
    double k0, k1;  // possibly exponentially scaled
    bool scaled;
};

Base base_pair(double z) {
    if (!(z > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
    if (z <= kSeriesSwitch) {
        const SmallZ sz = small_series(z);
        return {sz.k0, sz.k1, false};
    }
    double k0s = 0.0, k1s = 0.0;
    large_scaled(z, k0s, k1s);
    return {k0s, k1s, true};
}

// Upward recurrence is stable for K.
double from_pair(int nu, double k0, double k1, double z) {
    switch (nu) {
        case 0: return k0;
        case 1: return k1;
        case 2: return k0 + 2.0 * k1 / z;
        default: {
            const double k2 = k0 + 2.0 * k1 / z;
            return k1 + 4.0 * k2 / z;
        }
    }
}

}  // namespace

BesselValue bessel_k_checked(BesselOrder nu, double z) {
    const Base b = base_pair(z);
    const double v = from_pair(nu.value(), b.k0, b.k1, z);
    if (!b.scaled) return {v, false};
    const double e = std::exp(-z);
    if (e == 0.0 || v * e < std::numeric_limits<double>::min()) return {0.0, true};
    return {v * e, false};
}

double bessel_k(BesselOrder nu, double z) { return bessel_k_checked(nu, z).value; }

double bessel_k_scaled(BesselOrder nu, double z) {
    const Base b = base_pair(z);
    const double v = from_pair(nu.value(), b.k0, b.k1, z);
    return b.scaled ? v : v * std::exp(z);
}

BesselSet bessel_k_all(double z) {
    const Base b = base_pair(z);
    double k0 = b.k0, k1 = b.k1;
    if (b.scaled) {
        const double e = std::exp(-z);
        k0 *= e;
        k1 *= e;
    }
    const double k2 = k0 + 2.0 * k1 / z;
    const double k3 = k1 + 4.0 * k2 / z;
    return {k0, k1, k2, k3};
}

double small_z_reference(BesselOrder nu, double z, ExpansionOrder order) {
    if (!(z > 0.0) || z > 1.0) throw std::domain_error("small_z_reference: requires 0 < z <= 1");
    const bool full = order == ExpansionOrder::Full;
    const double lz = std::log(0.5 * z);
    switch (nu.value()) {
        case 0: return full ? -lz - kEulerGamma : -lz;
        case 1: return full ? 1.0 / z + 0.5 * z * (lz + kEulerGamma - 0.5) : 1.0 / z;
        case 2: return full ? 2.0 / (z * z) - 0.5 : 2.0 / (z * z);
        default: return full ? 8.0 / (z * z * z) - 1.0 / z : 8.0 / (z * z * z);
    }
}

double small_z_reference(BesselOrder nu, double z, int order) {
    if (order != 0 && order != 1)
        throw NotImplemented("small_z_reference: only orders 0 (leading) and 1 (full) exist");
    return small_z_reference(nu, z, static_cast<ExpansionOrder>(order));
}

double bessel_combo(BesselCombo id, double z) {
    const BesselSet k = bessel_k_all(z);
    // 1 - z K1 loses all digits to cancellation for small z; use the series remainder there.
    const double omzk1 = z <= kSeriesSwitch ? small_series(z).one_minus_zk1 : 1.0 - z * k.k1;
    switch (id) {
        case BesselCombo::K0K2_minus_K1sq: return 0.5 * z * z * (k.k0 * k.k2 - k.k1 * k.k1);
        case BesselCombo::K1K3_minus_K2sq: return 0.5 * z * z * (k.k3 * k.k1 - k.k2 * k.k2);
        case BesselCombo::one_minus_zK1_times_K2: return omzk1 * k.k2;
        case BesselCombo::two_minus_z2K2_times_K2: {
            // 2 - z^2 K2 = 2 (1 - z K1) - z^2 K0
            const double t = 2.0 * omzk1 - z * z * k.k0;
            return t * k.k2;
        }
    }
    throw std::domain_error("bessel_combo: unknown id");
}

double k_square_antiderivative(BesselOrder nu, double z) {
    const int n = nu.value();
    if (n != 1 && n != 2) throw std::domain_error("k_square_antiderivative: nu must be 1 or 2");
    if (!(z > 0.0)) throw std::domain_error("k_square_antiderivative: argument must be positive");
    const BesselSet k = bessel_k_all(z);
    const double kk[4] = {k.k0, k.k1, k.k2, k.k3};
    return 0.5 * z * z * (kk[n] * kk[n] - kk[n - 1] * kk[n + 1]);
}

}  // namespace efimov4d::specfun
