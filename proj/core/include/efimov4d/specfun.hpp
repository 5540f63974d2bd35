#pragma once

#include <stdexcept>

namespace efimov4d::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

// Order of a modified Bessel function of the second kind. Only K0..K3 exist here.
class BesselOrder {
public:
    constexpr explicit BesselOrder(int nu) : nu_(nu) {
        if (nu < 0 || nu > 3) throw std::domain_error("BesselOrder: nu must be in {0,1,2,3}");
    }
    constexpr int value() const { return nu_; }

private:
    int nu_;
};

struct BesselValue {
    double value;
    bool underflow;  // true when exp(-z) is below the double range and value was set to 0
};

// K_nu(z), z > 0. Throws std::domain_error for z <= 0; returns 0 on underflow.
double bessel_k(BesselOrder nu, double z);
BesselValue bessel_k_checked(BesselOrder nu, double z);
// exp(z) * K_nu(z); never underflows.
double bessel_k_scaled(BesselOrder nu, double z);

// All four orders at once, sharing the K0/K1 evaluation.
struct BesselSet {
    double k0, k1, k2, k3;
};
BesselSet bessel_k_all(double z);

class NotImplemented : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class ExpansionOrder { Leading = 0, Full = 1 };

// Truncated small-argument expansion of K_nu. Leading keeps only the singular term,
// Full adds the first correction. Requires 0 < z <= 1.
double small_z_reference(BesselOrder nu, double z, ExpansionOrder order = ExpansionOrder::Full);
// Integer form; any order other than 0 or 1 throws NotImplemented.
double small_z_reference(BesselOrder nu, double z, int order);

enum class BesselCombo {
    K0K2_minus_K1sq,
    K1K3_minus_K2sq,
    one_minus_zK1_times_K2,
    two_minus_z2K2_times_K2,
};

double bessel_combo(BesselCombo id, double z);

// 0.5 z^2 (K_nu^2 - K_{nu-1} K_{nu+1}); derivative in z is z K_nu(z)^2. nu in {1,2}.
double k_square_antiderivative(BesselOrder nu, double z);

}  // namespace efimov4d::specfun
