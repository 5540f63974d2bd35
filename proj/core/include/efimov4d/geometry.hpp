#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace efimov4d {

using Vec4 = std::array<double, 4>;

// A point of R^4. The separation axis is the fourth coordinate.
struct Point4 {
    Vec4 x{};

    static Point4 from_axisym(double w, double s) { return Point4{{s, 0.0, 0.0, w}}; }
    double axial() const { return x[3]; }
    double transverse() const { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }
    double norm() const { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }
};

inline Vec4 operator+(const Vec4& a, const Vec4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
inline Vec4 operator-(const Vec4& a, const Vec4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
inline Vec4 operator*(double c, const Vec4& a) { return {c * a[0], c * a[1], c * a[2], c * a[3]}; }
inline double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }
inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

enum class RegionTag { BallPlus, BallMinus, AnnulusPlus, AnnulusMinus, Exterior };

inline constexpr std::string_view to_string(RegionTag t) {
    switch (t) {
        case RegionTag::BallPlus: return "BallPlus";
        case RegionTag::BallMinus: return "BallMinus";
        case RegionTag::AnnulusPlus: return "AnnulusPlus";
        case RegionTag::AnnulusMinus: return "AnnulusMinus";
        case RegionTag::Exterior: return "Exterior";
    }
    return "?";
}

inline constexpr double kPi = 3.14159265358979323846;
// Surface area of the unit 3-sphere.
inline constexpr double kSphere3 = 2.0 * kPi * kPi;

}  // namespace efimov4d
