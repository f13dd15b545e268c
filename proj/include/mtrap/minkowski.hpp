#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace mtrap {

// A point or vector of R^4_1; the fourth coordinate is the time coordinate.
struct Vector4 {
    std::array<double, 4> c{};

    constexpr Vector4() = default;
    constexpr Vector4(double x1, double x2, double x3, double x4) : c{x1, x2, x3, x4} {}

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vector4& operator+=(const Vector4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vector4& operator-=(const Vector4& o) {
        for (std::size_t i = 0; i < 4; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vector4& operator*=(double s) {
        for (auto& x : c) x *= s;
        return *this;
    }
    bool finite() const {
        for (double x : c)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

constexpr Vector4 operator+(Vector4 a, const Vector4& b) { return a += b; }
constexpr Vector4 operator-(Vector4 a, const Vector4& b) { return a -= b; }
constexpr Vector4 operator-(Vector4 a) { return a *= -1.0; }
constexpr Vector4 operator*(double s, Vector4 a) { return a *= s; }
constexpr Vector4 operator*(Vector4 a, double s) { return a *= s; }
constexpr Vector4 operator/(Vector4 a, double s) { return a *= (1.0 / s); }

// Indefinite inner product of signature (+,+,+,-).
constexpr double inner(const Vector4& a, const Vector4& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3];
}

double norm_inf(const Vector4& a);

namespace basis {
inline constexpr Vector4 e1{1, 0, 0, 0};
inline constexpr Vector4 e2{0, 1, 0, 0};
inline constexpr Vector4 e3{0, 0, 1, 0};
inline constexpr Vector4 e4{0, 0, 0, 1};
// Pseudo-orthonormal null pair: <xi1,xi1> = <xi2,xi2> = 0, <xi1,xi2> = -1.
inline constexpr Vector4 xi1{0, 0, 0.70710678118654752440, 0.70710678118654752440};
inline constexpr Vector4 xi2{0, 0, -0.70710678118654752440, 0.70710678118654752440};
}  // namespace basis

enum class CausalCharacter { Spacelike, Timelike, Lightlike };

const char* to_string(CausalCharacter c);

inline constexpr double kLightlikeTol = 1e-9;

// The threshold is tol * max(1, |a|_inf^2). Throws ZeroVector when every
// component is below tol in magnitude.
CausalCharacter causal_character(const Vector4& a, double tol = kLightlikeTol);

struct NullNormalFrame {
    Vector4 n1;
    Vector4 n2;
};

inline constexpr NullNormalFrame kStandardNullFrame{basis::xi1, basis::xi2};

// Largest violation of <n1,n1> = <n2,n2> = 0, <n1,n2> = -1.
double null_frame_defect(const NullNormalFrame& f);

// Unique n2 in span{n1, m} with <n2,n2> = 0 and <n1,n2> = -1.
// Throws NotLightlike if n1 is not a nonzero null vector and DegeneratePlane
// if <m,n1> vanishes relative to tol.
NullNormalFrame complete_null_frame(const Vector4& n1, const Vector4& m, double tol = 1e-12);

// Isometry of R^4_1: p -> L p + t with L^T g L = g.
struct LorentzMotion {
    std::array<std::array<double, 4>, 4> L{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    Vector4 t{};

    Vector4 apply(const Vector4& p) const { return linear(p) + t; }
    Vector4 linear(const Vector4& p) const;

    static LorentzMotion identity() { return {}; }
    static LorentzMotion rotation12(double angle);
    static LorentzMotion rotation23(double angle);
    static LorentzMotion boost34(double rapidity);
    static LorentzMotion translation(const Vector4& t);

    // (a * b)(p) = a(b(p))
    friend LorentzMotion operator*(const LorentzMotion& a, const LorentzMotion& b);

    // max |L^T g L - g| entrywise.
    double isometry_defect() const;
};

}  // namespace mtrap
