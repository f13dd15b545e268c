#include "mtrap/minkowski.hpp"

#include <algorithm>

#include "mtrap/errors.hpp"

namespace mtrap {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::NotLightlike: return "NotLightlike";
        case ErrorKind::DegeneratePlane: return "DegeneratePlane";
        case ErrorKind::OutOfDomain: return "OutOfDomain";
        case ErrorKind::InvalidDomain: return "InvalidDomain";
        case ErrorKind::NotSpacelike: return "NotSpacelike";
        case ErrorKind::NotMarginallyTrapped: return "NotMarginallyTrapped";
        case ErrorKind::InconsistentFrameEquations: return "InconsistentFrameEquations";
        case ErrorKind::DegenerateType: return "DegenerateType";
        case ErrorKind::GaugeNotConstant: return "GaugeNotConstant";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::CompatibilityViolated: return "CompatibilityViolated";
        case ErrorKind::MetricDriftExceeded: return "MetricDriftExceeded";
        case ErrorKind::UnsupportedConfig: return "UnsupportedConfig";
        case ErrorKind::InvalidGrid: return "InvalidGrid";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

const char* to_string(CausalCharacter c) {
    switch (c) {
        case CausalCharacter::Spacelike: return "spacelike";
        case CausalCharacter::Timelike: return "timelike";
        case CausalCharacter::Lightlike: return "lightlike";
    }
    return "unknown";
}

double norm_inf(const Vector4& a) {
    double m = 0.0;
    for (double x : a.c) m = std::max(m, std::abs(x));
    return m;
}

CausalCharacter causal_character(const Vector4& a, double tol) {
    const double n = norm_inf(a);
    if (n < tol) throw Error(ErrorKind::ZeroVector, "causal character of a zero vector");
    const double q = inner(a, a);
    const double thr = tol * std::max(1.0, n * n);
    if (q > thr) return CausalCharacter::Spacelike;
    if (q < -thr) return CausalCharacter::Timelike;
    return CausalCharacter::Lightlike;
}

double null_frame_defect(const NullNormalFrame& f) {
    return std::max({std::abs(inner(f.n1, f.n1)), std::abs(inner(f.n2, f.n2)),
                     std::abs(inner(f.n1, f.n2) + 1.0)});
}

NullNormalFrame complete_null_frame(const Vector4& n1, const Vector4& m, double tol) {
    if (causal_character(n1) != CausalCharacter::Lightlike)
        throw Error(ErrorKind::NotLightlike, "first normal is not lightlike");
    const double mn = inner(m, n1);
    if (std::abs(mn) <= tol * std::max(1.0, norm_inf(m) * norm_inf(n1)))
        throw Error(ErrorKind::DegeneratePlane, "seed vector is orthogonal to the lightlike normal");
    const Vector4 n2p = m - (inner(m, m) / (2.0 * mn)) * n1;
    const Vector4 n2 = (-1.0 / inner(n2p, n1)) * n2p;
    return {n1, n2};
}

Vector4 LorentzMotion::linear(const Vector4& p) const {
    Vector4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i] += L[i][j] * p[j];
    return r;
}

LorentzMotion LorentzMotion::rotation12(double a) {
    LorentzMotion m;
    m.L[0][0] = std::cos(a);
    m.L[0][1] = -std::sin(a);
    m.L[1][0] = std::sin(a);
    m.L[1][1] = std::cos(a);
    return m;
}

LorentzMotion LorentzMotion::rotation23(double a) {
    LorentzMotion m;
    m.L[1][1] = std::cos(a);
    m.L[1][2] = -std::sin(a);
    m.L[2][1] = std::sin(a);
    m.L[2][2] = std::cos(a);
    return m;
}

LorentzMotion LorentzMotion::boost34(double r) {
    LorentzMotion m;
    m.L[2][2] = std::cosh(r);
    m.L[2][3] = std::sinh(r);
    m.L[3][2] = std::sinh(r);
    m.L[3][3] = std::cosh(r);
    return m;
}

LorentzMotion LorentzMotion::translation(const Vector4& t) {
    LorentzMotion m;
    m.t = t;
    return m;
}

LorentzMotion operator*(const LorentzMotion& a, const LorentzMotion& b) {
    LorentzMotion r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += a.L[i][k] * b.L[k][j];
            r.L[i][j] = s;
        }
    r.t = a.linear(b.t) + a.t;
    return r;
}

double LorentzMotion::isometry_defect() const {
    static constexpr double g[4] = {1, 1, 1, -1};
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += L[k][i] * g[k] * L[k][j];
            d = std::max(d, std::abs(s - (i == j ? g[i] : 0.0)));
        }
    return d;
}

}  // namespace mtrap
